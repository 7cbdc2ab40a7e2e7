#include "framesurf/dgops.hpp"

#include "framesurf/gterm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace framesurf {

FluxKind parse_flux_kind(const std::string& s) {
  if (s == "upwind") return FluxKind::upwind;
  if (s == "lax_friedrichs" || s == "lf") return FluxKind::lax_friedrichs;
  if (s == "central") return FluxKind::central;
  throw std::invalid_argument("unknown flux '" + s + "' (expected upwind|lax_friedrichs|central)");
}

GSign parse_g_sign(const std::string& s) {
  if (s == "added" || s == "+") return GSign::added;
  if (s == "subtracted" || s == "-") return GSign::subtracted;
  throw std::invalid_argument("unknown G sign '" + s + "' (expected added|subtracted)");
}

ConormalRule parse_conormal_rule(const std::string& s) {
  if (s == "per_side") return ConormalRule::per_side;
  if (s == "shared") return ConormalRule::shared;
  if (s == "frame") return ConormalRule::frame;
  throw std::invalid_argument("unknown conormal rule '" + s +
                              "' (expected per_side|shared|frame)");
}

Vec3Field compose(const Triad& e, const Eigen::MatrixXd& c1, const Eigen::MatrixXd& c2) {
  Vec3Field v;
  for (int c = 0; c < 3; ++c) {
    v[c] = (c1.array() * e[0][c].array() + c2.array() * e[1][c].array()).matrix();
  }
  return v;
}

Vec3Field effective_conormals(const DgSpace& space, ConormalRule rule, const Vec3Field* e3_edge) {
  const Vec3Field& n = space.edges().conormal;
  if (rule == ConormalRule::per_side) return n;
  if (rule == ConormalRule::frame) {
    if (e3_edge == nullptr) throw std::invalid_argument("frame conormals need the e3 edge trace");
    Vec3Field out = cross(space.edges().tangent, *e3_edge);
    normalize_in_place(out);
    return out;
  }
  Vec3Field out = n;
  for (int k = 0; k < space.num_elements(); ++k) {
    for (int row = 0; row < space.num_edge_points(); ++row) {
      const int nk = space.neighbour_element(k, row);
      const int nr = space.neighbour_row(k, row);
      const bool owner = k < nk || (k == nk && row < nr);
      if (!owner) {
        for (int c = 0; c < 3; ++c) out[c](row, k) = -n[c](nr, nk);
      }
    }
  }
  return out;
}

Eigen::MatrixXd surface_flux_integral(const DgSpace& space, const Vec3Field& flux_trace,
                                      const Vec3Field* velocity_trace,
                                      const Eigen::MatrixXd* state_trace,
                                      const FluxRule& rule, const Vec3Field* e3_edge) {
  const int nrow = space.num_edge_points();
  const int nel = space.num_elements();
  for (int c = 0; c < 3; ++c) {
    if (flux_trace[c].rows() != nrow || flux_trace[c].cols() != nel) {
      throw std::invalid_argument("surface_flux_integral: trace size mismatch");
    }
  }
  const Vec3Field n = effective_conormals(space, rule.conormals, e3_edge);
  const Vec3Field& vel = velocity_trace ? *velocity_trace : flux_trace;
  Eigen::MatrixXd out(nrow, nel);
  for (int k = 0; k < nel; ++k) {
    for (int row = 0; row < nrow; ++row) {
      const int nk = space.neighbour_element(k, row);
      const int nr = space.neighbour_row(k, row);
      const Eigen::Vector3d fl = at(flux_trace, row, k), fr = at(flux_trace, nr, nk);
      const Eigen::Vector3d nl = at(n, row, k), nn = at(n, nr, nk);
      const double sl = nl.dot(at(vel, row, k));
      const double sr = nn.dot(at(vel, nr, nk));
      Eigen::Vector3d fhat;
      double penalty = 0.0;
      switch (rule.kind) {
        case FluxKind::upwind: {
          const double an = 0.5 * (sl - sr);
          fhat = an > 0.0 ? fl : (an < 0.0 ? fr : Eigen::Vector3d(0.5 * (fl + fr)));
          break;
        }
        case FluxKind::central:
          fhat = 0.5 * (fl + fr);
          break;
        case FluxKind::lax_friedrichs:
          fhat = 0.5 * (fl + fr);
          if (state_trace) {
            const double lam = std::max(std::abs(sl), std::abs(sr));
            penalty = 0.5 * lam * ((*state_trace)(row, k) - (*state_trace)(nr, nk));
          }
          break;
      }
      out(row, k) = nl.dot(fhat) + penalty;
    }
  }
  return out;
}

Eigen::MatrixXd divergence_residual(const DgSpace& space, const Vec3Field& flux_quad,
                                    const Eigen::MatrixXd& edge_flux,
                                    const Eigen::MatrixXd* g_nodal, double g_sign) {
  const auto& q = space.quad();
  Eigen::MatrixXd r = -space.test_quad_grad(dot(q.dual1, flux_quad), dot(q.dual2, flux_quad));
  r += space.test_edges(edge_flux);
  if (g_nodal) r -= g_sign * space.test_quad(space.to_quad(*g_nodal));
  return r;
}

namespace {

void check_frame_vector(const DgSpace& space, const FrameVector& v) {
  if (v.c1.rows() != space.num_nodes() || v.c1.cols() != space.num_elements() ||
      v.c2.rows() != v.c1.rows() || v.c2.cols() != v.c1.cols()) {
    throw std::invalid_argument("frame vector does not match the discretization");
  }
}

void check_frames(const DgSpace& space, const FrameField& frames) {
  if (frames.node[0][0].rows() != space.num_nodes() ||
      frames.node[0][0].cols() != space.num_elements() ||
      frames.quad[0][0].rows() != space.num_quad()) {
    throw std::invalid_argument("frame field was built for a different discretization");
  }
}

// Residual of the transport divergence of v with the G term scaled by g_sign.
Eigen::MatrixXd transport_residual(const DgSpace& space, const FrameField& frames,
                                   const FrameVector& v, const FluxRule& flux, bool with_G,
                                   double g_sign) {
  const Vec3Field vq = compose(frames.quad, space.to_quad(v.c1), space.to_quad(v.c2));
  const Vec3Field vt = compose(frames.edge, space.to_edges(v.c1), space.to_edges(v.c2));
  const Eigen::MatrixXd fl = surface_flux_integral(space, vt, nullptr, nullptr, flux, &frames.edge[2]);
  if (!with_G) return divergence_residual(space, vq, fl, nullptr, g_sign);
  const Eigen::MatrixXd g = g_total(space, frames.node[2], compose(frames.node, v.c1, v.c2));
  return divergence_residual(space, vq, fl, &g, g_sign);
}

}  // namespace

Eigen::MatrixXd weak_divergence(const DgSpace& space, const FrameField& frames,
                                const FrameVector& v, const FluxRule& flux, bool with_G,
                                GSign sign) {
  check_frames(space, frames);
  check_frame_vector(space, v);
  return space.apply_inv_mass(
      transport_residual(space, frames, v, flux, with_G, residual_g_sign(sign)));
}

Eigen::MatrixXd weak_curl_normal(const DgSpace& space, const FrameField& frames,
                                 const FrameVector& v, const FluxRule& flux, bool with_G) {
  check_frames(space, frames);
  check_frame_vector(space, v);
  // v x e3 = -v^1 e2 + v^2 e1
  const FrameVector rotated{v.c2, -v.c1};
  Eigen::MatrixXd r = transport_residual(space, frames, rotated, flux, with_G, -1.0);
  const Vec3Field vq = compose(frames.quad, space.to_quad(v.c1), space.to_quad(v.c2));
  Vec3Field curl_q;
  for (int c = 0; c < 3; ++c) curl_q[c] = space.to_quad(frames.curl_e[2][c]);
  r += space.test_quad(dot(vq, curl_q));
  return space.apply_inv_mass(r);
}

Eigen::MatrixXd weak_directional_gradient(const DgSpace& space, const FrameField& frames,
                                          const Eigen::MatrixXd& f, int dir,
                                          const FluxRule& flux, bool with_G) {
  check_frames(space, frames);
  if (dir != 0 && dir != 1) throw std::invalid_argument("direction must be 0 or 1");
  if (f.rows() != space.num_nodes() || f.cols() != space.num_elements()) {
    throw std::invalid_argument("scalar field does not match the discretization");
  }
  const Eigen::MatrixXd fq = space.to_quad(f);
  const Eigen::MatrixXd ft = space.to_edges(f);
  const Vec3Field Fq = scale(fq, frames.quad[dir]);
  // Averaged scalar against this element's own e_dir; averaging f e_dir across the edge
  // would mix two different frames.
  const Vec3Field n = effective_conormals(space, flux.conormals, &frames.edge[2]);
  const Eigen::MatrixXd en = dot(frames.edge[dir], n);
  Eigen::MatrixXd fl(ft.rows(), ft.cols());
  for (int k = 0; k < space.num_elements(); ++k) {
    for (int row = 0; row < space.num_edge_points(); ++row) {
      const double fbar =
          0.5 * (ft(row, k) + ft(space.neighbour_row(k, row), space.neighbour_element(k, row)));
      fl(row, k) = fbar * en(row, k);
    }
  }
  Eigen::MatrixXd res;
  if (with_G) {
    const Eigen::MatrixXd g = g_total(space, frames.node[2], scale(f, frames.node[dir]));
    res = divergence_residual(space, Fq, fl, &g, -1.0);
  } else {
    res = divergence_residual(space, Fq, fl, nullptr, -1.0);
  }
  res -= space.test_quad((fq.array() * space.to_quad(frames.div_e[dir]).array()).matrix());
  return space.apply_inv_mass(res);
}

}  // namespace framesurf
