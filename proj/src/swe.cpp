#include "problems.hpp"

#include "framesurf/gterm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace framesurf {

SweConstants earth_constants() {
  const double radius = 6.37122e6;
  const double day = 86400.0;
  return {9.80616 * day * day / radius, 7.292e-5 * day};
}

namespace detail {

namespace {

constexpr double kRadius = 6.37122e6;
constexpr double kDay = 86400.0;

// Initial and forcing data of a shallow-water case on the unit sphere.
struct SweCase {
  ScalarFunction depth;       // total depth H
  VectorFunction velocity;    // tangent velocity
  ScalarFunction still;       // still-water depth H0
  ScalarFunction coriolis;    // f
  bool has_exact = false;
  std::function<ScalarFunction(double)> exact_depth;
  std::function<VectorFunction(double)> exact_velocity;
};

double latitude(const Eigen::Vector3d& x) {
  return std::asin(std::clamp(x.normalized().z(), -1.0, 1.0));
}

double longitude(const Eigen::Vector3d& x) { return std::atan2(x.y(), x.x()); }

// Cartesian vector from eastward u and northward v components.
Eigen::Vector3d east_north(const Eigen::Vector3d& x, double u, double v) {
  return from_spherical(x, v, u);
}

SweCase steady_zonal(const SweConstants& c) {
  const double alpha = std::numbers::pi / 4.0;
  const Eigen::Vector3d axis(-std::sin(alpha), 0.0, std::cos(alpha));
  const double u0 = 2.0 * std::numbers::pi / 12.0;
  const double gh0 = 2.94e4 * kDay * kDay / (kRadius * kRadius);
  const double g = c.gravity, om = c.omega;
  SweCase s;
  s.depth = [=](const Eigen::Vector3d& x) {
    const double m = axis.dot(x.normalized());
    return (gh0 - (om * u0 + 0.5 * u0 * u0) * m * m) / g;
  };
  s.velocity = [=](const Eigen::Vector3d& x) { return Eigen::Vector3d(u0 * axis.cross(x.normalized())); };
  s.still = [=](const Eigen::Vector3d&) { return gh0 / g; };
  s.coriolis = [=](const Eigen::Vector3d& x) { return 2.0 * om * axis.dot(x.normalized()); };
  s.has_exact = true;
  s.exact_depth = [d = s.depth](double) { return d; };
  s.exact_velocity = [v = s.velocity](double) { return v; };
  return s;
}

// Solid-body rotation about an axis fixed in the inertial frame, seen from the rotating one.
SweCase unsteady_zonal(const SweConstants& c) {
  const double alpha = std::numbers::pi / 4.0;
  const double u0 = 2.0 * std::numbers::pi / 12.0;
  const double scale = kDay * kDay / (kRadius * kRadius);
  const double k1 = 133681.0 * scale;
  const double k2 = 10.0 * scale;
  const double g = c.gravity, om = c.omega;
  const Eigen::Vector3d w0 = u0 * Eigen::Vector3d(-std::sin(alpha), 0.0, std::cos(alpha)) +
                             om * Eigen::Vector3d::UnitZ();
  const auto axis_at = [=](double t) { return rotate(w0, Eigen::Vector3d::UnitZ(), -om * t); };
  SweCase s;
  s.has_exact = true;
  s.exact_depth = [=](double t) {
    const Eigen::Vector3d w = axis_at(t);
    return ScalarFunction([=](const Eigen::Vector3d& x) {
      const double m = w.dot(x.normalized());
      return (k1 - 0.5 * m * m) / g;
    });
  };
  s.exact_velocity = [=](double t) {
    const Eigen::Vector3d w = axis_at(t) - om * Eigen::Vector3d::UnitZ();
    return VectorFunction([=](const Eigen::Vector3d& x) { return Eigen::Vector3d(w.cross(x.normalized())); });
  };
  s.depth = s.exact_depth(0.0);
  s.velocity = s.exact_velocity(0.0);
  s.still = [=](const Eigen::Vector3d& x) {
    const double z = x.normalized().z();
    return (k1 - k2) / g - om * om * z * z / (2.0 * g);
  };
  s.coriolis = [=](const Eigen::Vector3d& x) { return 2.0 * om * x.normalized().z(); };
  return s;
}

SweCase rossby_haurwitz(const SweConstants& c) {
  const double w = 7.848e-6 * kDay, kk = 7.848e-6 * kDay;
  const double r = 4.0;
  const double g = c.gravity, om = c.omega;
  const double h0 = 8000.0 / kRadius;
  SweCase s;
  s.velocity = [=](const Eigen::Vector3d& x) {
    const double ph = latitude(x), la = longitude(x);
    const double cp = std::cos(ph), sp = std::sin(ph);
    const double u = w * cp + kk * std::pow(cp, r - 1.0) * (r * sp * sp - cp * cp) * std::cos(r * la);
    const double v = -kk * r * std::pow(cp, r - 1.0) * sp * std::sin(r * la);
    return east_north(x, u, v);
  };
  s.depth = [=](const Eigen::Vector3d& x) {
    const double ph = latitude(x), la = longitude(x);
    const double cp = std::cos(ph), c2 = cp * cp;
    const double c2r = std::pow(cp, 2.0 * r);
    const double a = 0.5 * w * (2.0 * om + w) * c2 +
                     0.25 * kk * kk * c2r * ((r + 1.0) * c2 + (2.0 * r * r - r - 2.0) - 2.0 * r * r / c2);
    const double b = 2.0 * (om + w) * kk / ((r + 1.0) * (r + 2.0)) * std::pow(cp, r) *
                     ((r * r + 2.0 * r + 2.0) - (r + 1.0) * (r + 1.0) * c2);
    const double cc = 0.25 * kk * kk * c2r * ((r + 1.0) * c2 - (r + 2.0));
    return h0 + (a + b * std::cos(r * la) + cc * std::cos(2.0 * r * la)) / g;
  };
  s.still = [=](const Eigen::Vector3d&) { return h0; };
  s.coriolis = [=](const Eigen::Vector3d& x) { return 2.0 * om * x.normalized().z(); };
  return s;
}

// Barotropically unstable mid-latitude jet with a localized height bump.
SweCase perturbed_jet(const SweConstants& c) {
  const double g = c.gravity, om = c.omega;
  const double umax = 80.0 * kDay / kRadius;
  const double ph0 = std::numbers::pi / 7.0, ph1 = std::numbers::pi / 2.0 - ph0;
  const double en = std::exp(-4.0 / ((ph1 - ph0) * (ph1 - ph0)));
  const auto jet = [=](double ph) {
    if (ph <= ph0 || ph >= ph1) return 0.0;
    return umax / en * std::exp(1.0 / ((ph - ph0) * (ph - ph1)));
  };
  // Cumulative balance integral on a uniform latitude table.
  const int n = 20000;
  const double dphi = std::numbers::pi / n;
  auto table = std::make_shared<std::vector<double>>(n + 1, 0.0);
  const auto integrand = [=](double ph) {
    const double u = jet(ph);
    return u * (2.0 * om * std::sin(ph) + std::tan(ph) * u);
  };
  for (int i = 1; i <= n; ++i) {
    const double a = -std::numbers::pi / 2.0 + (i - 1) * dphi;
    (*table)[i] = (*table)[i - 1] +
                  dphi / 6.0 * (integrand(a) + 4.0 * integrand(a + 0.5 * dphi) + integrand(a + dphi));
  }
  double mean = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = -std::numbers::pi / 2.0 + (i + 0.5) * dphi;
    mean += 0.5 * ((*table)[i] + (*table)[i + 1]) * std::cos(a) * dphi;
  }
  mean *= 0.5;
  const double h0 = 10000.0 / kRadius + mean / g;
  const auto balance = [=](double ph) {
    const double s = std::clamp((ph + std::numbers::pi / 2.0) / dphi, 0.0, double(n));
    const int i = std::min(static_cast<int>(s), n - 1);
    const double f = s - i;
    return (1.0 - f) * (*table)[i] + f * (*table)[i + 1];
  };
  const double hhat = 120.0 / kRadius, al = 1.0 / 3.0, be = 1.0 / 15.0, ph2 = std::numbers::pi / 4.0;
  SweCase s;
  s.velocity = [=](const Eigen::Vector3d& x) { return east_north(x, jet(latitude(x)), 0.0); };
  s.depth = [=](const Eigen::Vector3d& x) {
    const double ph = latitude(x), la = longitude(x);
    const double bump = hhat * std::cos(ph) * std::exp(-(la / al) * (la / al)) *
                        std::exp(-((ph2 - ph) / be) * ((ph2 - ph) / be));
    return h0 - balance(ph) / g + bump;
  };
  s.still = [=](const Eigen::Vector3d&) { return 10000.0 / kRadius; };
  s.coriolis = [=](const Eigen::Vector3d& x) { return 2.0 * om * x.normalized().z(); };
  return s;
}

SweCase make_case(const std::string& name, const SweConstants& c) {
  if (name == "steady_zonal") return steady_zonal(c);
  if (name == "unsteady_zonal") return unsteady_zonal(c);
  if (name == "rossby_haurwitz") return rossby_haurwitz(c);
  if (name == "perturbed_jet") return perturbed_jet(c);
  throw std::invalid_argument("unknown swe case '" + name +
                              "' (expected steady_zonal|unsteady_zonal|rossby_haurwitz|perturbed_jet)");
}

struct SweData {
  std::shared_ptr<const DgSpace> space;
  std::shared_ptr<const FrameField> e, d;
  Vec3Field ne, nd;                 // conormals from e3 and d3
  Eigen::MatrixXd coriolis;         // nodal f
  Eigen::MatrixXd source[2];        // g grad(H0) . e_i at nodes
  Eigen::MatrixXd div_e_quad[2];
  double g = 0.0;
  bool with_G = false;
  double g_sign = -1.0;
  FluxKind flux = FluxKind::lax_friedrichs;
};

// Cartesian vector from frame components given per point.
Vec3Field vec(const Triad& f, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return compose(f, a, b);
}

// Velocity re-expanded in the divergence frames: (U.d1) d1 + (U.d2) d2.
Vec3Field through_d(const Triad& d, const Vec3Field& u) {
  return compose(d, dot(u, d[0]), dot(u, d[1]));
}

State swe_rhs(const SweData& s, const State& y) {
  const DgSpace& sp = *s.space;
  const FrameField& e = *s.e;
  const FrameField& d = *s.d;
  const Eigen::MatrixXd& h = y[0];
  const double g = s.g;

  // Volume fluxes at quadrature points.
  const Eigen::MatrixXd hq = sp.to_quad(h);
  const Eigen::MatrixXd m1q = sp.to_quad(y[1]), m2q = sp.to_quad(y[2]);
  const Eigen::MatrixXd inv_h = hq.cwiseInverse();
  const Vec3Field uq = vec(e.quad, m1q.cwiseProduct(inv_h), m2q.cwiseProduct(inv_h));
  const Vec3Field udq = through_d(d.quad, uq);
  const Eigen::MatrixXd pq = 0.5 * g * hq.cwiseProduct(hq);
  const auto& qg = sp.quad();
  const auto weak_grad = [&](const Vec3Field& f) {
    return sp.test_quad_grad(dot(qg.dual1, f), dot(qg.dual2, f));
  };
  Eigen::MatrixXd rh = -weak_grad(scale(hq, udq));
  Eigen::MatrixXd r1 = -weak_grad(add(scale(m1q, udq), scale(pq, e.quad[0]))) -
                       sp.test_quad(pq.cwiseProduct(s.div_e_quad[0]));
  Eigen::MatrixXd r2 = -weak_grad(add(scale(m2q, udq), scale(pq, e.quad[1]))) -
                       sp.test_quad(pq.cwiseProduct(s.div_e_quad[1]));

  // Lax-Friedrichs fluxes with the neighbour state seen in the element's own frames.
  const Eigen::MatrixXd ht = sp.to_edges(h);
  const Eigen::MatrixXd m1t = sp.to_edges(y[1]), m2t = sp.to_edges(y[2]);
  const Vec3Field mt = vec(e.edge, m1t, m2t);
  const Vec3Field udt = through_d(d.edge, scale(ht.cwiseInverse(), mt));
  const int nrow = sp.num_edge_points();
  Eigen::MatrixXd fh(nrow, sp.num_elements()), f1(nrow, sp.num_elements()),
      f2(nrow, sp.num_elements());
  const double lf = s.flux == FluxKind::central ? 0.0 : 1.0;
  for (int k = 0; k < sp.num_elements(); ++k) {
    for (int row = 0; row < nrow; ++row) {
      const int nk = sp.neighbour_element(k, row);
      const int nr = sp.neighbour_row(k, row);
      const double hl = ht(row, k), hr = ht(nr, nk);
      const Eigen::Vector3d nd = at(s.nd, row, k), ne = at(s.ne, row, k);
      const double sl = at(udt, row, k).dot(nd), sr = at(udt, nr, nk).dot(nd);
      const double lam =
          lf * std::max(std::abs(sl) + std::sqrt(g * std::max(hl, 0.0)),
                        std::abs(sr) + std::sqrt(g * std::max(hr, 0.0)));
      const Eigen::Vector3d ml = at(mt, row, k), mr = at(mt, nr, nk);
      const double pbar = 0.25 * g * (hl * hl + hr * hr);
      fh(row, k) = 0.5 * (hl * sl + hr * sr) + 0.5 * lam * (hl - hr);
      for (int i = 0; i < 2; ++i) {
        const Eigen::Vector3d ei = at(e.edge[i], row, k);
        const double ql = ml.dot(ei), qr = mr.dot(ei);
        const double fv = 0.5 * (ql * sl + qr * sr) + pbar * ei.dot(ne) + 0.5 * lam * (ql - qr);
        (i == 0 ? f1 : f2)(row, k) = fv;
      }
    }
  }
  rh += sp.test_edges(fh);
  r1 += sp.test_edges(f1);
  r2 += sp.test_edges(f2);

  if (s.with_G) {
    const Eigen::MatrixXd inv_hn = h.cwiseInverse();
    const Vec3Field un = vec(e.node, y[1].cwiseProduct(inv_hn), y[2].cwiseProduct(inv_hn));
    const Vec3Field udn = through_d(d.node, un);
    const Eigen::MatrixXd pn = 0.5 * g * h.cwiseProduct(h);
    const auto gterm = [&](const Eigen::MatrixXd& gn) -> Eigen::MatrixXd { return s.g_sign * sp.test_quad(sp.to_quad(gn)); };
    rh -= gterm(g_total(sp, d.node[2], scale(h, udn)));
    r1 -= gterm(g_total(sp, d.node[2], scale(y[1], udn)) + g_total(sp, e.node[2], scale(pn, e.node[0])));
    r2 -= gterm(g_total(sp, d.node[2], scale(y[2], udn)) + g_total(sp, e.node[2], scale(pn, e.node[1])));
  }

  State out(3);
  out[0] = -sp.apply_inv_mass(rh);
  out[1] = -sp.apply_inv_mass(r1) + s.coriolis.cwiseProduct(y[2]) + h.cwiseProduct(s.source[0]);
  out[2] = -sp.apply_inv_mass(r2) - s.coriolis.cwiseProduct(y[1]) + h.cwiseProduct(s.source[1]);
  return out;
}

}  // namespace

ModelProblem build_swe(const SimConfig& cfg, std::shared_ptr<const DgSpace> sp) {
  const DgSpace& space = *sp;
  const SweConstants con = earth_constants();
  const SweCase cs = make_case(cfg.test_case, con);

  auto data = std::make_shared<SweData>();
  data->space = sp;
  auto e = std::make_shared<FrameField>(make_frames(space, cfg.frames_e, cfg.normal_rule));
  auto d = std::make_shared<FrameField>(make_frames(space, cfg.frames_d, cfg.normal_rule));
  data->e = e;
  data->d = d;
  data->ne = effective_conormals(space, cfg.flux.conormals, &e->edge[2]);
  data->nd = effective_conormals(space, cfg.flux.conormals, &d->edge[2]);
  data->coriolis = sample_nodes(space, cs.coriolis);
  const Eigen::MatrixXd still = sample_nodes(space, cs.still);
  const Vec3Field grad_still = space.surface_gradient(still);
  for (int i = 0; i < 2; ++i) {
    data->source[i] = con.gravity * dot(grad_still, e->node[i]);
    data->div_e_quad[i] = space.to_quad(e->div_e[i]);
  }
  data->g = con.gravity;
  data->with_G = cfg.with_G;
  data->g_sign = residual_g_sign(cfg.g_sign);
  data->flux = cfg.flux.kind;

  const auto state_of = [sp, e](const ScalarFunction& depth, const VectorFunction& vel) {
    const Eigen::MatrixXd h = sample_nodes(*sp, depth);
    const FrameComponents u = frame_components(*sp, *e, vel);
    return State{h, h.cwiseProduct(u.c1), h.cwiseProduct(u.c2)};
  };

  ModelProblem prob;
  prob.initial = state_of(cs.depth, cs.velocity);
  prob.rhs = [data](double, const State& y) { return swe_rhs(*data, y); };
  if (cs.has_exact) {
    prob.exact = [cs, state_of](double t) -> std::optional<State> {
      return state_of(cs.exact_depth(t), cs.exact_velocity(t));
    };
    prob.l2_error = [sp, cs](double t, const State& y) {
      return l2_quad(*sp, sp->to_quad(y[0]) - at_quad(*sp, cs.exact_depth(t)));
    };
  } else {
    prob.exact = [](double) -> std::optional<State> { return std::nullopt; };
    prob.l2_error = [](double, const State&) { return std::nan(""); };
  }
  prob.mass = [sp](const State& y) { return sp->integrate(y[0]); };
  const Eigen::MatrixXd still_q = at_quad(space, cs.still);
  const double g = con.gravity;
  prob.energy = [sp, still_q, g](const State& y) {
    const Eigen::MatrixXd hq = sp->to_quad(y[0]);
    const Eigen::MatrixXd m1 = sp->to_quad(y[1]), m2 = sp->to_quad(y[2]);
    const Eigen::MatrixXd kin =
        0.5 * (m1.cwiseProduct(m1) + m2.cwiseProduct(m2)).cwiseQuotient(hq);
    // Potential part measured from the still-water level, so bottom topography is included.
    const Eigen::MatrixXd eta = hq - still_q;
    const Eigen::MatrixXd pot = 0.5 * g * eta.cwiseProduct(eta);
    return sp->integrate_quad(kin + pot);
  };
  prob.check = [](long step, double t, const State& y) {
    if (!(y[0].minCoeff() > 0.0)) throw NumericalAbort(step, t, "non-positive depth");
  };
  return prob;
}

}  // namespace detail
}  // namespace framesurf
