#include "framesurf/frames.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace framesurf {

FrameKind parse_frame_kind(const std::string& s) {
  if (s == "local" || s == "LOCAL") return FrameKind::local;
  if (s == "locsph" || s == "LOCSPH") return FrameKind::locsph;
  throw std::invalid_argument("unknown frame kind '" + s + "' (expected local|locsph)");
}

std::string to_string(FrameKind k) { return k == FrameKind::local ? "LOCAL" : "LOCSPH"; }

namespace {

Triad local_triad(const PointGeometry& g) {
  Triad t;
  t[0] = g.t1;
  normalize_in_place(t[0]);
  const Eigen::MatrixXd proj = dot(g.t2, t[0]);
  t[1] = sub(g.t2, scale(proj, t[0]));
  const Eigen::ArrayXXd n = dot(t[1], t[1]).array().sqrt();
  if ((n < 1e-14).any()) throw std::domain_error("LOCAL frames: collinear tangents");
  for (auto& c : t[1]) c = (c.array() / n).matrix();
  t[2] = cross(t[0], t[1]);
  return t;
}

Vec3Field prescribed_normal(const PointGeometry& g, NormalRule rule, const Surface& surf) {
  Vec3Field k = g.x;
  if (rule == NormalRule::analytic_ellipsoid) {
    const double ia = 1.0 / (surf.a * surf.a), ib = 1.0 / (surf.b * surf.b),
                 ic = 1.0 / (surf.c * surf.c);
    k[0] *= ia;
    k[1] *= ib;
    k[2] *= ic;
  }
  normalize_in_place(k);
  return k;
}

Triad aligned_triad(const PointGeometry& g, NormalRule rule, const Surface& surf) {
  const Triad loc = local_triad(g);
  Triad t;
  t[2] = prescribed_normal(g, rule, surf);
  t[0] = sub(loc[0], scale(dot(loc[0], t[2]), t[2]));
  const Eigen::ArrayXXd n = dot(t[0], t[0]).array().sqrt();
  if ((n < 1e-8).any()) throw std::domain_error("LOCSPH frames: LOCAL e1 parallel to the normal");
  for (auto& c : t[0]) c = (c.array() / n).matrix();
  t[1] = cross(t[2], t[0]);
  return t;
}

}  // namespace

Vec3Field FrameField::compose_nodes(const Eigen::MatrixXd& v1, const Eigen::MatrixXd& v2) const {
  return add(scale(v1, node[0]), scale(v2, node[1]));
}

FrameField build_local_frames(const DgSpace& space) {
  FrameField f;
  f.kind = FrameKind::local;
  f.rule = NormalRule::discrete;
  f.node = local_triad(space.nodes());
  f.quad = local_triad(space.quad());
  f.edge = local_triad(space.edges());
  frame_differentials(f, space);
  return f;
}

FrameField build_locsph_frames(const DgSpace& space, NormalRule rule) {
  if (rule == NormalRule::discrete) {
    throw std::invalid_argument("LOCSPH frames need a prescribed normal rule");
  }
  const Surface& surf = space.mesh().surface;
  if (rule == NormalRule::analytic_ellipsoid && surf.kind != SurfaceKind::ellipsoid) {
    throw std::invalid_argument("analytic_ellipsoid normal rule on a non-ellipsoid mesh");
  }
  FrameField f;
  f.kind = FrameKind::locsph;
  f.rule = rule;
  f.node = aligned_triad(space.nodes(), rule, surf);
  f.quad = aligned_triad(space.quad(), rule, surf);
  f.edge = aligned_triad(space.edges(), rule, surf);
  frame_differentials(f, space);
  return f;
}

FrameField build_frames(const DgSpace& space, FrameKind kind) {
  return kind == FrameKind::local ? build_local_frames(space)
                                  : build_locsph_frames(space, NormalRule::radial_sphere);
}

void frame_differentials(FrameField& frames, const DgSpace& space) {
  const auto& ref = space.ref();
  const auto& g = space.nodes();
  for (int i = 0; i < 3; ++i) {
    Vec3Field der_r, der_s;
    for (int c = 0; c < 3; ++c) {
      der_r[c] = ref.dr * frames.node[i][c];
      der_s[c] = ref.ds * frames.node[i][c];
    }
    frames.div_e[i] = dot(g.dual1, der_r) + dot(g.dual2, der_s);
    frames.curl_e[i] = add(cross(g.dual1, der_r), cross(g.dual2, der_s));
  }
}

Eigen::MatrixXd frame_angle_error(const FrameField& local, const FrameField& aligned) {
  // atan2 form of arccos(e3 . e3'); accurate for nearly parallel vectors.
  const Eigen::MatrixXd d = dot(local.node[2], aligned.node[2]);
  const Vec3Field c = cross(local.node[2], aligned.node[2]);
  Eigen::MatrixXd out(d.rows(), d.cols());
  for (Eigen::Index k = 0; k < d.cols(); ++k) {
    for (Eigen::Index i = 0; i < d.rows(); ++i) out(i, k) = std::atan2(at(c, i, k).norm(), d(i, k));
  }
  return out;
}

double orthonormality_residual(const FrameField& frames) {
  double worst = 0.0;
  for (const Triad* t : {&frames.node, &frames.quad, &frames.edge}) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const Eigen::MatrixXd d = dot((*t)[i], (*t)[j]);
        const double target = (i == j) ? 1.0 : 0.0;
        worst = std::max(worst, (d.array() - target).abs().maxCoeff());
      }
    }
    const Vec3Field e3 = cross((*t)[0], (*t)[1]);
    for (int c = 0; c < 3; ++c) worst = std::max(worst, (e3[c] - (*t)[2][c]).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace framesurf
