#include "problems.hpp"

#include "framesurf/gterm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace framesurf::detail {

namespace {

constexpr double kBellRadius = 1.0 / 3.0;

double cosine_bell(const Eigen::Vector3d& x) {
  const Eigen::Vector3d centre(0.0, -1.0, 0.0);
  const double r = std::acos(std::clamp(x.normalized().dot(centre), -1.0, 1.0));
  if (r >= kBellRadius) return 0.0;
  return 0.5 * (1.0 + std::cos(std::numbers::pi * r / kBellRadius));
}

}  // namespace

ModelProblem build_advection(const SimConfig& cfg, std::shared_ptr<const DgSpace> sp) {
  const DgSpace& space = *sp;
  double speed = 0.0;
  if (cfg.test_case == "cosine_bell") {
    speed = std::numbers::pi;  // one revolution per two time units
  } else if (cfg.test_case != "cosine_bell_still") {
    throw std::invalid_argument("unknown advection case '" + cfg.test_case +
                                "' (expected cosine_bell|cosine_bell_still)");
  }
  const double alpha = std::numbers::pi / 4.0;
  const Eigen::Vector3d axis(-std::sin(alpha), 0.0, std::cos(alpha));

  auto frames = std::make_shared<FrameField>(make_frames(space, cfg.frames_e, cfg.normal_rule));
  const VectorFunction velocity = [axis, speed](const Eigen::Vector3d& x) {
    return Eigen::Vector3d(speed * axis.cross(x));
  };
  const FrameComponents vc = frame_components(space, *frames, velocity);
  const Vec3Field v_node = frames->compose_nodes(vc.c1, vc.c2);
  const Vec3Field v_quad = compose(frames->quad, space.to_quad(vc.c1), space.to_quad(vc.c2));
  const Vec3Field v_edge = compose(frames->edge, space.to_edges(vc.c1), space.to_edges(vc.c2));

  const auto exact_at = [axis, speed](double t) {
    return [axis, speed, t](const Eigen::Vector3d& x) {
      return cosine_bell(rotate(x, axis, -speed * t));
    };
  };

  ModelProblem prob;
  prob.initial = {sample_nodes(space, exact_at(0.0))};
  const FluxRule flux = cfg.flux;
  const bool with_G = cfg.with_G;
  const double g_sign = residual_g_sign(cfg.g_sign);
  prob.rhs = [sp, frames, v_node, v_quad, v_edge, flux, with_G, g_sign](double, const State& y) {
    const DgSpace& s = *sp;
    const Eigen::MatrixXd& u = y[0];
    const Vec3Field fq = scale(s.to_quad(u), v_quad);
    const Eigen::MatrixXd ut = s.to_edges(u);
    const Vec3Field ft = scale(ut, v_edge);
    const Eigen::MatrixXd fl = surface_flux_integral(s, ft, &v_edge, &ut, flux, &frames->edge[2]);
    Eigen::MatrixXd r;
    if (with_G) {
      const Eigen::MatrixXd g = g_total(s, frames->node[2], scale(u, v_node));
      r = divergence_residual(s, fq, fl, &g, g_sign);
    } else {
      r = divergence_residual(s, fq, fl, nullptr, g_sign);
    }
    return State{-s.apply_inv_mass(r)};
  };
  prob.exact = [sp, exact_at](double t) -> std::optional<State> {
    return State{sample_nodes(*sp, exact_at(t))};
  };
  prob.mass = [sp](const State& y) { return sp->integrate(y[0]); };
  prob.energy = [sp](const State& y) {
    const Eigen::MatrixXd uq = sp->to_quad(y[0]);
    return 0.5 * sp->integrate_quad(uq.cwiseProduct(uq));
  };
  prob.l2_error = [sp, exact_at](double t, const State& y) {
    return l2_quad(*sp, sp->to_quad(y[0]) - at_quad(*sp, exact_at(t)));
  };
  return prob;
}

}  // namespace framesurf::detail
