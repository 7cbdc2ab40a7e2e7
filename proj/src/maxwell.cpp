#include "problems.hpp"

#include "framesurf/gterm.hpp"

#include <cmath>
#include <stdexcept>

namespace framesurf::detail {

namespace {

// Solid-body field V = grad(z) x k on the unit sphere, i.e. z-hat x x.
Eigen::Vector3d solid_body(const Eigen::Vector3d& x) {
  return Eigen::Vector3d::UnitZ().cross(x.normalized());
}

struct MaxwellData {
  std::shared_ptr<const DgSpace> space;
  std::shared_ptr<const FrameField> frames;
  Eigen::MatrixXd curl_q[2];  // e3 . curl(e_i) at quadrature points
  Vec3Field conormal;
  FluxRule central;
  double penalty = 0.0;
  bool with_G = false;
  GSign sign = GSign::added;
  bool forced = false;
  double omega = 0.0;
  Eigen::MatrixXd force[2];  // F . e_i at nodes
};

State maxwell_rhs(const MaxwellData& d, double t, const State& y) {
  const DgSpace& s = *d.space;
  const FrameField& f = *d.frames;
  const Eigen::MatrixXd& h1 = y[0];
  const Eigen::MatrixXd& h2 = y[1];
  const Eigen::MatrixXd& e3 = y[2];
  const Eigen::MatrixXd eq = s.to_quad(e3);
  const auto& qg = s.quad();

  // H^i: -div(E3 w_i) - E3 e3 . curl(e_i) with w_i = e3 x e_i, so w_1 = e2 and w_2 = -e1.
  // The edge flux pairs the averaged scalar E3 with this element's own w_i.
  const Vec3Field w1q = f.quad[1];
  const Vec3Field w2q = scale(Eigen::MatrixXd::Constant(eq.rows(), eq.cols(), -1.0), f.quad[0]);
  Eigen::MatrixXd res1 = -s.test_quad_grad(dot(qg.dual1, scale(eq, w1q)), dot(qg.dual2, scale(eq, w1q)));
  Eigen::MatrixXd res2 = -s.test_quad_grad(dot(qg.dual1, scale(eq, w2q)), dot(qg.dual2, scale(eq, w2q)));
  res1 += s.test_quad(eq.cwiseProduct(d.curl_q[0]));
  res2 += s.test_quad(eq.cwiseProduct(d.curl_q[1]));

  const Eigen::MatrixXd et = s.to_edges(e3);
  const Vec3Field ht = compose(f.edge, s.to_edges(h1), s.to_edges(h2));
  const int nrow = s.num_edge_points();
  Eigen::MatrixXd f1(nrow, s.num_elements()), f2(nrow, s.num_elements()),
      p1(nrow, s.num_elements()), p2(nrow, s.num_elements()), p3(nrow, s.num_elements());
  for (int k = 0; k < s.num_elements(); ++k) {
    for (int row = 0; row < nrow; ++row) {
      const int nk = s.neighbour_element(k, row);
      const int nr = s.neighbour_row(k, row);
      const Eigen::Vector3d n = at(d.conormal, row, k);
      const Eigen::Vector3d e1l = at(f.edge[0], row, k), e2l = at(f.edge[1], row, k),
                            e3l = at(f.edge[2], row, k);
      const double ebar = 0.5 * (et(row, k) + et(nr, nk));
      f1(row, k) = ebar * e2l.dot(n);
      f2(row, k) = -ebar * e1l.dot(n);
      const double de = et(row, k) - et(nr, nk);
      Eigen::Vector3d dh = at(ht, row, k) - at(ht, nr, nk);
      dh -= n * n.dot(dh) + e3l * e3l.dot(dh);
      p1(row, k) = -0.5 * d.penalty * dh.dot(e1l);
      p2(row, k) = -0.5 * d.penalty * dh.dot(e2l);
      p3(row, k) = -0.5 * d.penalty * de;
    }
  }
  res1 += s.test_edges(f1);
  res2 += s.test_edges(f2);
  if (d.with_G) {
    const double gs = residual_g_sign(d.sign);
    const Eigen::MatrixXd minus = Eigen::MatrixXd::Constant(e3.rows(), e3.cols(), -1.0);
    const Eigen::MatrixXd g1 = g_total(s, f.node[2], scale(e3, f.node[1]));
    const Eigen::MatrixXd g2 = g_total(s, f.node[2], scale(e3.cwiseProduct(minus), f.node[0]));
    res1 -= gs * s.test_quad(s.to_quad(g1));
    res2 -= gs * s.test_quad(s.to_quad(g2));
  }

  Eigen::MatrixXd r1 = s.apply_inv_mass(-res1 + s.test_edges(p1));
  Eigen::MatrixXd r2 = s.apply_inv_mass(-res2 + s.test_edges(p2));
  Eigen::MatrixXd r3 = weak_curl_normal(s, f, {h1, h2}, d.central, d.with_G) +
                       s.apply_inv_mass(s.test_edges(p3));
  if (d.forced) {
    const double sn = std::sin(d.omega * t);
    r1 += sn * d.force[0];
    r2 += sn * d.force[1];
  }
  return {r1, r2, r3};
}

}  // namespace

ModelProblem build_maxwell(const SimConfig& cfg, std::shared_ptr<const DgSpace> sp) {
  const DgSpace& space = *sp;
  const bool manufactured = cfg.test_case == "manufactured";
  if (!manufactured && cfg.test_case != "elf_pulse") {
    throw std::invalid_argument("unknown maxwell case '" + cfg.test_case +
                                "' (expected manufactured|elf_pulse)");
  }
  auto frames = std::make_shared<FrameField>(make_frames(space, cfg.frames_e, cfg.normal_rule));
  auto d = std::make_shared<MaxwellData>();
  d->space = sp;
  d->frames = frames;
  for (int i = 0; i < 2; ++i) d->curl_q[i] = space.to_quad(dot(frames->node[2], frames->curl_e[i]));
  d->central = FluxRule{FluxKind::central, cfg.flux.conormals};
  d->conormal = effective_conormals(space, cfg.flux.conormals, &frames->edge[2]);
  d->penalty = cfg.flux.kind == FluxKind::central ? 0.0 : 1.0;
  d->with_G = cfg.with_G;
  d->sign = cfg.g_sign;
  d->omega = cfg.omega;

  const double w = cfg.omega;
  // H = V cos(wt), E = (zeta / w) sin(wt) k with zeta = 2z; forcing F = (2/w - w) V.
  const auto h_exact = [](double t, double w_) {
    return [t, w_](const Eigen::Vector3d& x) { return Eigen::Vector3d(solid_body(x) * std::cos(w_ * t)); };
  };
  const auto e_exact = [](double t, double w_) {
    return [t, w_](const Eigen::Vector3d& x) {
      const Eigen::Vector3d k = x.normalized();
      return Eigen::Vector3d(k * (2.0 * k.z() / w_ * std::sin(w_ * t)));
    };
  };

  ModelProblem prob;
  if (manufactured) {
    d->forced = true;
    const VectorFunction force = [w](const Eigen::Vector3d& x) {
      return Eigen::Vector3d((2.0 / w - w) * solid_body(x));
    };
    const FrameComponents fc = frame_components(space, *frames, force);
    d->force[0] = fc.c1;
    d->force[1] = fc.c2;
    const auto exact_state = [sp, frames, h_exact, e_exact, w](double t) {
      const FrameComponents hc = frame_components(*sp, *frames, h_exact(t, w));
      const auto e = e_exact(t, w);
      Eigen::MatrixXd e3 = sp->zeros();
      for (int k = 0; k < sp->num_elements(); ++k) {
        for (int i = 0; i < sp->num_nodes(); ++i) {
          e3(i, k) = e(at(sp->nodes().x, i, k)).dot(at(frames->node[2], i, k));
        }
      }
      return State{hc.c1, hc.c2, e3};
    };
    prob.initial = exact_state(0.0);
    prob.exact = [exact_state](double t) -> std::optional<State> { return exact_state(t); };
    prob.l2_error = [sp, frames, h_exact, e_exact, w](double t, const State& y) {
      const DgSpace& s = *sp;
      const auto h = h_exact(t, w);
      const auto e = e_exact(t, w);
      Eigen::MatrixXd err(s.num_quad(), s.num_elements());
      const Eigen::MatrixXd q1 = s.to_quad(y[0]), q2 = s.to_quad(y[1]), q3 = s.to_quad(y[2]);
      for (int k = 0; k < s.num_elements(); ++k) {
        for (int i = 0; i < s.num_quad(); ++i) {
          const Eigen::Vector3d x = at(s.quad().x, i, k);
          const Eigen::Vector3d hv = h(x), ev = e(x);
          const double d1 = q1(i, k) - hv.dot(at(frames->quad[0], i, k));
          const double d2 = q2(i, k) - hv.dot(at(frames->quad[1], i, k));
          const double d3 = q3(i, k) - ev.dot(at(frames->quad[2], i, k));
          err(i, k) = std::sqrt(d1 * d1 + d2 * d2 + d3 * d3);
        }
      }
      return l2_quad(s, err);
    };
  } else {
    const Eigen::Vector3d centre(std::sqrt(0.5), 0.0, std::sqrt(0.5));
    const double sigma = cfg.pulse_width;
    const Eigen::MatrixXd e3 = sample_nodes(space, [centre, sigma](const Eigen::Vector3d& x) {
      return std::exp(-(x.normalized() - centre).squaredNorm() / (2.0 * sigma * sigma));
    });
    prob.initial = {space.zeros(), space.zeros(), e3};
    prob.exact = [](double) -> std::optional<State> { return std::nullopt; };
    prob.l2_error = [](double, const State&) { return std::nan(""); };
  }
  prob.rhs = [d](double t, const State& y) { return maxwell_rhs(*d, t, y); };
  prob.mass = [sp](const State& y) { return sp->integrate(y[2]); };
  prob.energy = [sp](const State& y) {
    double e = 0.0;
    for (const auto& c : y) {
      const Eigen::MatrixXd q = sp->to_quad(c);
      e += 0.5 * sp->integrate_quad(q.cwiseProduct(q));
    }
    return e;
  };
  return prob;
}

}  // namespace framesurf::detail
