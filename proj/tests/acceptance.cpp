// Acceptance checks on the canonical mesh (icosahedral refine 2, q = 3).
// Prints one PASS/FAIL line per criterion; exits nonzero when any criterion fails.

#include "framesurf/dgops.hpp"
#include "framesurf/fields.hpp"
#include "framesurf/gterm.hpp"
#include "framesurf/mesh.hpp"
#include "framesurf/rk4.hpp"
#include "framesurf/solvers.hpp"
#include "framesurf/static_tests.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

using namespace framesurf;

namespace {

std::shared_ptr<const SurfaceMesh> canonical() {
  static auto m = std::make_shared<const SurfaceMesh>(generate_sphere_mesh(2, 3));
  return m;
}

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void note(const std::string& s) { std::cout << "  " << s << std::endl; }

using Trio = std::map<Variant, RunResult>;

Trio run_three(const SimConfig& base) {
  Trio out;
  for (Variant v : {Variant::local, Variant::locsph_nog, Variant::locsph_withg}) {
    const auto t0 = std::chrono::steady_clock::now();
    out[v] = run_simulation(with_variant(base, v), canonical());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto& s = out[v].series;
    note(to_string(base.model) + " " + base.test_case + " " + to_string(v) + ": t=" +
         fmt(out[v].final_time) + " l2=" + fmt(s.back().l2_error) + " max_mass=" +
         fmt(s.max_mass_err()) + " max_energy=" + fmt(s.max_energy_err()) + " final_mass=" +
         fmt(s.back().mass_err) + " final_energy=" + fmt(s.back().energy_err) +
         (s.aborted() ? " ABORTED" : "") + " (" + fmt(secs) + " s)");
  }
  return out;
}

bool any_aborted(const Trio& r) {
  return std::any_of(r.begin(), r.end(), [](const auto& kv) { return kv.second.series.aborted(); });
}

// ------------------------------------------------------------------ criteria

Verdict criterion1() {
  const auto mesh = canonical();
  const MeshValidation v = validate_mesh(*mesh);
  double lo = 1e300, hi = 0.0;
  std::string rows;
  for (int p : {4, 5, 6}) {
    const MeshStats s = mesh_error_stats(*mesh, p);
    lo = std::min(lo, s.l2);
    hi = std::max(hi, s.l2);
    rows += " p" + std::to_string(p) + "=" + fmt(s.l2);
  }
  const bool pass = hi / lo < 2.0 && lo >= 1e-6 && hi <= 1e-4 && v.max_vertex_residual < 1e-13;
  return {pass, "L2 mesh error" + rows + ", spread " + fmt(hi / lo) + "x, vertex residual " +
                    fmt(v.max_vertex_residual)};
}

Verdict criterion2() {
  const VectorFunction field = divergence_test_field(1);
  const std::vector<int> ps{3, 4, 5, 6, 7};
  const auto loc = g_convergence_sweep(canonical(), field, FrameKind::local, ps);
  const auto sph = g_convergence_sweep(canonical(), field, FrameKind::locsph, ps);
  bool decay = true;
  std::string t2 = "LOCSPH ||k.(v.grad)k||:";
  for (std::size_t i = 0; i < sph.size(); ++i) {
    t2 += " " + fmt(sph[i].term2_l2);
    if (i > 0 && sph[i - 1].term2_l2 >= 1e-12 && sph[i].term2_l2 > 0.1 * sph[i - 1].term2_l2) {
      decay = false;
    }
  }
  double loc_t1 = 0.0, sph_lo = 1e300, sph_hi = 0.0;
  for (const auto& r : loc) loc_t1 = std::max(loc_t1, r.term1_l2);
  for (const auto& r : sph) {
    sph_lo = std::min(sph_lo, r.term1_l2);
    sph_hi = std::max(sph_hi, r.term1_l2);
  }
  const bool flat = sph_hi / sph_lo < 3.0;
  return {decay && loc_t1 < 1e-12 && flat,
          t2 + (decay ? " (>=10x per p)" : " (not >=10x per p)") + "; LOCAL ||k.(k.grad)v|| max " +
              fmt(loc_t1) + "; LOCSPH ||k.(k.grad)v|| spread " + fmt(sph_hi / sph_lo) + "x"};
}

Verdict static_ordering(StaticOp op, const std::vector<int>& high_ps) {
  const auto l2 = [op](int p, FrameKind f, bool g) {
    return run_static_test(canonical(), op, 1, p, f, g).l2_error;
  };
  bool pass = true;
  std::string d;
  for (int p : high_ps) {
    const double loc = l2(p, FrameKind::local, false), sph = l2(p, FrameKind::locsph, true);
    pass = pass && sph <= 0.15 * loc;
    d += "p=" + std::to_string(p) + " LOCAL " + fmt(loc) + " LOCSPHwithG " + fmt(sph) + " ratio " +
         fmt(sph / loc) + "; ";
  }
  const double l3 = l2(3, FrameKind::local, false), s3 = l2(3, FrameKind::locsph, true);
  const double agree = std::abs(s3 - l3) / l3;
  const double l7 = l2(7, FrameKind::local, false), l8 = l2(8, FrameKind::local, false);
  const double stag = std::max(l7, l8) / std::min(l7, l8);
  pass = pass && agree <= 0.05 && stag < 2.0;
  d += "p=3 difference " + fmt(100.0 * agree) + "%; LOCAL p7/p8 " + fmt(stag) + "x";
  return {pass, d};
}

Verdict criterion5(bool long_run) {
  SimConfig c = default_config(Model::advection);
  c.p = 5;
  if (long_run) {
    c.T_final = 10.0;
    c.dt = 1e-4;
    c.diagnostic_stride = 1000;
  } else {
    c.T_final = 2.0;
    c.dt = 1e-3;
    c.diagnostic_stride = 100;
  }
  const Trio r = run_three(c);
  const double loc = r.at(Variant::local).series.max_mass_err();
  const double wg = r.at(Variant::locsph_withg).series.max_mass_err();
  const double limit = long_run ? 0.01 : 0.1;
  return {!any_aborted(r) && wg <= limit * loc,
          std::string(long_run ? "T=10 dt=1e-4" : "fast gate T=2 dt=1e-3") + ": mass drift LOCAL " +
              fmt(loc) + " LOCSPHwithG " + fmt(wg) + " ratio " + fmt(wg / loc) + " (limit " +
              fmt(limit) + ")"};
}

Verdict criterion6() {
  SimConfig c = default_config(Model::maxwell_tm);
  c.p = 5;
  c.T_final = 0.5;
  c.dt = 1e-3;
  c.diagnostic_stride = 50;
  const Trio m = run_three(c);
  const double loc = m.at(Variant::local).series.back().l2_error;
  const double nog = m.at(Variant::locsph_nog).series.back().l2_error;
  const double wg = m.at(Variant::locsph_withg).series.back().l2_error;
  c.test_case = "elf_pulse";
  const Trio e = run_three(c);
  const double e_nog = e.at(Variant::locsph_nog).series.max_energy_err();
  const double e_wg = e.at(Variant::locsph_withg).series.max_energy_err();
  const bool order = wg < nog && nog < loc && wg <= 0.5 * loc;
  const bool elf = e_wg <= e_nog;
  return {!any_aborted(m) && !any_aborted(e) && order && elf,
          "manufactured L2 LOCAL " + fmt(loc) + " noG " + fmt(nog) + " withG " + fmt(wg) +
              " (withG/LOCAL " + fmt(wg / loc) + ", ordering " + (order ? "holds" : "violated") +
              "); ELF energy drift noG " + fmt(e_nog) + " withG " + fmt(e_wg) +
              (elf ? " (holds)" : " (violated)")};
}

Verdict criterion7() {
  SimConfig c = default_config(Model::swe);
  c.p = 5;
  c.T_final = 5.0;
  c.dt = 1e-3;
  c.diagnostic_stride = 100;
  const Trio r = run_three(c);
  const auto drift = [&r](Variant v, bool mass) {
    const auto& s = r.at(v).series;
    return mass ? s.max_mass_err() : s.max_energy_err();
  };
  bool pass = !any_aborted(r);
  std::string d;
  for (bool mass : {true, false}) {
    const double loc = drift(Variant::local, mass), nog = drift(Variant::locsph_nog, mass);
    const double wg = drift(Variant::locsph_withg, mass);
    const bool smallest = wg < loc && wg < nog;
    const bool margin = nog >= 1.01 * wg;
    pass = pass && smallest && margin;
    d += std::string(mass ? "mass" : "energy") + " drift LOCAL " + fmt(loc) + " noG " + fmt(nog) +
         " withG " + fmt(wg) + (smallest ? "" : " (withG not smallest)") +
         (margin ? "" : " (noG margin below 1%)") + "; ";
  }
  return {pass, d};
}

Verdict criterion8() {
  SimConfig c = default_config(Model::swe);
  c.test_case = "unsteady_zonal";
  c.p = 5;
  c.T_final = 0.5;
  c.dt = 1e-3;
  c.diagnostic_stride = 100;
  const Trio r = run_three(c);
  const double loc = r.at(Variant::local).series.back().l2_error;
  const double wg = r.at(Variant::locsph_withg).series.back().l2_error;
  return {!any_aborted(r) && wg <= 0.5 * loc,
          "T=0.5 L2 LOCAL " + fmt(loc) + " LOCSPHwithG " + fmt(wg) + " ratio " + fmt(wg / loc)};
}

// Integral of div over each element minus the boundary flux for v = (A t1 + B t2) / J,
// A and B polynomials of degree p - 1 in the reference coordinates.
double divergence_theorem_residual(const DgSpace& s) {
  const int deg = s.order() - 1;
  const auto A = [deg](double r, double t) { return std::pow(r + 0.3, deg) + t; };
  const auto B = [deg](double r, double t) { return 0.5 * std::pow(t - 0.2, deg) - r * t; };
  const auto divAB = [deg](double r, double t) {
    const double a = deg > 0 ? deg * std::pow(r + 0.3, deg - 1) : 0.0;
    const double b = deg > 0 ? 0.5 * deg * std::pow(t - 0.2, deg - 1) : 0.0;
    return a + b - r;
  };
  const auto& re = s.ref();
  const int ne = re.num_edge_quad();
  double worst = 0.0;
  for (int k = 0; k < s.num_elements(); ++k) {
    double vol = 0.0, edge = 0.0;
    for (int i = 0; i < s.num_quad(); ++i) {
      vol += s.quad_weight_jac()(i, k) * divAB(re.quad_points(i, 0), re.quad_points(i, 1)) /
             s.quad().jac(i, k);
    }
    for (int e = 0; e < 3; ++e) {
      for (int j = 0; j < ne; ++j) {
        const int row = e * ne + j;
        const Eigen::Vector2d rs = ReferenceElement::edge_point(e, re.edge_quad_points(j));
        const Eigen::Vector3d v = (A(rs(0), rs(1)) * at(s.edges().t1, row, k) +
                                   B(rs(0), rs(1)) * at(s.edges().t2, row, k)) /
                                  s.edges().jac(row, k);
        edge += s.edge_weight_line()(row, k) * v.dot(at(s.edges().conormal, row, k));
      }
    }
    worst = std::max(worst, std::abs(vol - edge));
  }
  return worst;
}

double rk4_order() {
  const auto err = [](double dt) {
    const Rhs rhs = [](double t, const State& y) { return State{(-y[0]).array() + std::sin(t)}; };
    const long n = std::lround(2.0 / dt);
    const State y = rk4_march(rhs, State{Eigen::MatrixXd::Constant(1, 1, 1.0)}, 0.0, dt, n,
                              [](long, double, const State&) {});
    return std::abs(y[0](0, 0) - (1.5 * std::exp(-2.0) + 0.5 * (std::sin(2.0) - std::cos(2.0))));
  };
  return std::log2(err(0.025) / err(0.0125));
}

Verdict criterion9() {
  std::string d;
  bool pass = true;
  const auto check = [&](const std::string& name, double value, bool ok) {
    pass = pass && ok;
    d += name + " " + fmt(value) + (ok ? "" : " (FAIL)") + "; ";
  };
  double ortho = 0.0, divthm = 0.0, tele = 0.0, bilin = 0.0;
  for (int p : {3, 5, 8}) {
    const DgSpace s(canonical(), p);
    const FrameField loc = build_local_frames(s);
    const FrameField sph = build_locsph_frames(s, NormalRule::radial_sphere);
    ortho = std::max({ortho, orthonormality_residual(loc), orthonormality_residual(sph)});
    divthm = std::max(divthm, divergence_theorem_residual(s));

    const FrameComponents c = frame_components(s, sph, divergence_test_field(2, 1.0, 1.0));
    const FluxRule fr{FluxKind::upwind, ConormalRule::frame};
    const Eigen::MatrixXd d_sph = weak_divergence(s, sph, {c.c1, c.c2}, fr, false);
    tele = std::max(tele, std::abs(s.integrate(d_sph)));
    const FrameComponents cl = frame_components(s, loc, divergence_test_field(2, 1.0, 1.0));
    const Eigen::MatrixXd d_loc =
        weak_divergence(s, loc, {cl.c1, cl.c2}, {FluxKind::upwind, ConormalRule::shared}, false);
    tele = std::max(tele, std::abs(s.integrate(d_loc)));

    const Vec3Field v = represent_in_frames(s, sph, divergence_test_field(1));
    const Vec3Field w = represent_in_frames(s, sph, curl_test_field(2, 1.0, 1.0));
    const double a = 1.7, b = -0.4;
    const Eigen::MatrixXd ca = Eigen::MatrixXd::Constant(s.num_nodes(), s.num_elements(), a);
    const Eigen::MatrixXd cb = Eigen::MatrixXd::Constant(s.num_nodes(), s.num_elements(), b);
    const Eigen::MatrixXd lhs = g_total(s, sph.node[2], add(scale(ca, v), scale(cb, w)));
    const Eigen::MatrixXd rhs = a * g_total(s, sph.node[2], v) + b * g_total(s, sph.node[2], w);
    bilin = std::max(bilin, (lhs - rhs).cwiseAbs().maxCoeff() / (1.0 + rhs.cwiseAbs().maxCoeff()));
  }
  check("orthonormality", ortho, ortho < 1e-12);
  check("divergence theorem", divthm, divthm < 1e-10);
  check("telescoping", tele, tele < 1e-11);
  const double order = rk4_order();
  check("RK4 order", order, order >= 3.7 && order <= 4.3);
  check("G bilinearity", bilin, bilin < 1e-12);

  SimConfig c = default_config(Model::advection);
  c.p = 4;
  c.T_final = 0.05;
  c.dt = 1e-3;
  const RunResult r1 = run_simulation(c, canonical());
  const RunResult r2 = run_simulation(c, canonical());
  const bool same = (r1.final_state[0].array() == r2.final_state[0].array()).all();
  pass = pass && same;
  d += same ? "reruns bit-identical" : "reruns differ (FAIL)";
  return {pass, d};
}

Verdict criterion10() {
  bool pass = true;
  std::string d;
  for (const auto& [name, days] : {std::pair<std::string, double>{"rossby_haurwitz", 15.0},
                                   std::pair<std::string, double>{"perturbed_jet", 6.0}}) {
    SimConfig c = default_config(Model::swe);
    c.test_case = name;
    c.p = 5;
    c.T_final = days;
    c.dt = 1e-3;
    c.diagnostic_stride = 500;
    const Trio r = run_three(c);
    const auto& nog = r.at(Variant::locsph_nog).series.back();
    const auto& wg = r.at(Variant::locsph_withg).series.back();
    const bool ok = !any_aborted(r) && wg.mass_err <= nog.mass_err && wg.energy_err <= nog.energy_err;
    pass = pass && ok;
    d += name + " (" + fmt(days) + " days) final mass drift noG " + fmt(nog.mass_err) + " withG " +
         fmt(wg.mass_err) + ", energy drift noG " + fmt(nog.energy_err) + " withG " +
         fmt(wg.energy_err) + (ok ? "" : " (violated)") + "; ";
  }
  return {pass, d};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks on the canonical mesh"};
  std::vector<int> only;
  bool long_runs = false;
  app.add_option("--criteria", only, "criterion numbers to run (default: all fast ones)")
      ->delimiter(',');
  app.add_flag("--long", long_runs,
               "run the long criteria (full-length advection, steady zonal, Rossby-Haurwitz and jet)");
  CLI11_PARSE(app, argc, argv);

  std::set<int> wanted(only.begin(), only.end());
  if (wanted.empty()) {
    wanted = long_runs ? std::set<int>{5, 7, 10} : std::set<int>{1, 2, 3, 4, 5, 6, 8, 9};
  }

  int failures = 0;
  for (int n : wanted) {
    Verdict v;
    try {
      switch (n) {
        case 1: v = criterion1(); break;
        case 2: v = criterion2(); break;
        case 3: v = static_ordering(StaticOp::divergence, {8}); break;
        case 4: v = static_ordering(StaticOp::curl, {7, 8}); break;
        case 5: v = criterion5(long_runs); break;
        case 6: v = criterion6(); break;
        case 7: v = criterion7(); break;
        case 8: v = criterion8(); break;
        case 9: v = criterion9(); break;
        case 10: v = criterion10(); break;
        default: std::cerr << "unknown criterion " << n << "\n"; return 2;
      }
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += v.pass ? 0 : 1;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << n << ": " << v.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
