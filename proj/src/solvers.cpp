#include "problems.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace framesurf {

Model parse_model(const std::string& s) {
  if (s == "advection") return Model::advection;
  if (s == "maxwell_tm" || s == "maxwell") return Model::maxwell_tm;
  if (s == "swe") return Model::swe;
  throw std::invalid_argument("unknown model '" + s + "' (expected advection|maxwell_tm|swe)");
}

std::string to_string(Model m) {
  switch (m) {
    case Model::advection: return "advection";
    case Model::maxwell_tm: return "maxwell_tm";
    case Model::swe: return "swe";
  }
  return "?";
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::local: return "LOCAL";
    case Variant::locsph_nog: return "LOCSPHnoG";
    case Variant::locsph_withg: return "LOCSPHwithG";
  }
  return "?";
}

namespace {

NormalRule parse_normal_rule(const std::string& s) {
  if (s == "radial_sphere" || s == "radial") return NormalRule::radial_sphere;
  if (s == "analytic_ellipsoid") return NormalRule::analytic_ellipsoid;
  if (s == "discrete") return NormalRule::discrete;
  throw std::invalid_argument("unknown normal rule '" + s +
                              "' (expected radial_sphere|analytic_ellipsoid|discrete)");
}

std::string normal_rule_name(NormalRule r) {
  switch (r) {
    case NormalRule::radial_sphere: return "radial_sphere";
    case NormalRule::analytic_ellipsoid: return "analytic_ellipsoid";
    case NormalRule::discrete: return "discrete";
  }
  return "?";
}

std::string flux_name(FluxKind k) {
  switch (k) {
    case FluxKind::upwind: return "upwind";
    case FluxKind::lax_friedrichs: return "lax_friedrichs";
    case FluxKind::central: return "central";
  }
  return "?";
}

std::string conormal_name(ConormalRule r) {
  switch (r) {
    case ConormalRule::per_side: return "per_side";
    case ConormalRule::shared: return "shared";
    case ConormalRule::frame: return "frame";
  }
  return "?";
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument("expected a boolean, got '" + v + "'");
}

double parse_double(const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("expected a number, got '" + v + "'");
  }
  if (used != v.size()) throw std::invalid_argument("expected a number, got '" + v + "'");
  return out;
}

long parse_long(const std::string& v) {
  std::size_t used = 0;
  long out = 0;
  try {
    out = std::stol(v, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("expected an integer, got '" + v + "'");
  }
  if (used != v.size()) throw std::invalid_argument("expected an integer, got '" + v + "'");
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

SimConfig default_config(Model m) {
  SimConfig c;
  c.model = m;
  switch (m) {
    case Model::advection:
      c.test_case = "cosine_bell";
      c.flux = {FluxKind::upwind, ConormalRule::frame};
      c.dt = 1e-3;
      c.T_final = 2.0;
      break;
    case Model::maxwell_tm:
      c.test_case = "manufactured";
      c.flux = {FluxKind::upwind, ConormalRule::frame};
      c.dt = 1e-3;
      c.T_final = 2.0;
      break;
    case Model::swe:
      c.test_case = "steady_zonal";
      c.flux = {FluxKind::lax_friedrichs, ConormalRule::frame};
      c.dt = 2e-4;
      c.T_final = 1.0;
      break;
  }
  return c;
}

void apply_setting(SimConfig& c, const std::string& key, const std::string& value) {
  const std::string k = trim(key), v = trim(value);
  if (k == "model") c.model = parse_model(v);
  else if (k == "test_case") c.test_case = v;
  else if (k == "frames_e") c.frames_e = parse_frame_kind(v);
  else if (k == "frames_d") c.frames_d = parse_frame_kind(v);
  else if (k == "normal_rule") c.normal_rule = parse_normal_rule(v);
  else if (k == "with_G") c.with_G = parse_bool(v);
  else if (k == "g_sign") c.g_sign = parse_g_sign(v);
  else if (k == "flux") c.flux.kind = parse_flux_kind(v);
  else if (k == "conormals") c.flux.conormals = parse_conormal_rule(v);
  else if (k == "p") c.p = static_cast<int>(parse_long(v));
  else if (k == "dt") c.dt = parse_double(v);
  else if (k == "T_final") c.T_final = parse_double(v);
  else if (k == "diagnostic_stride") c.diagnostic_stride = parse_long(v);
  else if (k == "surface") c.surface = v;
  else if (k == "ratio") c.ratio = parse_double(v);
  else if (k == "refine") c.refine = static_cast<int>(parse_long(v));
  else if (k == "q") c.q = static_cast<int>(parse_long(v));
  else if (k == "mesh_file") c.mesh_file = v;
  else if (k == "omega") c.omega = parse_double(v);
  else if (k == "pulse_width") c.pulse_width = parse_double(v);
  else throw std::invalid_argument("unknown config key '" + k + "'");
}

void read_config(std::istream& is, SimConfig& cfg) {
  std::string line;
  int n = 0;
  while (std::getline(is, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(n) + ": expected key = value");
    }
    try {
      apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(n) + ": " + e.what());
    }
  }
}

std::string echo_config(const SimConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "model=" << to_string(c.model) << "\n"
     << "test_case=" << c.test_case << "\n"
     << "frames_e=" << (c.frames_e == FrameKind::local ? "local" : "locsph") << "\n"
     << "frames_d=" << (c.frames_d == FrameKind::local ? "local" : "locsph") << "\n"
     << "normal_rule=" << normal_rule_name(c.normal_rule) << "\n"
     << "with_G=" << (c.with_G ? "true" : "false") << "\n"
     << "g_sign=" << (c.g_sign == GSign::added ? "added" : "subtracted") << "\n"
     << "flux=" << flux_name(c.flux.kind) << "\n"
     << "conormals=" << conormal_name(c.flux.conormals) << "\n"
     << "p=" << c.p << "\n"
     << "dt=" << c.dt << "\n"
     << "T_final=" << c.T_final << "\n"
     << "diagnostic_stride=" << c.diagnostic_stride << "\n"
     << "surface=" << c.surface << "\n"
     << "ratio=" << c.ratio << "\n"
     << "refine=" << c.refine << "\n"
     << "q=" << c.q << "\n";
  if (!c.mesh_file.empty()) os << "mesh_file=" << c.mesh_file << "\n";
  os << "omega=" << c.omega << "\n"
     << "pulse_width=" << c.pulse_width << "\n";
  return os.str();
}

void validate(const SimConfig& c) {
  if (c.p < 1 || c.p > 10) throw std::invalid_argument("p must lie in 1..10");
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw std::invalid_argument("dt must be positive");
  if (!(c.T_final >= 0.0) || !std::isfinite(c.T_final)) {
    throw std::invalid_argument("T_final must be non-negative");
  }
  if (c.diagnostic_stride < 1) throw std::invalid_argument("diagnostic_stride must be >= 1");
  if (c.mesh_file.empty()) {
    if (c.surface != "sphere" && c.surface != "ellipsoid") {
      throw std::invalid_argument("surface must be sphere or ellipsoid");
    }
    if (c.refine < 0 || c.refine > 6) throw std::invalid_argument("refine must lie in 0..6");
    if (c.q < 1 || c.q > 8) throw std::invalid_argument("q must lie in 1..8");
    if (c.surface == "ellipsoid" && !(c.ratio > 0.0)) {
      throw std::invalid_argument("ellipsoid ratio must be positive");
    }
  }
  const bool uses_locsph = c.frames_e == FrameKind::locsph ||
                           (c.model == Model::swe && c.frames_d == FrameKind::locsph);
  if (uses_locsph && c.normal_rule == NormalRule::discrete) {
    throw std::invalid_argument("LOCSPH frames need normal_rule radial_sphere or analytic_ellipsoid");
  }
  if (c.normal_rule == NormalRule::analytic_ellipsoid && c.mesh_file.empty() &&
      c.surface != "ellipsoid") {
    throw std::invalid_argument("analytic_ellipsoid normals need an ellipsoid surface");
  }
  if (c.model == Model::advection && c.flux.kind == FluxKind::lax_friedrichs) {
    throw std::invalid_argument("advection supports upwind or central fluxes");
  }
  if (c.model == Model::swe && c.flux.kind == FluxKind::upwind) {
    throw std::invalid_argument("swe supports lax_friedrichs or central fluxes");
  }
  if (c.model == Model::maxwell_tm && !(c.pulse_width > 0.0)) {
    throw std::invalid_argument("pulse_width must be positive");
  }
}

SimConfig with_variant(SimConfig cfg, Variant v) {
  const FrameKind kind = v == Variant::local ? FrameKind::local : FrameKind::locsph;
  if (cfg.model == Model::swe) {
    cfg.frames_d = kind;
  } else {
    cfg.frames_e = kind;
  }
  cfg.with_G = v == Variant::locsph_withg;
  return cfg;
}

std::shared_ptr<const SurfaceMesh> make_mesh(const SimConfig& cfg) {
  if (!cfg.mesh_file.empty()) return std::make_shared<const SurfaceMesh>(read_mesh(cfg.mesh_file));
  if (cfg.surface == "ellipsoid") {
    return std::make_shared<const SurfaceMesh>(generate_ellipsoid_mesh(cfg.refine, cfg.q, cfg.ratio));
  }
  return std::make_shared<const SurfaceMesh>(generate_sphere_mesh(cfg.refine, cfg.q));
}

namespace detail {

FrameField make_frames(const DgSpace& space, FrameKind kind, NormalRule rule) {
  if (kind == FrameKind::local) return build_local_frames(space);
  return build_locsph_frames(space, rule);
}

Eigen::Vector3d rotate(const Eigen::Vector3d& x, const Eigen::Vector3d& a, double t) {
  return Eigen::AngleAxisd(t, a.normalized()) * x;
}

Eigen::MatrixXd at_quad(const DgSpace& space, const ScalarFunction& f) {
  return sample_quad(space, f);
}

double l2_quad(const DgSpace& space, const Eigen::MatrixXd& quad_data) {
  return std::sqrt(std::max(space.integrate_quad(quad_data.cwiseProduct(quad_data)), 0.0));
}

}  // namespace detail

ModelProblem build_problem(const SimConfig& cfg, std::shared_ptr<const DgSpace> space) {
  switch (cfg.model) {
    case Model::advection: return detail::build_advection(cfg, std::move(space));
    case Model::maxwell_tm: return detail::build_maxwell(cfg, std::move(space));
    case Model::swe: return detail::build_swe(cfg, std::move(space));
  }
  throw std::invalid_argument("unknown model");
}

RunResult run_simulation(const SimConfig& cfg, std::shared_ptr<const SurfaceMesh> mesh) {
  validate(cfg);
  auto space = std::make_shared<const DgSpace>(std::move(mesh), cfg.p);
  const ModelProblem prob = build_problem(cfg, space);
  RunResult res;
  res.config = cfg;
  const long nsteps = cfg.T_final > 0.0
                          ? std::max<long>(1, static_cast<long>(std::ceil(cfg.T_final / cfg.dt - 1e-9)))
                          : 0;
  const double dt = nsteps > 0 ? cfg.T_final / nsteps : cfg.dt;
  const auto record = [&](double t, const State& y) {
    res.series.record(t, prob.l2_error(t, y), prob.mass(y), prob.energy(y));
  };
  State y = prob.initial;
  double t_last = 0.0;
  record(0.0, y);
  try {
    if (prob.check) prob.check(0, 0.0, y);
    y = rk4_march(prob.rhs, y, 0.0, dt, nsteps, [&](long n, double t, const State& s) {
      if (prob.check) prob.check(n, t, s);
      y = s;
      t_last = t;
      if (n % cfg.diagnostic_stride == 0 || n == nsteps) record(t, s);
    });
  } catch (const NumericalAbort& e) {
    res.series.mark_abort(e.step(), e.time(), e.what());
  }
  res.final_state = y;
  res.final_time = t_last;
  return res;
}

namespace {

RunResult run_model(Model m, const SimConfig& cfg, std::shared_ptr<const SurfaceMesh> mesh) {
  if (cfg.model != m) throw std::invalid_argument("configuration is for model " + to_string(cfg.model));
  return run_simulation(cfg, std::move(mesh));
}

}  // namespace

RunResult run_advection(const SimConfig& cfg, std::shared_ptr<const SurfaceMesh> mesh) {
  return run_model(Model::advection, cfg, std::move(mesh));
}
RunResult run_maxwell_tm(const SimConfig& cfg, std::shared_ptr<const SurfaceMesh> mesh) {
  return run_model(Model::maxwell_tm, cfg, std::move(mesh));
}
RunResult run_swe(const SimConfig& cfg, std::shared_ptr<const SurfaceMesh> mesh) {
  return run_model(Model::swe, cfg, std::move(mesh));
}

ZeroTendency zero_tendency_residual(const DgSpace& space, const FrameField& frames,
                                    const Eigen::MatrixXd& u1, const Eigen::MatrixXd& u2) {
  const Vec3Field u = frames.compose_nodes(u1, u2);
  ZeroTendency z;
  for (int i = 0; i < 2; ++i) {
    Vec3Field conv;
    for (int c = 0; c < 3; ++c) conv[c] = dot(u, space.surface_gradient(frames.node[i][c]));
    (i == 0 ? z.e1 : z.e2) = rms_norm(space, dot(u, conv));
  }
  return z;
}

}  // namespace framesurf
