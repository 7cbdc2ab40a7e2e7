#include "cli.hpp"

#include "framesurf/mesh.hpp"
#include "framesurf/solvers.hpp"
#include "framesurf/static_tests.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace framesurf::cli {

namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

int parse_int(const std::string& s) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    throw UsageError("bad integer '" + s + "' in list");
  }
  if (used != s.size()) throw UsageError("bad integer '" + s + "' in list");
  return v;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os << std::setprecision(17);
  return os;
}

std::string join(const std::vector<std::string>& args) {
  std::string s;
  for (const auto& a : args) s += (s.empty() ? "" : " ") + a;
  return s;
}

// Caps Eigen's internal threading; the solvers themselves run one element loop per process.
void apply_thread_cap() {
  const char* env = std::getenv("FRAMESURF_THREADS");
  if (env == nullptr || *env == '\0') return;
  int n = 0;
  try {
    n = parse_int(env);
  } catch (const UsageError&) {
    throw UsageError("FRAMESURF_THREADS must be a positive integer");
  }
  if (n < 1) throw UsageError("FRAMESURF_THREADS must be a positive integer");
  Eigen::setNbThreads(n);
}

struct MeshArgs {
  std::string surface = "sphere";
  int refine = 2;
  int q = 3;
  double ratio = 1.003364;
  std::string mesh_file;
};

void add_mesh_flags(CLI::App* app, MeshArgs& m) {
  app->add_option("--surface", m.surface, "sphere or ellipsoid")->check(CLI::IsMember({"sphere", "ellipsoid"}));
  app->add_option("--refine", m.refine, "icosahedral refinement level")->check(CLI::Range(0, 6));
  app->add_option("--q", m.q, "geometric degree")->check(CLI::Range(1, 8));
  app->add_option("--ratio", m.ratio, "ellipsoid axis ratio a/c");
  app->add_option("--mesh-file", m.mesh_file, "read the mesh instead of generating it");
}

std::shared_ptr<const SurfaceMesh> build_mesh(const MeshArgs& m) {
  SimConfig c;
  c.surface = m.surface;
  c.refine = m.refine;
  c.q = m.q;
  c.ratio = m.ratio;
  c.mesh_file = m.mesh_file;
  return make_mesh(c);
}

// ---------------------------------------------------------------- mesh-gen

struct MeshGenArgs {
  MeshArgs mesh;
  std::string p_list = "2,3,4,5,6";
  std::string out = ".";
};

int cmd_mesh_gen(const MeshGenArgs& a, const std::vector<std::string>& argv, std::ostream& out) {
  const std::vector<int> ps = parse_int_list(a.p_list);
  if (ps.empty()) throw UsageError("--p-list is empty");
  const auto mesh = build_mesh(a.mesh);
  const MeshValidation v = validate_mesh(*mesh);
  const fs::path dir(a.out);
  fs::create_directories(dir);
  write_mesh(*mesh, (dir / "mesh.txt").string());
  auto os = open_out(dir / "stats.csv");
  os << "p,node_count,l2,linf\n";
  // The table measures distance from a sphere; an ellipsoid gets the header only.
  const bool sphere = mesh->surface.kind == SurfaceKind::sphere;
  if (!sphere) out << "error table skipped: not a sphere\n";
  for (int p : sphere ? ps : std::vector<int>{}) {
    const MeshStats s = mesh_error_stats(*mesh, p);
    os << s.p << "," << s.node_count << "," << s.l2 << "," << s.linf << "\n";
  }
  auto echo = open_out(dir / "config.echo");
  echo << "mesh-gen " << join(argv) << "\n";
  out << "mesh: " << mesh->num_elements() << " elements, q=" << mesh->q
      << ", max vertex residual " << v.max_vertex_residual << (v.ok() ? "" : " (INVALID)") << "\n";
  return v.ok() ? kOk : kAbort;
}

// ---------------------------------------------------------------- static

struct StaticArgs {
  MeshArgs mesh;
  std::string op = "div";
  int test = 1;
  std::string frames = "local";
  bool with_G = false;
  std::string p_list;
  std::string conormals = "frame";
  std::string g_sign = "added";
  double pole_cap = 0.3;
  std::string out = ".";
};

std::vector<FrameKind> parse_frames_list(const std::string& s) {
  std::vector<FrameKind> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok == "both") {
      out.push_back(FrameKind::local);
      out.push_back(FrameKind::locsph);
    } else {
      out.push_back(parse_frame_kind(tok));
    }
  }
  if (out.empty()) throw UsageError("--frames is empty");
  return out;
}

int cmd_static(const StaticArgs& a, const std::vector<std::string>& argv, std::ostream& out) {
  const std::vector<int> ps = parse_int_list(a.p_list);
  if (ps.empty()) throw UsageError("--p-list is empty");
  const StaticOp op = parse_static_op(a.op);
  const std::vector<FrameKind> frames = parse_frames_list(a.frames);
  StaticOptions opt;
  opt.flux.conormals = parse_conormal_rule(a.conormals);
  opt.divergence_sign = parse_g_sign(a.g_sign);
  opt.pole_cap = a.pole_cap;
  const auto mesh = build_mesh(a.mesh);
  const fs::path dir(a.out);
  fs::create_directories(dir);
  auto os = open_out(dir / "stats.csv");
  os << "op,test,frames,with_G,p,l2_error,linf_error,g_term1_l2,g_term2_l2\n";
  for (FrameKind f : frames) {
    for (int p : ps) {
      const StaticResult r = run_static_test(mesh, op, a.test, p, f, a.with_G, opt);
      os << a.op << "," << a.test << "," << to_string(f) << "," << (a.with_G ? 1 : 0) << "," << p
         << "," << r.l2_error << "," << r.linf_error << "," << r.g.term1_l2 << ","
         << r.g.term2_l2 << "\n";
      out << to_string(f) << (a.with_G ? " withG" : "") << " p=" << p << " L2=" << r.l2_error
          << "\n";
    }
  }
  auto echo = open_out(dir / "config.echo");
  echo << "static " << join(argv) << "\n";
  return kOk;
}

// ---------------------------------------------------------------- run

struct RunArgs {
  MeshArgs mesh;
  std::string config_file;
  std::vector<std::string> sets;
  std::optional<std::string> model, test_case, frames_e, frames_d, flux, conormals, g_sign, p;
  std::optional<double> dt, T;
  std::optional<long> stride;
  bool with_G = false;
  bool compare = false;
  std::string out = ".";
};

SimConfig resolve_config(const RunArgs& a, CLI::App* run) {
  // The model picks the defaults, so it is settled before the file is applied.
  std::string file_text;
  if (!a.config_file.empty()) {
    std::ifstream is(a.config_file);
    if (!is) throw UsageError("cannot read config file " + a.config_file);
    std::stringstream ss;
    ss << is.rdbuf();
    file_text = ss.str();
  }
  SimConfig probe;
  if (!file_text.empty()) {
    std::istringstream is(file_text);
    read_config(is, probe);
  }
  const Model m = a.model ? parse_model(*a.model) : probe.model;
  SimConfig c = default_config(m);
  if (!file_text.empty()) {
    std::istringstream is(file_text);
    read_config(is, c);
  }
  c.model = m;
  for (const auto& kv : a.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
    apply_setting(c, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (a.test_case) c.test_case = *a.test_case;
  if (a.frames_e) c.frames_e = parse_frame_kind(*a.frames_e);
  if (a.frames_d) c.frames_d = parse_frame_kind(*a.frames_d);
  if (a.flux) c.flux.kind = parse_flux_kind(*a.flux);
  if (a.conormals) c.flux.conormals = parse_conormal_rule(*a.conormals);
  if (a.g_sign) c.g_sign = parse_g_sign(*a.g_sign);
  if (a.dt) c.dt = *a.dt;
  if (a.T) c.T_final = *a.T;
  if (a.stride) c.diagnostic_stride = *a.stride;
  if (a.with_G) c.with_G = true;
  if (run->count("--surface")) c.surface = a.mesh.surface;
  if (run->count("--refine")) c.refine = a.mesh.refine;
  if (run->count("--q")) c.q = a.mesh.q;
  if (run->count("--ratio")) c.ratio = a.mesh.ratio;
  if (run->count("--mesh-file")) c.mesh_file = a.mesh.mesh_file;
  return c;
}

Variant variant_of(const SimConfig& c) {
  const FrameKind k = c.model == Model::swe ? c.frames_d : c.frames_e;
  if (k == FrameKind::local) return Variant::local;
  return c.with_G ? Variant::locsph_withg : Variant::locsph_nog;
}

// Differences LOCAL - LOCSPHwithG and LOCSPHnoG - LOCSPHwithG on the shared time grid.
void write_delta(std::ostream& os, const DiagnosticSeries& loc, const DiagnosticSeries& nog,
                 const DiagnosticSeries& wg) {
  os << "t,d_l2_local,d_l2_nog,d_mass_local,d_mass_nog,d_energy_local,d_energy_nog\n";
  const std::size_t n = std::min({loc.rows().size(), nog.rows().size(), wg.rows().size()});
  for (std::size_t i = 0; i < n; ++i) {
    const auto &a = loc.rows()[i], &b = nog.rows()[i], &c = wg.rows()[i];
    os << c.t << "," << a.l2_error - c.l2_error << "," << b.l2_error - c.l2_error << ","
       << a.mass_err - c.mass_err << "," << b.mass_err - c.mass_err << ","
       << a.energy_err - c.energy_err << "," << b.energy_err - c.energy_err << "\n";
  }
}

int cmd_run(const RunArgs& a, CLI::App* app, std::ostream& out) {
  SimConfig base = resolve_config(a, app);
  std::vector<int> ps{base.p};
  if (a.p) ps = parse_int_list(*a.p);
  if (ps.empty()) throw UsageError("--p is empty");
  const std::vector<Variant> variants =
      a.compare ? std::vector<Variant>{Variant::local, Variant::locsph_nog, Variant::locsph_withg}
                : std::vector<Variant>{variant_of(base)};
  // Reject bad configurations before any output is produced.
  for (int p : ps) {
    SimConfig c = base;
    c.p = p;
    for (Variant v : variants) validate(a.compare ? with_variant(c, v) : c);
  }
  const auto mesh = make_mesh(base);
  {
    auto probe_space = std::make_shared<const DgSpace>(mesh, 1);
    build_problem(base, probe_space);  // unknown case names fail here
  }
  const fs::path dir(a.out);
  fs::create_directories(dir);
  {
    SimConfig echo = base;
    echo.p = ps.front();
    auto os = open_out(dir / "config.echo");
    os << echo_config(echo);
    if (ps.size() > 1) os << "# p list: " << *a.p << "\n";
    if (a.compare) os << "# compare: LOCAL LOCSPHnoG LOCSPHwithG\n";
  }
  auto stats = open_out(dir / "stats.csv");
  stats << "p,variant,final_t,l2_error,max_mass_err,max_energy_err,aborted\n";
  bool aborted = false;
  for (int p : ps) {
    SimConfig cp = base;
    cp.p = p;
    std::vector<DiagnosticSeries> series;
    for (Variant v : variants) {
      const SimConfig cv = a.compare ? with_variant(cp, v) : cp;
      const RunResult r = run_simulation(cv, mesh);
      const std::string suffix = ps.size() > 1 ? "_p" + std::to_string(p) : "";
      auto os = open_out(dir / ("series_" + to_string(v) + suffix + ".csv"));
      r.series.write_csv(os);
      const auto& last = r.series.back();
      stats << p << "," << to_string(v) << "," << r.final_time << "," << last.l2_error << ","
            << r.series.max_mass_err() << "," << r.series.max_energy_err() << ","
            << (r.series.aborted() ? 1 : 0) << "\n";
      out << to_string(cv.model) << " " << cv.test_case << " p=" << p << " " << to_string(v)
          << ": t=" << r.final_time << " L2=" << last.l2_error
          << " mass_err=" << r.series.max_mass_err() << " energy_err=" << r.series.max_energy_err()
          << (r.series.aborted() ? " ABORTED (" + r.series.abort_reason() + ")" : "") << "\n";
      aborted = aborted || r.series.aborted();
      series.push_back(r.series);
    }
    if (a.compare) {
      const std::string suffix = ps.size() > 1 ? "_p" + std::to_string(p) : "";
      auto os = open_out(dir / ("delta" + suffix + ".csv"));
      write_delta(os, series[0], series[1], series[2]);
    }
  }
  return aborted ? kAbort : kOk;
}

}  // namespace

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    const auto dots = tok.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_int(tok));
      continue;
    }
    const int lo = parse_int(tok.substr(0, dots)), hi = parse_int(tok.substr(dots + 2));
    if (hi < lo) throw UsageError("empty range '" + tok + "'");
    for (int p = lo; p <= hi; ++p) out.push_back(p);
  }
  return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"High-order DG on curved surfaces with moving frames"};
  app.require_subcommand(1);

  MeshGenArgs mg;
  auto* c_mesh = app.add_subcommand("mesh-gen", "write a mesh file and its geometric error table");
  add_mesh_flags(c_mesh, mg.mesh);
  c_mesh->add_option("--p-list", mg.p_list, "polynomial orders for the error table");
  c_mesh->add_option("--out", mg.out, "output directory");

  StaticArgs st;
  auto* c_static = app.add_subcommand("static", "static divergence and curl tests");
  add_mesh_flags(c_static, st.mesh);
  c_static->add_option("--op", st.op, "div or curl")->check(CLI::IsMember({"div", "curl"}));
  c_static->add_option("--test", st.test, "test field 1 or 2")->check(CLI::IsMember({1, 2}));
  c_static->add_option("--frames", st.frames, "local, locsph, both, or a comma list");
  c_static->add_flag("--with-g", st.with_G, "include the G term");
  c_static->add_option("--p-list", st.p_list, "polynomial orders")->required();
  c_static->add_option("--conormals", st.conormals, "per_side, shared or frame");
  c_static->add_option("--g-sign", st.g_sign, "added or subtracted");
  c_static->add_option("--pole-cap", st.pole_cap, "chord radius excluded around the poles");
  c_static->add_option("--out", st.out, "output directory");

  RunArgs ra;
  auto* c_run = app.add_subcommand("run", "time-dependent model runs");
  add_mesh_flags(c_run, ra.mesh);
  c_run->add_option("--config", ra.config_file, "key = value file; flags override it");
  c_run->add_option("--set", ra.sets, "extra key=value override (repeatable)");
  c_run->add_option("--model", ra.model, "advection, maxwell_tm (maxwell) or swe");
  c_run->add_option("--case", ra.test_case, "named test case");
  c_run->add_option("--frames-e", ra.frames_e, "local or locsph");
  c_run->add_option("--frames-d", ra.frames_d, "local or locsph (swe)");
  c_run->add_flag("--with-g", ra.with_G, "include the G terms");
  c_run->add_option("--p", ra.p, "order or list such as 1..5");
  c_run->add_option("--dt", ra.dt, "time step");
  c_run->add_option("--T", ra.T, "final time");
  c_run->add_option("--stride", ra.stride, "steps between diagnostics");
  c_run->add_option("--flux", ra.flux, "upwind, lax_friedrichs or central");
  c_run->add_option("--conormals", ra.conormals, "per_side, shared or frame");
  c_run->add_option("--g-sign", ra.g_sign, "added or subtracted");
  c_run->add_flag("--compare", ra.compare, "run LOCAL, LOCSPHnoG and LOCSPHwithG");
  c_run->add_option("--out", ra.out, "output directory");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    apply_thread_cap();
    const std::vector<std::string> tail(args.begin() + 1, args.end());
    if (*c_mesh) return cmd_mesh_gen(mg, tail, out);
    if (*c_static) return cmd_static(st, tail, out);
    return cmd_run(ra, c_run, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const MeshParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kAbort;
  }
}

}  // namespace framesurf::cli
