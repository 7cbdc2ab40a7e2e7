#pragma once

#include "framesurf/diagnostics.hpp"
#include "framesurf/dgops.hpp"
#include "framesurf/frames.hpp"
#include "framesurf/rk4.hpp"

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

namespace framesurf {

enum class Model { advection, maxwell_tm, swe };

Model parse_model(const std::string& s);
std::string to_string(Model m);

struct SimConfig {
  Model model = Model::advection;
  std::string test_case = "cosine_bell";
  FrameKind frames_e = FrameKind::local;
  FrameKind frames_d = FrameKind::local;  // divergence frames, SWE only
  NormalRule normal_rule = NormalRule::radial_sphere;
  bool with_G = false;
  GSign g_sign = GSign::added;
  FluxRule flux{FluxKind::upwind, ConormalRule::frame};
  int p = 5;
  double dt = 1e-4;
  double T_final = 2.0;
  long diagnostic_stride = 100;

  std::string surface = "sphere";
  double ratio = 1.003364;  // ellipsoid a/c = b/c
  int refine = 2;
  int q = 3;
  std::string mesh_file;  // overrides the generated mesh when set

  double omega = 1.4142135623730951;  // Maxwell manufactured frequency
  double pulse_width = 0.15;          // Maxwell pulse standard deviation (chord length)
};

// Defaults for a model, including its canonical test case, flux and time step.
SimConfig default_config(Model m);

// key=value assignment; throws std::invalid_argument on unknown keys or bad values.
void apply_setting(SimConfig& cfg, const std::string& key, const std::string& value);
// Reads `key = value` lines, ignoring blanks and '#' comments.
void read_config(std::istream& is, SimConfig& cfg);
// Every setting as key=value lines, readable by read_config.
std::string echo_config(const SimConfig& cfg);
// Throws std::invalid_argument when the configuration is inconsistent.
void validate(const SimConfig& cfg);

// The three schemes compared throughout: LOCAL, LOCSPH without G and LOCSPH with G.
enum class Variant { local, locsph_nog, locsph_withg };
std::string to_string(Variant v);
// Copy of cfg switched to the variant (frames_d for SWE, frames_e otherwise).
SimConfig with_variant(SimConfig cfg, Variant v);

std::shared_ptr<const SurfaceMesh> make_mesh(const SimConfig& cfg);

// A semi-discrete model ready for time marching.
struct ModelProblem {
  State initial;
  Rhs rhs;
  // Solution at time t when one is known.
  std::function<std::optional<State>(double t)> exact;
  std::function<double(const State&)> mass;
  std::function<double(const State&)> energy;
  // L2 error against the reference at time t, NaN without one.
  std::function<double(double t, const State&)> l2_error;
  // Optional admissibility check run after each step (SWE depth positivity).
  std::function<void(long step, double t, const State&)> check;
};

ModelProblem build_problem(const SimConfig& cfg, std::shared_ptr<const DgSpace> space);

struct RunResult {
  SimConfig config;
  DiagnosticSeries series;
  State final_state;
  double final_time = 0.0;
};

// Marches the configured problem, recording diagnostics every diagnostic_stride steps and at
// the end. A NumericalAbort is caught and reported through series.aborted().
RunResult run_simulation(const SimConfig& cfg, std::shared_ptr<const SurfaceMesh> mesh);
RunResult run_advection(const SimConfig& cfg, std::shared_ptr<const SurfaceMesh> mesh);
RunResult run_maxwell_tm(const SimConfig& cfg, std::shared_ptr<const SurfaceMesh> mesh);
RunResult run_swe(const SimConfig& cfg, std::shared_ptr<const SurfaceMesh> mesh);

struct ZeroTendency {
  double e1 = 0.0, e2 = 0.0;  // RMS of u.((u.grad) e_i)
};
// Frame tendency of the tangent field u = u1 e1 + u2 e2.
ZeroTendency zero_tendency_residual(const DgSpace& space, const FrameField& frames,
                                    const Eigen::MatrixXd& u1, const Eigen::MatrixXd& u2);

// Nondimensional shallow-water constants (unit radius, time in days).
struct SweConstants {
  double gravity;
  double omega;
};
SweConstants earth_constants();

}  // namespace framesurf
