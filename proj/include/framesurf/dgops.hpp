#pragma once

#include "framesurf/frames.hpp"
#include "framesurf/space.hpp"

#include <string>

namespace framesurf {

enum class FluxKind { upwind, lax_friedrichs, central };

// per_side: each element uses its own in-surface conormal (n = dl x e3 of that element).
// shared: the neighbour reuses the negated conormal of the current side, so fluxes telescope.
// frame: n = dl x e3 with e3 taken from the frame field.
enum class ConormalRule { per_side, shared, frame };

struct FluxRule {
  FluxKind kind = FluxKind::upwind;
  ConormalRule conormals = ConormalRule::frame;
};

// Sign of the G term in the weak divergence. `added` is what the divergence identity gives;
// `subtracted` keeps the alternative convention for comparison runs.
enum class GSign { added, subtracted };

// Factor handed to divergence_residual for the sign convention.
inline double residual_g_sign(GSign s) { return s == GSign::added ? -1.0 : 1.0; }

FluxKind parse_flux_kind(const std::string& s);
GSign parse_g_sign(const std::string& s);
ConormalRule parse_conormal_rule(const std::string& s);

// Vector expressed through frame components v^1 e1 + v^2 e2.
struct FrameVector {
  Eigen::MatrixXd c1, c2;
};

// Conormal seen by the element owning edge row `row` under the rule. The frame rule
// needs the edge trace of e3.
Vec3Field effective_conormals(const DgSpace& space, ConormalRule rule,
                              const Vec3Field* e3_edge = nullptr);

// Normal numerical flux per element edge point (3ne x K). flux_trace holds each
// element's own trace of the flux vector; the neighbour's trace is fetched through
// the space's edge pairing. velocity_trace selects the upwind side (defaults to the
// flux vector itself); state_trace enables the Lax-Friedrichs jump penalty.
Eigen::MatrixXd surface_flux_integral(const DgSpace& space, const Vec3Field& flux_trace,
                                      const Vec3Field* velocity_trace,
                                      const Eigen::MatrixXd* state_trace,
                                      const FluxRule& rule, const Vec3Field* e3_edge = nullptr);

// Un-inverted divergence residual: -int grad(phi).F + int phi F_n - g_sign * int G phi.
Eigen::MatrixXd divergence_residual(const DgSpace& space, const Vec3Field& flux_quad,
                                    const Eigen::MatrixXd& edge_flux,
                                    const Eigen::MatrixXd* g_nodal, double g_sign);

Eigen::MatrixXd weak_divergence(const DgSpace& space, const FrameField& frames,
                                const FrameVector& v, const FluxRule& flux, bool with_G,
                                GSign sign = GSign::added);

Eigen::MatrixXd weak_curl_normal(const DgSpace& space, const FrameField& frames,
                                 const FrameVector& v, const FluxRule& flux, bool with_G);

// Derivative of f along e_dir (dir = 0 or 1) with a central flux on f.
Eigen::MatrixXd weak_directional_gradient(const DgSpace& space, const FrameField& frames,
                                          const Eigen::MatrixXd& f, int dir,
                                          const FluxRule& flux, bool with_G);

// Interpolated Cartesian vector at arbitrary frame samples.
Vec3Field compose(const Triad& e, const Eigen::MatrixXd& c1, const Eigen::MatrixXd& c2);

}  // namespace framesurf
