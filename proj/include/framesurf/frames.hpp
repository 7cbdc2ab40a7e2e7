#pragma once

#include "framesurf/space.hpp"

#include <array>
#include <string>

namespace framesurf {

enum class FrameKind { local, locsph };
enum class NormalRule { discrete, radial_sphere, analytic_ellipsoid };

FrameKind parse_frame_kind(const std::string& s);
std::string to_string(FrameKind k);

using Triad = std::array<Vec3Field, 3>;

struct FrameField {
  FrameKind kind = FrameKind::local;
  NormalRule rule = NormalRule::discrete;
  Triad node, quad, edge;  // e1,e2,e3 at solution nodes, volume and edge quadrature points
  std::array<Eigen::MatrixXd, 3> div_e;  // nodal divergence of e_i
  std::array<Vec3Field, 3> curl_e;       // nodal curl of e_i

  // Cartesian vector from frame components (v^1, v^2) at nodes.
  Vec3Field compose_nodes(const Eigen::MatrixXd& v1, const Eigen::MatrixXd& v2) const;
};

FrameField build_local_frames(const DgSpace& space);
FrameField build_locsph_frames(const DgSpace& space, NormalRule rule);
FrameField build_frames(const DgSpace& space, FrameKind kind);

// Recomputes div_e and curl_e from the nodal triads.
void frame_differentials(FrameField& frames, const DgSpace& space);

// Nodal angle between the two e3 fields.
Eigen::MatrixXd frame_angle_error(const FrameField& local, const FrameField& aligned);

// Largest deviation from orthonormality and right-handedness over all nodes.
double orthonormality_residual(const FrameField& frames);

}  // namespace framesurf
