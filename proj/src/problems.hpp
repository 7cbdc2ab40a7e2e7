#pragma once

#include "framesurf/fields.hpp"
#include "framesurf/solvers.hpp"

namespace framesurf::detail {

ModelProblem build_advection(const SimConfig& cfg, std::shared_ptr<const DgSpace> space);
ModelProblem build_maxwell(const SimConfig& cfg, std::shared_ptr<const DgSpace> space);
ModelProblem build_swe(const SimConfig& cfg, std::shared_ptr<const DgSpace> space);

// Frames of the requested kind with the configured normal rule for LOCSPH.
FrameField make_frames(const DgSpace& space, FrameKind kind, NormalRule rule);

// Rotation of x about the unit axis a by angle t.
Eigen::Vector3d rotate(const Eigen::Vector3d& x, const Eigen::Vector3d& a, double t);

// Values of f at the volume quadrature points.
Eigen::MatrixXd at_quad(const DgSpace& space, const ScalarFunction& f);

// sqrt of the integral of the squared quadrature data.
double l2_quad(const DgSpace& space, const Eigen::MatrixXd& quad_data);

}  // namespace framesurf::detail
