#pragma once

#include "framesurf/frames.hpp"
#include "framesurf/gterm.hpp"
#include "framesurf/space.hpp"

#include <functional>

namespace framesurf {

using ScalarFunction = std::function<double(const Eigen::Vector3d&)>;

// theta is colatitude, phi longitude, both of the direction x/|x|.
void spherical_angles(const Eigen::Vector3d& x, double& theta, double& phi);

// Cartesian vector from its eastward (v_phi) and northward (v_theta) components.
Eigen::Vector3d from_spherical(const Eigen::Vector3d& x, double v_theta, double v_phi);

// Static divergence-free and curl-free test fields (test = 1 or 2).
VectorFunction divergence_test_field(int test, double omega = 7.848e-6, double big_k = 7.848e-6);
VectorFunction curl_test_field(int test, double omega = 7.848e-6, double big_k = 7.848e-6);

struct FrameComponents {
  Eigen::MatrixXd c1, c2;
};

// Nodal frame components v.e1, v.e2 of a Cartesian field.
FrameComponents frame_components(const DgSpace& space, const FrameField& frames,
                                 const VectorFunction& f);
// Nodal Cartesian field v^1 e1 + v^2 e2 after projection onto the frames.
Vec3Field represent_in_frames(const DgSpace& space, const FrameField& frames,
                              const VectorFunction& f);

Eigen::MatrixXd sample_nodes(const DgSpace& space, const ScalarFunction& f);
Eigen::MatrixXd sample_quad(const DgSpace& space, const ScalarFunction& f);

// Drops elements whose spherical triangle contains a pole or that have a node within
// chord distance cap of one.
ElementMask pole_free_mask(const DgSpace& space, double cap = 0.3);

}  // namespace framesurf
