#pragma once

#include "framesurf/frames.hpp"
#include "framesurf/space.hpp"

#include <functional>
#include <vector>

namespace framesurf {

struct GSplit {
  Eigen::MatrixXd term1;  // k.(k.grad)v
  Eigen::MatrixXd term2;  // k.(v.grad)k
  Eigen::MatrixXd total;  // term1 - term2
  double term1_l2 = 0.0, term2_l2 = 0.0, term1_linf = 0.0, term2_linf = 0.0;
};

// Spurious divergence of v for normal field k, all nodal Cartesian vectors.
// Gradients are surface gradients of the element map unless gradient_frames is given,
// in which case they are taken along its e1,e2 directions.
GSplit compute_G(const DgSpace& space, const Vec3Field& k, const Vec3Field& v,
                 const FrameField* gradient_frames = nullptr, const ElementMask& mask = {});

// Only the nodal total, for use inside weak forms.
Eigen::MatrixXd g_total(const DgSpace& space, const Vec3Field& k, const Vec3Field& v);

struct GSweepRow {
  int p = 0;
  double term1_l2 = 0.0, term2_l2 = 0.0, term1_linf = 0.0, term2_linf = 0.0;
};

// Vector field given at Cartesian points.
using VectorFunction = std::function<Eigen::Vector3d(const Eigen::Vector3d&)>;

// Sweeps G(e3, v) over polynomial orders for a frame kind on a fixed mesh.
std::vector<GSweepRow> g_convergence_sweep(std::shared_ptr<const SurfaceMesh> mesh,
                                           const VectorFunction& field, FrameKind k_rule,
                                           const std::vector<int>& p_list,
                                           bool exclude_pole_elements = true);

}  // namespace framesurf
