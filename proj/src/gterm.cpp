#include "framesurf/gterm.hpp"

#include "framesurf/fields.hpp"

#include <stdexcept>

namespace framesurf {

namespace {

// (k . grad) f for each Cartesian component f of v.
Vec3Field directional(const DgSpace& space, const Vec3Field& k, const Vec3Field& v,
                      const FrameField* gradient_frames) {
  const auto& ref = space.ref();
  const auto& g = space.nodes();
  Vec3Field out;
  if (gradient_frames == nullptr) {
    const Eigen::ArrayXXd a1 = dot(k, g.dual1).array();
    const Eigen::ArrayXXd a2 = dot(k, g.dual2).array();
    for (int c = 0; c < 3; ++c) {
      out[c] = (a1 * (ref.dr * v[c]).array() + a2 * (ref.ds * v[c]).array()).matrix();
    }
    return out;
  }
  const auto& e = gradient_frames->node;
  const Eigen::ArrayXXd k1 = dot(k, e[0]).array();
  const Eigen::ArrayXXd k2 = dot(k, e[1]).array();
  for (int c = 0; c < 3; ++c) {
    const Vec3Field grad = space.surface_gradient(v[c]);
    out[c] = (k1 * dot(e[0], grad).array() + k2 * dot(e[1], grad).array()).matrix();
  }
  return out;
}

void check_sizes(const DgSpace& space, const Vec3Field& k, const Vec3Field& v) {
  for (int c = 0; c < 3; ++c) {
    if (k[c].rows() != space.num_nodes() || k[c].cols() != space.num_elements() ||
        v[c].rows() != space.num_nodes() || v[c].cols() != space.num_elements()) {
      throw std::invalid_argument("compute_G: field size does not match the mesh");
    }
  }
}

}  // namespace

GSplit compute_G(const DgSpace& space, const Vec3Field& k, const Vec3Field& v,
                 const FrameField* gradient_frames, const ElementMask& mask) {
  check_sizes(space, k, v);
  GSplit s;
  s.term1 = dot(k, directional(space, k, v, gradient_frames));
  s.term2 = dot(k, directional(space, v, k, gradient_frames));
  s.total = s.term1 - s.term2;
  s.term1_l2 = rms_norm(space, s.term1, mask);
  s.term2_l2 = rms_norm(space, s.term2, mask);
  s.term1_linf = max_norm(s.term1, mask);
  s.term2_linf = max_norm(s.term2, mask);
  return s;
}

Eigen::MatrixXd g_total(const DgSpace& space, const Vec3Field& k, const Vec3Field& v) {
  return dot(k, directional(space, k, v, nullptr)) - dot(k, directional(space, v, k, nullptr));
}

std::vector<GSweepRow> g_convergence_sweep(std::shared_ptr<const SurfaceMesh> mesh,
                                           const VectorFunction& field, FrameKind k_rule,
                                           const std::vector<int>& p_list,
                                           bool exclude_pole_elements) {
  std::vector<GSweepRow> rows;
  for (int p : p_list) {
    const DgSpace space(mesh, p);
    const FrameField frames = build_frames(space, k_rule);
    const Vec3Field v = represent_in_frames(space, frames, field);
    const ElementMask mask = exclude_pole_elements ? pole_free_mask(space) : ElementMask{};
    const GSplit g = compute_G(space, frames.node[2], v, nullptr, mask);
    rows.push_back({p, g.term1_l2, g.term2_l2, g.term1_linf, g.term2_linf});
  }
  return rows;
}

}  // namespace framesurf
