#include "framesurf/static_tests.hpp"

#include "framesurf/fields.hpp"

#include <stdexcept>

namespace framesurf {

StaticOp parse_static_op(const std::string& s) {
  if (s == "div") return StaticOp::divergence;
  if (s == "curl") return StaticOp::curl;
  throw std::invalid_argument("unknown static operator '" + s + "' (expected div|curl)");
}

StaticResult run_static_test(std::shared_ptr<const SurfaceMesh> mesh, StaticOp op, int test,
                             int p, FrameKind frames, bool with_G,
                             const StaticOptions& options) {
  const DgSpace space(std::move(mesh), p);
  const FrameField ff = build_frames(space, frames);
  const VectorFunction field =
      op == StaticOp::divergence ? divergence_test_field(test) : curl_test_field(test);
  const FrameComponents c = frame_components(space, ff, field);
  const FrameVector v{c.c1, c.c2};
  const Eigen::MatrixXd result = op == StaticOp::divergence
                                     ? weak_divergence(space, ff, v, options.flux, with_G,
                                                       options.divergence_sign)
                                     : weak_curl_normal(space, ff, v, options.flux, with_G);
  const ElementMask mask = pole_free_mask(space, options.pole_cap);
  StaticResult out;
  out.op = op;
  out.test = test;
  out.p = p;
  out.frames = frames;
  out.with_G = with_G;
  out.l2_error = rms_norm(space, result, mask);
  out.linf_error = max_norm(result, mask);
  const Vec3Field vc = ff.compose_nodes(c.c1, c.c2);
  if (op == StaticOp::divergence) {
    out.g = compute_G(space, ff.node[2], vc, nullptr, mask);
  } else {
    const Vec3Field rotated = ff.compose_nodes(c.c2, -c.c1);
    out.g = compute_G(space, ff.node[2], rotated, nullptr, mask);
  }
  return out;
}

}  // namespace framesurf
