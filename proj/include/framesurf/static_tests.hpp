#pragma once

#include "framesurf/dgops.hpp"
#include "framesurf/gterm.hpp"

#include <memory>
#include <string>

namespace framesurf {

enum class StaticOp { divergence, curl };

StaticOp parse_static_op(const std::string& s);

struct StaticResult {
  StaticOp op = StaticOp::divergence;
  int test = 1;
  int p = 0;
  FrameKind frames = FrameKind::local;
  bool with_G = false;
  double l2_error = 0.0;
  double linf_error = 0.0;
  GSplit g;
};

struct StaticOptions {
  FluxRule flux;
  GSign divergence_sign = GSign::added;
  double pole_cap = 0.3;  // chord radius of the polar caps left out of the norms
};

// Discrete divergence or normal curl of a field whose exact value is zero.
StaticResult run_static_test(std::shared_ptr<const SurfaceMesh> mesh, StaticOp op, int test,
                             int p, FrameKind frames, bool with_G,
                             const StaticOptions& options = {});

}  // namespace framesurf
