#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace framesurf {

// A bundle of nodal fields advanced together.
using State = std::vector<Eigen::MatrixXd>;

class NumericalAbort : public std::runtime_error {
 public:
  NumericalAbort(long step, double t, const std::string& what)
      : std::runtime_error(what + " at step " + std::to_string(step)), step_(step), t_(t) {}
  long step() const { return step_; }
  double time() const { return t_; }

 private:
  long step_;
  double t_;
};

using Rhs = std::function<State(double t, const State& y)>;

inline bool all_finite(const State& y) {
  for (const auto& m : y) {
    if (!m.allFinite()) return false;
  }
  return true;
}

// y + a * k, fieldwise.
inline State axpy(const State& y, double a, const State& k) {
  State out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + a * k[i];
  return out;
}

// One classical RK4 step.
inline State rk4_step(const Rhs& rhs, double t, const State& y, double dt) {
  const State k1 = rhs(t, y);
  const State k2 = rhs(t + 0.5 * dt, axpy(y, 0.5 * dt, k1));
  const State k3 = rhs(t + 0.5 * dt, axpy(y, 0.5 * dt, k2));
  const State k4 = rhs(t + dt, axpy(y, dt, k3));
  State out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    out[i] = y[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

// Advances y over nsteps steps of size dt starting at t0. observer(step, t, y) runs after
// every step. Throws NumericalAbort at the first non-finite state.
template <class Observer>
State rk4_march(const Rhs& rhs, State y, double t0, double dt, long nsteps, Observer&& observer) {
  if (!(dt > 0.0)) throw std::invalid_argument("rk4_march: dt must be positive");
  for (long n = 1; n <= nsteps; ++n) {
    y = rk4_step(rhs, t0 + (n - 1) * dt, y, dt);
    const double t = t0 + n * dt;
    if (!all_finite(y)) throw NumericalAbort(n, t, "non-finite state");
    observer(n, t, y);
  }
  return y;
}

}  // namespace framesurf
