#include "framesurf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <stdexcept>

namespace framesurf {

namespace {

double relative(double q, double q0) {
  if (q0 == 0.0) return std::abs(q - q0);
  return std::abs(q - q0) / std::abs(q0);
}

}  // namespace

void DiagnosticSeries::record(double t, double l2_error, double mass, double energy) {
  if (!rows_.empty() && !(t > rows_.back().t)) {
    throw std::invalid_argument("diagnostic times must increase");
  }
  DiagnosticRow r;
  r.t = t;
  r.l2_error = l2_error;
  r.mass = mass;
  r.energy = energy;
  if (!rows_.empty()) {
    r.mass_err = relative(mass, rows_.front().mass);
    r.energy_err = relative(energy, rows_.front().energy);
  }
  rows_.push_back(r);
}

void DiagnosticSeries::mark_abort(long step, double t, const std::string& reason) {
  aborted_ = true;
  abort_step_ = step;
  abort_t_ = t;
  abort_reason_ = reason;
}

double DiagnosticSeries::max_mass_err() const {
  double m = 0.0;
  for (const auto& r : rows_) m = std::max(m, r.mass_err);
  return m;
}

double DiagnosticSeries::max_energy_err() const {
  double m = 0.0;
  for (const auto& r : rows_) m = std::max(m, r.energy_err);
  return m;
}

void DiagnosticSeries::write_csv(std::ostream& os) const {
  os << "t,l2_error,mass,mass_err,energy,energy_err\n";
  os << std::setprecision(17);
  for (const auto& r : rows_) {
    os << r.t << ',' << r.l2_error << ',' << r.mass << ',' << r.mass_err << ',' << r.energy << ','
       << r.energy_err << '\n';
  }
  if (aborted_) {
    os << "ABORT,step=" << abort_step_ << ",t=" << abort_t_ << ',' << abort_reason_ << ",,\n";
  }
}

}  // namespace framesurf
