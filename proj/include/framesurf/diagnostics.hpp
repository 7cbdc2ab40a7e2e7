#pragma once

#include <limits>
#include <ostream>
#include <string>
#include <vector>

namespace framesurf {

struct DiagnosticRow {
  double t = 0.0;
  double l2_error = std::numeric_limits<double>::quiet_NaN();  // NaN when no reference exists
  double mass = 0.0;
  double mass_err = 0.0;
  double energy = 0.0;
  double energy_err = 0.0;
};

// Time series of conservation diagnostics. Relative errors are taken against the first row.
class DiagnosticSeries {
 public:
  void record(double t, double l2_error, double mass, double energy);
  void mark_abort(long step, double t, const std::string& reason);

  const std::vector<DiagnosticRow>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }
  const DiagnosticRow& back() const { return rows_.back(); }
  bool aborted() const { return aborted_; }
  long abort_step() const { return abort_step_; }
  const std::string& abort_reason() const { return abort_reason_; }

  // Largest relative drift over the series.
  double max_mass_err() const;
  double max_energy_err() const;

  // Header `t,l2_error,mass,mass_err,energy,energy_err`; an ABORT row closes aborted runs.
  void write_csv(std::ostream& os) const;

 private:
  std::vector<DiagnosticRow> rows_;
  bool aborted_ = false;
  long abort_step_ = -1;
  double abort_t_ = 0.0;
  std::string abort_reason_;
};

}  // namespace framesurf
