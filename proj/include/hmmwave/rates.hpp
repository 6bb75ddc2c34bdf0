#pragma once

#include <string>
#include <utility>
#include <vector>

namespace hmmwave::rates {

/// One (sweep_var, error) sample of a convergence sweep.
struct ConvergenceRecord {
  double sweep_var = 0.0;
  double error = 0.0;
  std::vector<std::pair<std::string, std::string>> meta;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;  // max |log e - fit| over the used points
  int points_used = 0;
};

/// Least-squares line in log-log coordinates.
RateFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

/// fit_loglog over records with error above the floor; throws when fewer
/// than 3 usable points remain.
RateFit fit_rate(const std::vector<ConvergenceRecord>& recs, double floor = 1e-11);

/// The maximal run of records, walking from the largest sweep_var down,
/// over which the error keeps decreasing by at least min_ratio. Returns the
/// kept records in ascending sweep_var order. Used to cut a series at its
/// error floor before fitting.
std::vector<ConvergenceRecord> decreasing_prefix(
    const std::vector<ConvergenceRecord>& recs, double min_ratio = 1.2);

/// Last `count` records in ascending sweep_var order (asymptotic tail).
std::vector<ConvergenceRecord> tail_records(
    const std::vector<ConvergenceRecord>& recs, int count);

}  // namespace hmmwave::rates
