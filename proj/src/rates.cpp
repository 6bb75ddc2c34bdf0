#include "hmmwave/rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hmmwave::rates {

RateFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_loglog needs >= 2 matched points");
  const int n = int(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> lx(n), ly(n);
  for (int i = 0; i < n; ++i) {
    if (!(x[i] > 0) || !(y[i] > 0))
      throw std::invalid_argument("fit_loglog needs positive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double det = n * sxx - sx * sx;
  if (det == 0.0) throw std::invalid_argument("fit_loglog: degenerate abscissae");
  RateFit fit;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.points_used = n;
  for (int i = 0; i < n; ++i)
    fit.max_residual = std::max(
        fit.max_residual, std::fabs(ly[i] - (fit.intercept + fit.slope * lx[i])));
  return fit;
}

RateFit fit_rate(const std::vector<ConvergenceRecord>& recs, double floor) {
  std::vector<double> x, y;
  for (const auto& r : recs) {
    if (r.error > floor) {
      x.push_back(r.sweep_var);
      y.push_back(r.error);
    }
  }
  if (x.size() < 3)
    throw std::runtime_error("fit_rate: fewer than 3 records above the error floor");
  return fit_loglog(x, y);
}

std::vector<ConvergenceRecord> decreasing_prefix(
    const std::vector<ConvergenceRecord>& recs, double min_ratio) {
  std::vector<ConvergenceRecord> sorted = recs;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.sweep_var > b.sweep_var; });
  std::vector<ConvergenceRecord> kept;
  for (const auto& r : sorted) {
    if (!kept.empty() && !(kept.back().error >= min_ratio * r.error)) break;
    kept.push_back(r);
  }
  std::reverse(kept.begin(), kept.end());
  return kept;
}

std::vector<ConvergenceRecord> tail_records(
    const std::vector<ConvergenceRecord>& recs, int count) {
  std::vector<ConvergenceRecord> sorted = recs;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.sweep_var < b.sweep_var; });
  if (int(sorted.size()) > count)
    sorted.resize(count);
  return sorted;
}

}  // namespace hmmwave::rates
