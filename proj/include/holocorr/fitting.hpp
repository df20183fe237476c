// Copyright (c) 2026 the holocorr authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HOLOCORR_FITTING_HPP
#define HOLOCORR_FITTING_HPP

#include <cmath>
#include <utility>
#include <vector>

namespace holocorr {

struct RateFit {
  double rate = 0.0;   // exp(slope) of the log-linear fit
  double r2 = 0.0;
  int rows_used = 0;
  bool indeterminate = true;
};

/// Least-squares fit of log(error) vs n over the rows whose error clears
/// 10x the noise floor. Fewer than 3 usable rows -> indeterminate.
inline RateFit fit_exponential_rate(const std::vector<std::pair<int, double>>& rows,
                                    double noise_floor) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& [n, err] : rows) {
    if (err > 10.0 * noise_floor && err > 0.0) {
      pts.emplace_back(static_cast<double>(n), std::log(err));
    }
  }
  RateFit fit;
  fit.rows_used = static_cast<int>(pts.size());
  if (pts.size() < 3) return fit;

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pts.size());
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return fit;
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;

  double ss_res = 0, ss_tot = 0;
  const double mean = sy / n;
  for (const auto& [x, y] : pts) {
    const double pred = slope * x + intercept;
    ss_res += (y - pred) * (y - pred);
    ss_tot += (y - mean) * (y - mean);
  }
  fit.rate = std::exp(slope);
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.indeterminate = false;
  return fit;
}

}  // namespace holocorr

#endif  // HOLOCORR_FITTING_HPP
