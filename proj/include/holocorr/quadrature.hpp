// Copyright (c) 2026 the holocorr authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HOLOCORR_QUADRATURE_HPP
#define HOLOCORR_QUADRATURE_HPP

#include <vector>

#include "holocorr/types.hpp"

namespace holocorr {

/// Density of the normalized rotation-invariant area form against the
/// Lebesgue element of either affine chart: (1/pi) (1 + |z|^2)^-2.
inline double fs_density(std::complex<double> zeta) {
  const double s = 1.0 + std::norm(zeta);
  return 1.0 / (M_PI * s * s);
}

struct QuadratureNode {
  ProjectivePoint<double> point;
  double weight;       // node mass under the unit-mass area form
  double inv_density;  // 1 / fs_density at the canonical-chart coordinate
};

/// Equal-area midpoint grid on the sphere: size x size cells uniform in
/// (angle, height). Node weights sum to exactly 1, so sums against the grid
/// integrate the unit-mass area form; inv_density converts to chart-area
/// integrals. No node sits on a pole or on the chart seam.
class SphereGrid {
 public:
  explicit SphereGrid(int size) : size_(size) {
    if (size < 2) throw ValidationError("SphereGrid: size must be >= 2");
    nodes_.reserve(static_cast<size_t>(size) * size);
    const double w = 1.0 / (static_cast<double>(size) * size);
    for (int b = 0; b < size; ++b) {
      const double t = -1.0 + (2.0 * b + 1.0) / size;
      const double r0 = std::sqrt((1.0 + t) / 2.0);
      const double r1 = std::sqrt((1.0 - t) / 2.0);
      for (int a = 0; a < size; ++a) {
        const double th = 2.0 * M_PI * (a + 0.5) / size;
        ProjectivePoint<double> p(r0, r1 * std::complex<double>(std::cos(th), std::sin(th)));
        const double rho = fs_density(p.chart_coord(p.canonical_chart()));
        nodes_.push_back({p, w, 1.0 / rho});
      }
    }
  }

  int size() const { return size_; }
  const std::vector<QuadratureNode>& nodes() const { return nodes_; }

 private:
  int size_;
  std::vector<QuadratureNode> nodes_;
};

}  // namespace holocorr

#endif  // HOLOCORR_QUADRATURE_HPP
