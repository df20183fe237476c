// Copyright (c) 2026 the holocorr authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HOLOCORR_TYPES_HPP
#define HOLOCORR_TYPES_HPP

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace holocorr {

inline constexpr const char* kVersion = "holocorr 0.1.0";

template <typename T>
using Cx = std::complex<T>;

template <typename T>
using VectorCx = Eigen::Matrix<Cx<T>, Eigen::Dynamic, 1>;

template <typename T>
using MatrixCx = Eigen::Matrix<Cx<T>, Eigen::Dynamic, Eigen::Dynamic>;

// Bad user input / malformed configuration. CLI exit code 2.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A documented resource cap was exceeded. CLI exit code 3.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failure (degenerate input, non-convergence). CLI exit code 4.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A point of the projective line, stored as a unit-normalized homogeneous
/// pair (z0, z1). The affine value is z1/z0; [0:1] is the point at infinity.
/// Chart 0 uses the coordinate z = z1/z0, chart 1 uses w = z0/z1; the
/// canonical chart of a point is the one whose coordinate has modulus <= 1.
template <typename T>
class ProjectivePoint {
 public:
  ProjectivePoint() : z0_(1), z1_(0) {}

  ProjectivePoint(Cx<T> z0, Cx<T> z1) : z0_(z0), z1_(z1) {
    const T n = std::sqrt(std::norm(z0_) + std::norm(z1_));
    if (!(n > T(0)) || !std::isfinite(n)) {
      throw NumericError("ProjectivePoint: invalid homogeneous pair");
    }
    z0_ /= n;
    z1_ /= n;
  }

  static ProjectivePoint from_affine(Cx<T> z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return infinity();
    if (std::abs(z) > T(1)) {
      // Build from the reciprocal so huge affine values stay well scaled.
      return ProjectivePoint(Cx<T>(1) / z, Cx<T>(1));
    }
    return ProjectivePoint(Cx<T>(1), z);
  }

  static ProjectivePoint infinity() {
    ProjectivePoint p;
    p.z0_ = Cx<T>(0);
    p.z1_ = Cx<T>(1);
    return p;
  }

  Cx<T> h0() const { return z0_; }
  Cx<T> h1() const { return z1_; }

  bool is_infinity(T tol = T(1e-14)) const { return std::abs(z0_) <= tol; }

  /// 0 when |z1| <= |z0| (affine modulus <= 1), else 1.
  int canonical_chart() const { return std::abs(z1_) <= std::abs(z0_) ? 0 : 1; }

  /// Coordinate in the requested chart: z = z1/z0 (chart 0) or w = z0/z1.
  Cx<T> chart_coord(int chart) const {
    return chart == 0 ? z1_ / z0_ : z0_ / z1_;
  }

  /// Affine value z1/z0; may be infinite.
  Cx<T> affine() const { return z1_ / z0_; }

  /// Chordal distance |p0 q1 - p1 q0| in [0, 1]; phase-invariant.
  T chordal(const ProjectivePoint& q) const {
    return std::abs(z0_ * q.z1_ - z1_ * q.z0_);
  }

 private:
  Cx<T> z0_, z1_;
};

/// Uniform double in [0, 1) from the top 53 bits of the generator output.
/// std::uniform_real_distribution is not pinned across standard libraries;
/// this is, which keeps seeded artifacts byte-identical everywhere.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937_64& gen, double lo, double hi) {
  return lo + (hi - lo) * uniform01(gen);
}

inline std::complex<double> uniform_unit_disk(std::mt19937_64& gen) {
  for (;;) {
    const double re = uniform_range(gen, -1.0, 1.0);
    const double im = uniform_range(gen, -1.0, 1.0);
    if (re * re + im * im <= 1.0) return {re, im};
  }
}

/// Random point of P^1 distributed by the rotation-invariant area measure.
inline ProjectivePoint<double> random_sphere_point(std::mt19937_64& gen) {
  const double t = 1.0 - 2.0 * uniform01(gen);        // height, uniform
  const double th = 2.0 * M_PI * uniform01(gen);
  const double r0 = std::sqrt((1.0 + t) / 2.0);
  const double r1 = std::sqrt((1.0 - t) / 2.0);
  return ProjectivePoint<double>(r0, r1 * std::complex<double>(std::cos(th), std::sin(th)));
}

}  // namespace holocorr

#endif  // HOLOCORR_TYPES_HPP
