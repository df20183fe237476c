// Copyright (c) 2026 the holocorr authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HOLOCORR_UNIVARIATE_HPP
#define HOLOCORR_UNIVARIATE_HPP

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

#include "holocorr/types.hpp"

namespace holocorr {

/// Dense univariate polynomial, coefficients in ascending degree order.
template <typename T>
struct UnivariatePoly {
  VectorCx<T> coeff;

  UnivariatePoly() : coeff(VectorCx<T>::Zero(1)) {}
  explicit UnivariatePoly(VectorCx<T> c) : coeff(std::move(c)) {
    if (coeff.size() == 0) coeff = VectorCx<T>::Zero(1);
  }
  template <typename Derived>
  explicit UnivariatePoly(const Eigen::MatrixBase<Derived>& c) : coeff(c) {
    if (coeff.size() == 0) coeff = VectorCx<T>::Zero(1);
  }

  int degree() const {
    for (int i = static_cast<int>(coeff.size()) - 1; i >= 0; --i) {
      if (coeff(i) != Cx<T>(0)) return i;
    }
    return -1;  // identically zero
  }

  T sup_norm() const { return coeff.cwiseAbs().maxCoeff(); }
  bool is_zero(T rel_tol = T(0)) const {
    return sup_norm() <= rel_tol;
  }
};

/// Drops high-order coefficients below rel_tol * sup-norm.
template <typename T>
UnivariatePoly<T> trimmed(const UnivariatePoly<T>& p, T rel_tol = T(1e-14)) {
  const T cut = p.sup_norm() * rel_tol;
  int d = static_cast<int>(p.coeff.size()) - 1;
  while (d > 0 && std::abs(p.coeff(d)) <= cut) --d;
  UnivariatePoly<T> q;
  q.coeff = p.coeff.head(d + 1);
  if (d >= 1 || std::abs(q.coeff(0)) > cut) {
    for (int i = 0; i <= d; ++i) {
      if (std::abs(q.coeff(i)) <= cut) q.coeff(i) = Cx<T>(0);
    }
  }
  return q;
}

template <typename T>
UnivariatePoly<T> poly_derivative(const UnivariatePoly<T>& p) {
  const int d = static_cast<int>(p.coeff.size()) - 1;
  UnivariatePoly<T> q;
  if (d <= 0) return q;
  q.coeff = VectorCx<T>::Zero(d);
  for (int i = 1; i <= d; ++i) q.coeff(i - 1) = T(i) * p.coeff(i);
  return q;
}

template <typename T>
Cx<T> poly_eval(const UnivariatePoly<T>& p, Cx<T> z) {
  const int n = static_cast<int>(p.coeff.size()) - 1;
  if (std::abs(z) <= T(1)) {
    Cx<T> r = p.coeff(n);
    for (int i = n - 1; i >= 0; --i) r = r * z + p.coeff(i);
    return r;
  }
  // p(z) = z^n q(1/z) with reversed coefficients; keeps Horner well scaled.
  const Cx<T> u = Cx<T>(1) / z;
  Cx<T> r = p.coeff(0);
  for (int i = 1; i <= n; ++i) r = r * u + p.coeff(i);
  return r * std::pow(z, T(n));
}

/// |p(z)| relative to the same-degree positive-coefficient majorant; a
/// scale-free residual that never overflows.
template <typename T>
T poly_residual(const UnivariatePoly<T>& p, Cx<T> z) {
  const int n = static_cast<int>(p.coeff.size()) - 1;
  const T az = std::abs(z);
  Cx<T> v;
  T m = T(0);
  if (az <= T(1)) {
    v = p.coeff(n);
    for (int i = n - 1; i >= 0; --i) v = v * z + p.coeff(i);
    m = std::abs(p.coeff(n));
    for (int i = n - 1; i >= 0; --i) m = m * az + std::abs(p.coeff(i));
  } else {
    const Cx<T> u = Cx<T>(1) / z;
    const T au = std::abs(u);
    v = p.coeff(0);
    m = std::abs(p.coeff(0));
    for (int i = 1; i <= n; ++i) {
      v = v * u + p.coeff(i);
      m = m * au + std::abs(p.coeff(i));
    }
  }
  return m > T(0) ? std::abs(v) / m : std::abs(v);
}

template <typename T>
struct RootCluster {
  ProjectivePoint<T> point;
  int multiplicity = 1;
};

template <typename T>
struct RootSet {
  std::vector<RootCluster<T>> clusters;
  T max_residual = T(0);
  int iterations = 0;
  bool used_fallback = false;

  int total_multiplicity() const {
    int s = 0;
    for (const auto& c : clusters) s += c.multiplicity;
    return s;
  }

  /// All roots repeated by multiplicity, in cluster order.
  std::vector<ProjectivePoint<T>> flatten() const {
    std::vector<ProjectivePoint<T>> out;
    out.reserve(total_multiplicity());
    for (const auto& c : clusters) {
      for (int k = 0; k < c.multiplicity; ++k) out.push_back(c.point);
    }
    return out;
  }
};

namespace detail {

// Newton correction p/p' and the scale-free residual |p|/majorant, both
// computed through the reversed form when |z| > 1.
template <typename T>
void newton_data(const VectorCx<T>& a, Cx<T> z, Cx<T>& step, T& residual) {
  const int n = static_cast<int>(a.size()) - 1;
  if (std::abs(z) <= T(1)) {
    const T az = std::abs(z);
    Cx<T> p = a(n), dp = Cx<T>(0);
    T m = std::abs(a(n));
    for (int i = n - 1; i >= 0; --i) {
      dp = dp * z + p;
      p = p * z + a(i);
      m = m * az + std::abs(a(i));
    }
    residual = m > T(0) ? std::abs(p) / m : std::abs(p);
    step = dp == Cx<T>(0) ? Cx<T>(0) : p / dp;
    return;
  }
  const Cx<T> u = Cx<T>(1) / z;
  const T au = std::abs(u);
  Cx<T> q = a(0), dq = Cx<T>(0);
  T m = std::abs(a(0));
  for (int i = 1; i <= n; ++i) {
    dq = dq * u + q;
    q = q * u + a(i);
    m = m * au + std::abs(a(i));
  }
  residual = m > T(0) ? std::abs(q) / m : std::abs(q);
  const Cx<T> denom = T(n) * q - u * dq;
  step = denom == Cx<T>(0) ? Cx<T>(0) : z * q / denom;
}

template <typename T>
Cx<T> newton_step(const VectorCx<T>& a, Cx<T> z) {
  Cx<T> s;
  T r;
  newton_data(a, z, s, r);
  return s;
}

// Roots freeze once |p| reaches machine level of the coefficient majorant;
// a multiple root freezes with corrections still at eps^(1/m) size, so the
// last correction is kept as that root's uncertainty.
template <typename T>
bool aberth_ehrlich(const VectorCx<T>& a, std::vector<Cx<T>>& z,
                    std::vector<T>& stall, int max_it, T tol, int& iters) {
  const int n = static_cast<int>(z.size());
  const T eps = std::numeric_limits<T>::epsilon();
  stall.assign(n, T(0));
  std::vector<bool> frozen(n, false);
  for (iters = 0; iters < max_it; ++iters) {
    T worst = T(0);
    bool all_frozen = true;
    for (int i = 0; i < n; ++i) {
      if (frozen[i]) continue;
      Cx<T> nw;
      T res;
      newton_data(a, z[i], nw, res);
      if (res <= T(4) * eps) {
        frozen[i] = true;
        continue;
      }
      all_frozen = false;
      Cx<T> rep(0);
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const Cx<T> d = z[i] - z[j];
        if (d == Cx<T>(0)) continue;
        rep += Cx<T>(1) / d;
      }
      const Cx<T> denom = Cx<T>(1) - nw * rep;
      const Cx<T> w = denom == Cx<T>(0) ? nw : nw / denom;
      z[i] -= w;
      stall[i] = std::abs(w);
      worst = std::max(worst, std::abs(w) / std::max(T(1), std::abs(z[i])));
    }
    if (all_frozen || worst < tol) return true;
  }
  return false;
}

template <typename T>
std::vector<Cx<T>> companion_roots(const VectorCx<T>& a) {
  const int n = static_cast<int>(a.size()) - 1;
  MatrixCx<T> c = MatrixCx<T>::Zero(n, n);
  for (int i = 1; i < n; ++i) c(i, i - 1) = Cx<T>(1);
  for (int i = 0; i < n; ++i) c(i, n - 1) = -a(i) / a(n);
  Eigen::ComplexEigenSolver<MatrixCx<T>> es(c, false);
  std::vector<Cx<T>> z(n);
  for (int i = 0; i < n; ++i) z[i] = es.eigenvalues()(i);
  return z;
}

}  // namespace detail

/// Roots of p counted with multiplicity, completed projectively: when the
/// caller's nominal degree exceeds deg(p), the deficit is returned as the
/// point at infinity. Multiplicities come from clustering within radius
/// cluster_radius_scale * max(1, |root|).
template <typename T>
RootSet<T> roots(const UnivariatePoly<T>& p, int nominal_degree,
                 T tolerance = T(1e-10),
                 T cluster_radius_scale = T(1e-6)) {
  UnivariatePoly<T> q = trimmed(p);
  if (q.degree() < 0 || q.sup_norm() == T(0)) {
    throw NumericError("roots: degenerate (identically zero polynomial)");
  }
  const int deg = q.degree();
  if (nominal_degree < deg) {
    throw ValidationError("roots: nominal degree below actual degree");
  }

  RootSet<T> out;
  const int inf_count = nominal_degree - deg;

  // Deflate exact-scale zeros at the origin first.
  const T cut = q.sup_norm() * T(1e-14);
  int zero_mult = 0;
  while (zero_mult < deg && std::abs(q.coeff(zero_mult)) <= cut) ++zero_mult;
  VectorCx<T> a = q.coeff.segment(zero_mult, deg - zero_mult + 1);

  std::vector<Cx<T>> z;
  std::vector<T> stall;  // final correction size; the root's uncertainty level
  const int m = static_cast<int>(a.size()) - 1;
  if (m == 1) {
    z.push_back(-a(0) / a(1));
  } else if (m == 2) {
    // Stable quadratic: pick the sqrt branch that avoids cancellation.
    const Cx<T> b = a(1), c0 = a(0), a2 = a(2);
    const Cx<T> disc = b * b - T(4) * a2 * c0;
    Cx<T> s = std::sqrt(disc);
    if (std::real(std::conj(b) * s) < T(0)) s = -s;
    const Cx<T> qq = T(-0.5) * (b + s);
    z.push_back(qq / a2);
    z.push_back(qq != Cx<T>(0) ? c0 / qq : Cx<T>(0));
  } else if (m >= 3) {
    // Initial circle at the Fujiwara bound, angles offset off any axis.
    T r = T(0);
    for (int k = 1; k <= m; ++k) {
      const T base = std::abs(a(m - k)) / std::abs(a(m));
      r = std::max(r, std::pow(base, T(1) / T(k)));
    }
    r = std::max(T(0.5), T(2) * r);
    z.resize(m);
    for (int j = 0; j < m; ++j) {
      const T th = T(2) * T(M_PI) * T(j) / T(m) + T(0.4);
      z[j] = r * Cx<T>(std::cos(th), std::sin(th));
    }
    bool converged =
        detail::aberth_ehrlich(a, z, stall, 120, T(1e-13), out.iterations);
    if (!converged) {
      out.used_fallback = true;
      z = detail::companion_roots(a);
      for (auto& zi : z) {
        for (int it = 0; it < 3; ++it) zi -= detail::newton_step(a, zi);
      }
      int extra = 0;
      detail::aberth_ehrlich(a, z, stall, 40, T(1e-13), extra);
      out.iterations += extra;
    }
  }

  UnivariatePoly<T> pa;
  pa.coeff = a;
  for (const auto& zi : z) {
    out.max_residual = std::max(out.max_residual, poly_residual(pa, zi));
  }
  if (out.max_residual > tolerance) {
    throw NumericError("roots: iteration did not converge, max relative residual " +
                       std::to_string(out.max_residual));
  }

  // Cluster affine roots to assign multiplicities: single-linkage with a
  // per-root radius. A root whose iteration stalled (multiple root:
  // corrections bottom out near eps^(1/m)) widens its radius accordingly.
  for (int k = 0; k < zero_mult; ++k) z.push_back(Cx<T>(0));
  stall.resize(z.size(), T(0));
  const size_t nz = z.size();
  std::vector<size_t> parent(nz);
  std::iota(parent.begin(), parent.end(), size_t{0});
  auto find = [&](size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (size_t i = 0; i < nz; ++i) {
    const T ri = std::max(cluster_radius_scale * std::max(T(1), std::abs(z[i])),
                          T(12) * stall[i]);
    for (size_t j = i + 1; j < nz; ++j) {
      const T rj = std::max(cluster_radius_scale * std::max(T(1), std::abs(z[j])),
                            T(12) * stall[j]);
      if (std::abs(z[i] - z[j]) <= std::max(ri, rj)) {
        parent[find(i)] = find(j);
      }
    }
  }
  std::vector<Cx<T>> centers;
  std::vector<int> counts;
  std::vector<size_t> root_of;
  for (size_t i = 0; i < nz; ++i) {
    const size_t r = find(i);
    size_t slot = root_of.size();
    for (size_t s = 0; s < root_of.size(); ++s) {
      if (root_of[s] == r) slot = s;
    }
    if (slot == root_of.size()) {
      root_of.push_back(r);
      centers.push_back(Cx<T>(0));
      counts.push_back(0);
    }
    centers[slot] += z[i];
    counts[slot] += 1;
  }
  std::vector<size_t> cl_order(centers.size());
  std::iota(cl_order.begin(), cl_order.end(), size_t{0});
  std::sort(cl_order.begin(), cl_order.end(), [&](size_t i, size_t j) {
    const Cx<T> a1 = centers[i] / T(counts[i]), b1 = centers[j] / T(counts[j]);
    if (a1.real() != b1.real()) return a1.real() < b1.real();
    return a1.imag() < b1.imag();
  });
  for (size_t s : cl_order) {
    out.clusters.push_back(
        {ProjectivePoint<T>::from_affine(centers[s] / T(counts[s])), counts[s]});
  }
  if (inf_count > 0) {
    out.clusters.push_back({ProjectivePoint<T>::infinity(), inf_count});
  }
  return out;
}

}  // namespace holocorr

#endif  // HOLOCORR_UNIVARIATE_HPP
