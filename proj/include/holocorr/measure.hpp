// Copyright (c) 2026 the holocorr authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HOLOCORR_MEASURE_HPP
#define HOLOCORR_MEASURE_HPP

#include <functional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "holocorr/correspondence.hpp"
#include "holocorr/quadrature.hpp"
#include "holocorr/types.hpp"

namespace holocorr {

/// Discrete approximation of a positive measure: atoms plus nonnegative
/// weights. Mass bookkeeping is explicit; estimators keep probability
/// clouds at mass 1.
struct WeightedPointCloud {
  std::vector<ProjectivePoint<double>> atoms;
  std::vector<double> weights;

  double total_mass() const {
    double s = 0;
    for (double w : weights) s += w;
    return s;
  }

  void check_valid() const {
    if (atoms.size() != weights.size()) {
      throw ValidationError("cloud: atom/weight size mismatch");
    }
    for (double w : weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw ValidationError("cloud: weights must be finite and nonnegative");
      }
    }
  }

  static WeightedPointCloud dirac(const ProjectivePoint<double>& p) {
    return {{p}, {1.0}};
  }
};

/// Chart-aware scalar test function with a smoothness class tag and a
/// sampled norm bound for use in tolerance budgets.
class ScalarTestFunction {
 public:
  ScalarTestFunction(std::function<std::complex<double>(const ProjectivePoint<double>&)> f,
                     int smoothness, double norm_bound)
      : eval_(std::move(f)), smoothness_(smoothness), norm_bound_(norm_bound) {}

  std::complex<double> operator()(const ProjectivePoint<double>& p) const {
    return eval_(p);
  }
  int smoothness() const { return smoothness_; }
  double norm_bound() const { return norm_bound_; }

 private:
  std::function<std::complex<double>(const ProjectivePoint<double>&)> eval_;
  int smoothness_;
  double norm_bound_;
};

// Sphere coordinate functions of a unit-normalized homogeneous pair; the
// three smooth global coordinates of the embedding P^1 = S^2.
inline double sphere_u1(const ProjectivePoint<double>& p) {
  return std::norm(p.h0()) - std::norm(p.h1());
}
inline double sphere_u2(const ProjectivePoint<double>& p) {
  return 2.0 * std::real(std::conj(p.h0()) * p.h1());
}
inline double sphere_u3(const ProjectivePoint<double>& p) {
  return 2.0 * std::imag(std::conj(p.h0()) * p.h1());
}

/// Sampled sup of the function and of its chart-coordinate gradient; the
/// C^1 norm estimate used in tolerance budgets.
inline double estimate_c1_norm(
    const std::function<std::complex<double>(const ProjectivePoint<double>&)>& f,
    int samples = 1000, unsigned long long seed = 2026) {
  std::mt19937_64 gen(seed);
  double best = 0.0;
  const double h = 1e-5;
  for (int k = 0; k < samples; ++k) {
    const auto p = random_sphere_point(gen);
    best = std::max(best, std::abs(f(p)));
    const int c = p.canonical_chart();
    const auto z = p.chart_coord(c);
    auto lift = [&](std::complex<double> zz) {
      return c == 0 ? ProjectivePoint<double>(1.0, zz)
                    : ProjectivePoint<double>(zz, 1.0);
    };
    const auto gx = (f(lift(z + h)) - f(lift(z - h))) / (2 * h);
    const auto gy = (f(lift(z + std::complex<double>(0, h))) -
                     f(lift(z - std::complex<double>(0, h)))) / (2 * h);
    best = std::max(best, std::sqrt(std::norm(gx) + std::norm(gy)));
  }
  return best;
}

inline ScalarTestFunction make_test_function(
    std::function<std::complex<double>(const ProjectivePoint<double>&)> f,
    int smoothness = 1) {
  const double bound = estimate_c1_norm(f);
  return ScalarTestFunction(std::move(f), smoothness, bound);
}

// ---------------------------------------------------------------------------
// Transfer operators

/// Each atom of weight w spreads onto the d1 forward images, each keeping
/// weight w: total mass multiplies by d1.
inline WeightedPointCloud pushforward_measure(const Correspondence<double>& f,
                                              const WeightedPointCloud& nu) {
  nu.check_valid();
  WeightedPointCloud out;
  out.atoms.reserve(nu.atoms.size() * f.d1());
  for (size_t i = 0; i < nu.atoms.size(); ++i) {
    for (const auto& y : evaluate_forward(f, nu.atoms[i]).flatten()) {
      out.atoms.push_back(y);
      out.weights.push_back(nu.weights[i]);
    }
  }
  return out;
}

/// Mirror image through the adjoint: mass multiplies by d2.
inline WeightedPointCloud pullback_measure(const Correspondence<double>& f,
                                           const WeightedPointCloud& nu) {
  return pushforward_measure(adjoint(f), nu);
}

/// (f_* psi)(y) = sum of psi over the d2 preimages of y, with multiplicity.
/// Continuous but in general no better; the smoothness tag drops to C^0.
inline ScalarTestFunction pushforward_function(const Correspondence<double>& f,
                                               const ScalarTestFunction& psi) {
  auto ev = [f, psi](const ProjectivePoint<double>& y) {
    std::complex<double> s = 0;
    for (const auto& x : evaluate_backward(f, y).flatten()) s += psi(x);
    return s;
  };
  return ScalarTestFunction(std::move(ev), 0, psi.norm_bound() * f.d2());
}

inline std::complex<double> pair_measure_function(const WeightedPointCloud& nu,
                                                  const ScalarTestFunction& psi) {
  std::complex<double> s = 0;
  for (size_t i = 0; i < nu.atoms.size(); ++i) s += nu.weights[i] * psi(nu.atoms[i]);
  return s;
}

// ---------------------------------------------------------------------------
// Equilibrium measure estimators

enum class OrbitDirection {
  Backward,  // normalized pullbacks; estimates the measure with f^* mu = d2 mu
  Forward,   // normalized pushforwards; estimates the measure with f_* mu = d1 mu
};

/// Merges atoms closer than radius (phase-canonical chart coordinates),
/// summing weights. Memory discipline for very large clouds.
inline WeightedPointCloud merge_close_atoms(const WeightedPointCloud& cloud,
                                            double radius = 1e-9) {
  struct Key {
    int chart;
    long long re, im;
    bool operator==(const Key& o) const {
      return chart == o.chart && re == o.re && im == o.im;
    }
  };
  struct KeyHash {
    size_t operator()(const Key& k) const {
      return std::hash<long long>()(k.re * 1000003 + k.im * 97 + k.chart);
    }
  };
  std::unordered_map<Key, size_t, KeyHash> buckets;
  WeightedPointCloud out;
  for (size_t i = 0; i < cloud.atoms.size(); ++i) {
    const auto& p = cloud.atoms[i];
    const int c = p.canonical_chart();
    const auto z = p.chart_coord(c);
    bool merged = false;
    for (int dr = -1; dr <= 1 && !merged; ++dr) {
      for (int di = -1; di <= 1 && !merged; ++di) {
        Key k{c, static_cast<long long>(std::floor(z.real() / radius)) + dr,
              static_cast<long long>(std::floor(z.imag() / radius)) + di};
        auto it = buckets.find(k);
        if (it != buckets.end() && out.atoms[it->second].chordal(p) <= radius) {
          out.weights[it->second] += cloud.weights[i];
          merged = true;
        }
      }
    }
    if (!merged) {
      Key k{c, static_cast<long long>(std::floor(z.real() / radius)),
            static_cast<long long>(std::floor(z.imag() / radius))};
      buckets[k] = out.atoms.size();
      out.atoms.push_back(p);
      out.weights.push_back(cloud.weights[i]);
    }
  }
  return out;
}

/// Seed draw from the rotation-invariant distribution, avoiding a list of
/// known exceptional points.
inline ProjectivePoint<double> draw_generic_seed(
    std::mt19937_64& gen,
    const std::vector<ProjectivePoint<double>>& excluded = {},
    double min_chordal = 1e-3) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const auto p = random_sphere_point(gen);
    bool ok = true;
    for (const auto& e : excluded) {
      if (p.chordal(e) < min_chordal) ok = false;
    }
    if (ok) return p;
  }
  throw NumericError("draw_generic_seed: exclusion list too dense");
}

/// Normalized orbit cloud of depth n from a generic seed: the full tree
/// (mass exactly 1) or sample_count independent uniform branch paths of
/// weight 1/k each. Backward direction estimates mu+ (d1 < d2: mu),
/// forward estimates mu-.
inline WeightedPointCloud equilibrium_measure(
    const Correspondence<double>& f, const ProjectivePoint<double>& seed,
    int depth, long sample_count = 0, OrbitDirection dir = OrbitDirection::Backward,
    std::mt19937_64* gen = nullptr, long full_cap = 1 << 20) {
  if (depth < 0) throw ValidationError("equilibrium_measure: negative depth");
  const Correspondence<double> step =
      dir == OrbitDirection::Backward ? adjoint(f) : f;
  const int branching = step.d1();

  if (sample_count == 0) {
    double total = 1;
    for (int k = 0; k < depth; ++k) total *= branching;
    if (total > static_cast<double>(full_cap)) {
      throw BudgetError("equilibrium_measure: full tree exceeds cap; use sampled mode");
    }
    WeightedPointCloud cloud = WeightedPointCloud::dirac(seed);
    for (int k = 0; k < depth; ++k) {
      cloud = pushforward_measure(step, cloud);
      for (auto& w : cloud.weights) w /= branching;
      if (cloud.atoms.size() > 1000000) cloud = merge_close_atoms(cloud);
    }
    return cloud;
  }

  if (!gen) throw ValidationError("equilibrium_measure: sampled mode needs a generator");
  WeightedPointCloud cloud;
  cloud.atoms.reserve(sample_count);
  for (long s = 0; s < sample_count; ++s) {
    ProjectivePoint<double> cur = seed;
    for (int k = 0; k < depth; ++k) {
      const auto children = evaluate_forward(step, cur).flatten();
      const int pick = std::min<int>(static_cast<int>(uniform01(*gen) * children.size()),
                                     static_cast<int>(children.size()) - 1);
      cur = children[pick];
    }
    cloud.atoms.push_back(cur);
    cloud.weights.push_back(1.0 / static_cast<double>(sample_count));
  }
  return cloud;
}

/// k-th complex moments sum w_j z_j^k of a cloud, affine coordinates.
inline std::vector<std::complex<double>> cloud_moments(const WeightedPointCloud& cloud,
                                                       int k_max) {
  std::vector<std::complex<double>> out(k_max, 0.0);
  for (size_t i = 0; i < cloud.atoms.size(); ++i) {
    const std::complex<double> z = cloud.atoms[i].affine();
    std::complex<double> p = 1.0;
    for (int k = 0; k < k_max; ++k) {
      p *= z;
      out[k] += cloud.weights[i] * p;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// L^1 equidistribution of normalized pushforwards

/// Table of (n, || d2^-n (f^n)_* psi - <mu_hat, psi> ||_L1) for n = 1..n_max,
/// with the L^1 integral over the quadrature grid and mu_hat an internal
/// depth-`depth` backward estimate.
inline std::vector<std::pair<int, double>> l1_equidistribution_check(
    const Correspondence<double>& f, const ScalarTestFunction& psi, int n_max,
    int grid_size = 64, int depth = 12, unsigned long long seed = 20260810) {
  if (n_max < 1) throw ValidationError("l1_equidistribution_check: n_max >= 1");
  std::mt19937_64 gen(seed);
  const auto seed_pt = draw_generic_seed(gen);
  double full = 1;
  for (int k = 0; k < depth; ++k) full *= f.d2();
  WeightedPointCloud mu = full <= 4096.0
                              ? equilibrium_measure(f, seed_pt, depth)
                              : equilibrium_measure(f, seed_pt, depth, 4096,
                                                    OrbitDirection::Backward, &gen);
  const std::complex<double> limit = pair_measure_function(mu, psi);

  const SphereGrid grid(grid_size);
  const Correspondence<double> back = adjoint(f);

  // Per-node preimage multisets, grown one level per n.
  std::vector<std::vector<ProjectivePoint<double>>> pre(grid.nodes().size());
  for (size_t i = 0; i < grid.nodes().size(); ++i) pre[i] = {grid.nodes()[i].point};

  std::vector<std::pair<int, double>> rows;
  double norm = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    norm /= f.d2();
    double dev = 0.0;
    for (size_t i = 0; i < pre.size(); ++i) {
      std::vector<ProjectivePoint<double>> next;
      next.reserve(pre[i].size() * f.d2());
      for (const auto& p : pre[i]) {
        for (const auto& q : evaluate_forward(back, p).flatten()) next.push_back(q);
      }
      pre[i] = std::move(next);
      std::complex<double> s = 0;
      for (const auto& p : pre[i]) s += psi(p);
      dev += grid.nodes()[i].weight * std::abs(norm * s - limit);
    }
    rows.emplace_back(n, dev);
  }
  return rows;
}

}  // namespace holocorr

#endif  // HOLOCORR_MEASURE_HPP
