// Copyright (c) 2026 the holocorr authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HOLOCORR_PAIRING_HPP
#define HOLOCORR_PAIRING_HPP

#include <optional>
#include <string>
#include <vector>

#include "holocorr/correspondence.hpp"
#include "holocorr/fitting.hpp"
#include "holocorr/measure.hpp"
#include "holocorr/quadrature.hpp"
#include "holocorr/test_form.hpp"

namespace holocorr {

struct QuadratureSpec {
  int size = 96;
  int check_size = 48;
};

enum class PairingStrategy { Symbolic, Tree };

inline const char* strategy_name(PairingStrategy s) {
  return s == PairingStrategy::Symbolic ? "symbolic" : "tree";
}

struct GraphPairing {
  std::complex<double> value{0};
  double mc_stderr = 0.0;  // nonzero only for sampled tree paths
  int jittered_nodes = 0;
  int dropped_nodes = 0;
};

namespace detail {

// Pullback of the 2-form monomials along x -> (x, y(x)): every 1-form maps
// into the (dx, dxb) frame and the wedge is a 2x2 determinant. This is what
// annihilates the (2,0)/(0,2) slots on holomorphic branches.
inline std::complex<double> branch_integrand(const FormComponents& f,
                                             std::complex<double> yp) {
  using Cxd = std::complex<double>;
  const std::pair<Cxd, Cxd> dx{1.0, 0.0}, dy{yp, 0.0};
  const std::pair<Cxd, Cxd> dxb{0.0, 1.0}, dyb{0.0, std::conj(yp)};
  auto wedge = [](const std::pair<Cxd, Cxd>& u, const std::pair<Cxd, Cxd>& v) {
    return u.first * v.second - u.second * v.first;
  };
  return f.a * wedge(dx, dxb) + f.b * wedge(dy, dyb) + f.c * wedge(dx, dyb) +
         f.e * wedge(dy, dxb) + f.p * wedge(dx, dy) + f.q * wedge(dxb, dyb);
}

inline ProjectivePoint<double> jitter_point(const ProjectivePoint<double>& p,
                                            int attempt) {
  const double eps = 2e-7 * attempt;
  const double th = 2.39996322972865332 * attempt;  // golden angle steps
  const std::complex<double> d(std::cos(th), std::sin(th));
  return ProjectivePoint<double>(p.h0() + eps * d, p.h1() - eps * std::conj(d));
}

struct NodeBranches {
  std::vector<ProjectivePoint<double>> y;
  std::vector<std::complex<double>> dy;  // canonical-chart branch derivative
  std::vector<double> weight;            // per-branch weight (1 unless sampled)
  bool ok = true;
  bool sampled = false;
};

}  // namespace detail

namespace detail {

// One side of the graph-covering identity: integrate over the chosen factor
// with the other coordinate supplied by forward branches of `step` iterated
// n times. with_derivatives controls whether branch derivatives are needed
// (they are not when only derivative-free components survive the pullback).
struct SideResult {
  std::complex<double> sum{0};
  double variance = 0;
  int jittered = 0;
  int dropped = 0;
};

template <typename Integrand>
SideResult integrate_side(const Correspondence<double>& step, int n,
                          const Correspondence<double>* step_iterate,
                          PairingStrategy strategy, long tree_budget,
                          const SphereGrid& grid, unsigned long long seed,
                          bool with_derivatives, double branch_total,
                          Integrand&& integrand) {
  SideResult out;
  const bool full_tree = strategy == PairingStrategy::Tree &&
                         branch_total <= static_cast<double>(tree_budget);

  auto branches_at = [&](const ProjectivePoint<double>& base,
                         unsigned long long node_seed, NodeBranches& br) {
    br = NodeBranches{};
    if (strategy == PairingStrategy::Symbolic) {
      const auto rs = evaluate_forward(*step_iterate, base);
      for (const auto& y : rs.flatten()) {
        std::complex<double> d = 0;
        if (with_derivatives) {
          bool ok = true;
          d = branch_derivative(step_iterate->graph(), base, y, ok);
          if (!ok) {
            br.ok = false;
            return;
          }
        }
        br.y.push_back(y);
        br.dy.push_back(d);
        br.weight.push_back(1.0);
      }
      return;
    }
    std::mt19937_64 gen(node_seed);
    auto tree = full_tree ? branch_tree(step, base, n)
                          : branch_tree(step, base, n, tree_budget, &gen);
    br.sampled = !full_tree;
    for (const auto& path : tree.paths) {
      if (with_derivatives && !path.derivative_ok) {
        br.ok = false;
        return;
      }
      br.y.push_back(path.points.back());
      br.dy.push_back(path.derivative);
      br.weight.push_back(full_tree ? 1.0 : path.weight);
    }
  };

  size_t node_index = 0;
  for (const auto& node : grid.nodes()) {
    ++node_index;
    ProjectivePoint<double> base = node.point;
    NodeBranches br;
    bool usable = false;
    for (int attempt = 0; attempt < 6; ++attempt) {
      branches_at(base, seed * 0x9e3779b97f4a7c15ULL + node_index, br);
      if (br.ok) {
        usable = true;
        break;
      }
      base = jitter_point(node.point, attempt + 1);
      ++out.jittered;
    }
    if (!usable) {
      ++out.dropped;
      continue;
    }
    std::complex<double> node_sum = 0;
    std::vector<std::complex<double>> contribs;
    for (size_t j = 0; j < br.y.size(); ++j) {
      const std::complex<double> contrib = integrand(base, br.y[j], br.dy[j]);
      node_sum += br.weight[j] * contrib;
      if (br.sampled) contribs.push_back(contrib);
    }
    const double factor = node.weight * node.inv_density;
    out.sum += factor * node_sum;
    if (br.sampled && contribs.size() > 1) {
      std::complex<double> m = 0;
      for (const auto& c : contribs) m += c;
      m /= static_cast<double>(contribs.size());
      double s2 = 0;
      for (const auto& c : contribs) s2 += std::norm(c - m);
      s2 /= (contribs.size() - 1.0);
      const double k = static_cast<double>(contribs.size());
      out.variance += factor * factor * branch_total * branch_total * s2 / k;
    }
  }
  return out;
}

}  // namespace detail

/// <d2^-n [Gamma_n], beta> through the graph-covering identity, component by
/// component over the projection that pulls it back without singular
/// derivative factors: a, c, e (and the annihilated p, q) integrate over the
/// first factor with forward branches; the b component integrates over the
/// second factor with backward branches, where its pullback coefficient is
/// exactly b. The symbolic strategy solves the iterate's fiber polynomials;
/// the tree strategy walks branch paths of f (full enumeration within the
/// budget, else uniform samples). Nodes within the ramification tolerance
/// are re-jittered.
inline GraphPairing pair_graph_current(
    const Correspondence<double>& f, int n, const TestForm& beta,
    PairingStrategy strategy, long tree_budget = 4096, int grid_size = 96,
    unsigned long long seed = 1,
    const Correspondence<double>* iterate_hint = nullptr) {
  if (n < 1) throw ValidationError("pair_graph_current: n must be positive");
  double d1n = 1, d2n = 1;
  for (int k = 0; k < n; ++k) {
    d1n *= f.d1();
    d2n *= f.d2();
  }

  std::optional<Correspondence<double>> fn_storage;
  const Correspondence<double>* fn = nullptr;
  if (strategy == PairingStrategy::Symbolic) {
    if (iterate_hint) {
      fn = iterate_hint;
    } else {
      fn_storage = iterate(f, n);
      fn = &*fn_storage;
    }
  }
  const Correspondence<double> f_adj = adjoint(f);

  const SphereGrid grid(grid_size);

  // First factor: everything except b. Derivatives are only required when
  // some branch actually carries c/e/p/q content.
  bool needs_derivatives = false;
  {
    std::mt19937_64 probe_gen(seed ^ 0x5bf0a8b1ULL);
    for (int k = 0; k < 32 && !needs_derivatives; ++k) {
      const auto x = random_sphere_point(probe_gen);
      const auto y = random_sphere_point(probe_gen);
      const auto c = beta.components(x, y, x.canonical_chart(), y.canonical_chart());
      needs_derivatives = std::abs(c.c) + std::abs(c.e) + std::abs(c.p) + std::abs(c.q) > 0;
    }
  }
  const detail::SideResult first = detail::integrate_side(
      f, n, fn ? &*fn : nullptr, strategy, tree_budget, grid, seed,
      needs_derivatives, d1n,
      [&](const ProjectivePoint<double>& x, const ProjectivePoint<double>& y,
          std::complex<double> yp) {
        FormComponents comp =
            beta.components(x, y, x.canonical_chart(), y.canonical_chart());
        comp.b = 0;
        return detail::branch_integrand(comp, yp);
      });

  // Second factor: the b component, pulled back along y -> (x_j(y), y) with
  // unit coefficient. Derivative-free, so the backward cascade enumerates the
  // preimages exactly under either strategy; solving the adjoint iterate's
  // degree-d2^n fibers instead would dominate the whole pairing.
  const detail::SideResult second = detail::integrate_side(
      f_adj, n, nullptr, PairingStrategy::Tree, tree_budget, grid,
      seed ^ 0xd1b54a32d192ed03ULL, false, d2n,
      [&](const ProjectivePoint<double>& y, const ProjectivePoint<double>& x,
          std::complex<double>) {
        return beta.components(x, y, x.canonical_chart(), y.canonical_chart()).b;
      });

  GraphPairing result;
  result.value = (first.sum + second.sum) / d2n;
  result.mc_stderr = std::sqrt(first.variance + second.variance) / d2n;
  result.jittered_nodes = first.jittered + second.jittered;
  result.dropped_nodes = first.dropped + second.dropped;
  return result;
}

// ---------------------------------------------------------------------------
// Limit currents

/// pi1^*(mu_plus) plus optionally pi2^*(mu_minus), the equal-degree case.
struct LimitCurrent {
  WeightedPointCloud mu_plus;
  std::optional<WeightedPointCloud> mu_minus;
};

/// The limit current of the normalized graphs: with d1 < d2 the first-factor
/// pullback of the backward equilibrium estimate; with d1 = d2 both factors.
inline LimitCurrent make_limit_current(const Correspondence<double>& f, int depth,
                                       std::mt19937_64& gen, long sample_cap = 4096) {
  if (f.d1() > f.d2()) {
    throw ValidationError(
        "make_limit_current: needs d1 <= d2; pair against the adjoint instead");
  }
  double full = 1;
  for (int k = 0; k < depth; ++k) full *= f.d2();
  LimitCurrent out;
  const auto seed_plus = draw_generic_seed(gen);
  out.mu_plus = full <= static_cast<double>(sample_cap)
                    ? equilibrium_measure(f, seed_plus, depth)
                    : equilibrium_measure(f, seed_plus, depth, sample_cap,
                                          OrbitDirection::Backward, &gen);
  if (f.d1() == f.d2()) {
    const auto seed_minus = draw_generic_seed(gen);
    double fullm = 1;
    for (int k = 0; k < depth; ++k) fullm *= f.d1();
    out.mu_minus = fullm <= static_cast<double>(sample_cap)
                       ? equilibrium_measure(f, seed_minus, depth, 0,
                                             OrbitDirection::Forward)
                       : equilibrium_measure(f, seed_minus, depth, sample_cap,
                                             OrbitDirection::Forward, &gen);
  }
  return out;
}

/// <pi1^* nu, beta> = sum_atoms w * (fiber integral over y of the b
/// component); symmetrically the a component for pi2^*.
inline std::complex<double> pair_limit_current(const LimitCurrent& limit,
                                               const TestForm& beta,
                                               int grid_size = 96) {
  const SphereGrid grid(grid_size);
  std::complex<double> total = 0;
  for (size_t i = 0; i < limit.mu_plus.atoms.size(); ++i) {
    const auto& x = limit.mu_plus.atoms[i];
    const int cx = x.canonical_chart();
    std::complex<double> fiber = 0;
    for (const auto& node : grid.nodes()) {
      const int cy = node.point.canonical_chart();
      fiber += node.weight * node.inv_density *
               beta.components(x, node.point, cx, cy).b;
    }
    total += limit.mu_plus.weights[i] * fiber;
  }
  if (limit.mu_minus) {
    for (size_t i = 0; i < limit.mu_minus->atoms.size(); ++i) {
      const auto& y = limit.mu_minus->atoms[i];
      const int cy = y.canonical_chart();
      std::complex<double> fiber = 0;
      for (const auto& node : grid.nodes()) {
        const int cx = node.point.canonical_chart();
        fiber += node.weight * node.inv_density *
                 beta.components(node.point, y, cx, cy).a;
      }
      total += limit.mu_minus->weights[i] * fiber;
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Convergence experiment

struct PairingRow {
  int n = 0;
  std::complex<double> pairing{0};
  std::complex<double> limit{0};
  double abs_error = 0;
  double noise = 0;  // two-grid Richardson difference
};

struct PairingReport {
  std::string form_id;
  std::vector<PairingRow> rows;
  double fitted_rate = 0;
  double fit_quality = 0;
  bool rate_indeterminate = true;
  double noise_floor = 0;
  double mass_bound = 0;  // max_n <d2^-n [Gamma_n], Omega>, for the norm check
};

/// Pairs the normalized graph currents against beta for n = 1..n_max,
/// tabulates errors against the limit current, and fits the exponential
/// rate over rows that clear 10x the two-grid noise estimate.
inline PairingReport convergence_experiment(
    const Correspondence<double>& f, const TestForm& beta, int n_max,
    PairingStrategy strategy, QuadratureSpec quad = {}, long tree_budget = 4096,
    unsigned long long seed = 20260810, int limit_depth = 12) {
  if (n_max < 1) throw ValidationError("convergence_experiment: n_max >= 1");
  std::mt19937_64 gen(seed);
  const LimitCurrent limit = make_limit_current(f, limit_depth, gen);
  const std::complex<double> limit_value = pair_limit_current(limit, beta, quad.size);

  PairingReport report;
  report.form_id = beta.id();
  std::vector<Correspondence<double>> iterates;
  if (strategy == PairingStrategy::Symbolic) {
    iterates.push_back(f);
    for (int k = 2; k <= n_max; ++k) iterates.push_back(compose(f, iterates.back()));
  }
  for (int n = 1; n <= n_max; ++n) {
    const Correspondence<double>* hint =
        strategy == PairingStrategy::Symbolic ? &iterates[n - 1] : nullptr;
    const GraphPairing fine = pair_graph_current(f, n, beta, strategy, tree_budget,
                                                 quad.size, seed, hint);
    const GraphPairing coarse = pair_graph_current(
        f, n, beta, strategy, tree_budget, quad.check_size, seed + 1, hint);
    PairingRow row;
    row.n = n;
    row.pairing = fine.value;
    row.limit = limit_value;
    row.abs_error = std::abs(fine.value - limit_value);
    row.noise = std::abs(fine.value - coarse.value) + fine.mc_stderr;
    report.rows.push_back(row);
    report.noise_floor = std::max(report.noise_floor, row.noise);
  }
  // Rows below their own two-grid noise estimate are quadrature artifacts,
  // not dynamics; the fit skips them.
  std::vector<std::pair<int, double>> err_rows;
  for (const auto& r : report.rows) {
    if (r.abs_error > 10.0 * r.noise) err_rows.emplace_back(r.n, r.abs_error);
  }
  const RateFit fit = fit_exponential_rate(err_rows, 0.0);
  report.fitted_rate = fit.rate;
  report.fit_quality = fit.r2;
  report.rate_indeterminate = fit.indeterminate;
  return report;
}

}  // namespace holocorr

#endif  // HOLOCORR_PAIRING_HPP
