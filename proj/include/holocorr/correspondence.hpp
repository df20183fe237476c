// Copyright (c) 2026 the holocorr authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HOLOCORR_CORRESPONDENCE_HPP
#define HOLOCORR_CORRESPONDENCE_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "holocorr/bihomogeneous.hpp"
#include "holocorr/types.hpp"
#include "holocorr/univariate.hpp"

namespace holocorr {

/// A holomorphic self-correspondence of P^1, held as its graph form. The
/// forward image f(x) has d1 = ydeg points, the preimage f^{-1}(y) has
/// d2 = xdeg points, both counted with multiplicity.
template <typename T>
class Correspondence {
 public:
  explicit Correspondence(BihomogeneousPoly<T> graph)
      : graph_(normalized(graph)) {
    if (graph_.xdeg() < 1 || graph_.ydeg() < 1) {
      throw ValidationError(
          "Correspondence: graph must have positive degree in both factors");
    }
  }

  const BihomogeneousPoly<T>& graph() const { return graph_; }
  int d1() const { return graph_.ydeg(); }
  int d2() const { return graph_.xdeg(); }

 private:
  BihomogeneousPoly<T> graph_;
};

/// Solves graph(x, .) = 0 with projective completion, so the result always
/// carries exactly d1 points with multiplicity.
template <typename T>
RootSet<T> evaluate_forward(const Correspondence<T>& f,
                            const ProjectivePoint<T>& x) {
  UnivariatePoly<T> slice = y_slice(f.graph(), x);
  if (slice.sup_norm() <= T(1e-12) * f.graph().sup_norm()) {
    throw NumericError("evaluate_forward: fiber slice (invalid graph)");
  }
  return roots(slice, f.d1());
}

template <typename T>
Correspondence<T> adjoint(const Correspondence<T>& f) {
  return Correspondence<T>(BihomogeneousPoly<T>(f.graph().coeff.transpose().eval()));
}

template <typename T>
RootSet<T> evaluate_backward(const Correspondence<T>& f,
                             const ProjectivePoint<T>& y) {
  return evaluate_forward(adjoint(f), y);
}

/// Graph of f o g (g first), by eliminating the middle variable and
/// stripping fiber factors down to the product bidegree.
template <typename T>
Correspondence<T> compose(const Correspondence<T>& f, const Correspondence<T>& g,
                          StripReport* report = nullptr) {
  BihomogeneousPoly<T> raw = sylvester_resultant(g.graph(), f.graph());
  BihomogeneousPoly<T> stripped = strip_fiber_factors(
      raw, f.d2() * g.d2(), f.d1() * g.d1(), report);
  return Correspondence<T>(stripped);
}

/// Repeated composition with renormalization. The cap bounds d2^n.
template <typename T>
Correspondence<T> iterate(const Correspondence<T>& f, int n, long cap = 4096,
                          StripReport* report = nullptr) {
  if (n < 1) throw ValidationError("iterate: n must be positive");
  double growth = 1;
  for (int k = 0; k < n; ++k) {
    growth *= f.d2();
    if (growth > static_cast<double>(cap)) {
      throw BudgetError("iterate: d2^n exceeds cap " + std::to_string(cap) +
                        "; use orbit-tree sampling instead");
    }
  }
  Correspondence<T> acc = f;
  for (int k = 1; k < n; ++k) acc = compose(f, acc, report);
  return acc;
}

/// True when the graph carries no fiber component (stripping at its own
/// bidegree removes nothing).
template <typename T>
bool has_clean_graph(const Correspondence<T>& f) {
  StripReport rep;
  strip_fiber_factors(f.graph(), f.d2(), f.d1(), &rep);
  return !rep.any_removed();
}

// ---------------------------------------------------------------------------
// Orbit trees

/// Rewrites a branch derivative d(y in chart cy)/d(x in chart cx) into the
/// chart pair (tx, ty), using d(1/u)/du = -1/u^2 on each flipped side.
template <typename T>
Cx<T> convert_branch_derivative(Cx<T> d, const ProjectivePoint<T>& x,
                                const ProjectivePoint<T>& y, int cx, int cy,
                                int tx, int ty) {
  if (ty != cy) d *= -y.chart_coord(ty) * y.chart_coord(ty);
  if (tx != cx) d *= -x.chart_coord(cx) * x.chart_coord(cx);
  return d;
}

template <typename T>
struct BranchPath {
  std::vector<ProjectivePoint<T>> points;  // x0, f(x0) choice, ..., depth+1 entries
  std::vector<Cx<T>> edge_derivatives;      // canonical-chart dy/dx per step
  Cx<T> derivative = Cx<T>(1);              // chain-rule product
  bool derivative_ok = true;
  T weight = T(1);
};

template <typename T>
struct BranchTree {
  std::vector<BranchPath<T>> paths;
  bool sampled = false;
  int flagged_edges = 0;
};

/// Forward orbit tree of depth n. Full mode enumerates all d1^n branch
/// paths with weight 1; sampled mode draws k paths uniformly over branches
/// (multiplicity respected), each of weight d1^n / k. Edges within the
/// ramification tolerance carry derivative_ok = false.
template <typename T>
BranchTree<T> branch_tree(const Correspondence<T>& f,
                          const ProjectivePoint<T>& x0, int depth,
                          long sample_count = 0,
                          std::mt19937_64* gen = nullptr,
                          long full_cap = 1 << 20) {
  if (depth < 0) throw ValidationError("branch_tree: negative depth");
  BranchTree<T> out;
  const bool sampling = sample_count > 0;
  out.sampled = sampling;
  if (sampling && !gen) {
    throw ValidationError("branch_tree: sampled mode needs a generator");
  }
  if (!sampling) {
    double total = 1;
    for (int k = 0; k < depth; ++k) total *= f.d1();
    if (total > static_cast<double>(full_cap)) {
      throw BudgetError("branch_tree: full tree exceeds cap; use sampled mode");
    }
  }

  const long n_paths = sampling
                           ? sample_count
                           : [&] {
                               long t = 1;
                               for (int k = 0; k < depth; ++k) t *= f.d1();
                               return t;
                             }();
  T weight = T(1);
  if (sampling) {
    for (int k = 0; k < depth; ++k) weight *= T(f.d1());
    weight /= T(sample_count);
  }

  if (sampling) {
    for (long s = 0; s < n_paths; ++s) {
      BranchPath<T> path;
      path.points.push_back(x0);
      path.weight = weight;
      for (int step = 0; step < depth; ++step) {
        const auto& cur = path.points.back();
        auto children = evaluate_forward(f, cur).flatten();
        const int pick = std::min<int>(
            static_cast<int>(uniform01(*gen) * children.size()),
            static_cast<int>(children.size()) - 1);
        const auto& nxt = children[pick];
        bool ok = true;
        const Cx<T> d = branch_derivative(f.graph(), cur, nxt, ok);
        if (!ok) {
          path.derivative_ok = false;
          ++out.flagged_edges;
        }
        path.edge_derivatives.push_back(d);
        path.derivative *= d;
        path.points.push_back(nxt);
      }
      out.paths.push_back(std::move(path));
    }
    return out;
  }

  // Full enumeration, breadth-last: grow the path set step by step.
  out.paths.push_back({});
  out.paths.back().points.push_back(x0);
  for (int step = 0; step < depth; ++step) {
    std::vector<BranchPath<T>> next;
    next.reserve(out.paths.size() * f.d1());
    for (const auto& path : out.paths) {
      const auto& cur = path.points.back();
      auto children = evaluate_forward(f, cur).flatten();
      for (const auto& nxt : children) {
        BranchPath<T> ext = path;
        bool ok = true;
        const Cx<T> d = branch_derivative(f.graph(), cur, nxt, ok);
        if (!ok) {
          ext.derivative_ok = false;
          ++out.flagged_edges;
        }
        ext.edge_derivatives.push_back(d);
        ext.derivative *= d;
        ext.points.push_back(nxt);
        next.push_back(std::move(ext));
      }
    }
    out.paths = std::move(next);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Periodic points

template <typename T>
struct PeriodicPointRecord {
  ProjectivePoint<T> point;
  int period = 1;
  int multiplicity = 1;
  bool multiplier_defined = false;
  T multiplier_modulus = T(0);
};

/// Restricts the graph of f^n to the diagonal and solves the resulting
/// binary form; total multiplicity is d1^n + d2^n. The multiplier is the
/// branch derivative of f^n along the branch fixing the point, undefined at
/// ramification or when several branches fix the point ambiguously.
template <typename T>
std::vector<PeriodicPointRecord<T>> periodic_points(const Correspondence<T>& f,
                                                    int n, long cap = 4096) {
  if (n < 1) throw ValidationError("periodic_points: n must be positive");
  double count = 0;
  {
    double a = 1, b = 1;
    for (int k = 0; k < n; ++k) {
      a *= f.d1();
      b *= f.d2();
    }
    count = a + b;
  }
  if (count > static_cast<double>(cap)) {
    throw BudgetError("periodic_points: d1^n + d2^n exceeds cap");
  }
  const Correspondence<T> fn = n == 1 ? f : iterate(f, n, cap);
  const auto& c = fn.graph().coeff;
  const int m = fn.d2(), nn = fn.d1();

  // Diagonal restriction: substitute the y-pair by the x-pair.
  VectorCx<T> diag = VectorCx<T>::Zero(m + nn + 1);
  for (int i = 0; i <= m; ++i) {
    for (int j = 0; j <= nn; ++j) diag(i + j) += c(i, j);
  }
  UnivariatePoly<T> d{diag};
  if (d.sup_norm() <= T(1e-10) * fn.graph().sup_norm()) {
    throw NumericError("periodic_points: diagonal component in the graph");
  }
  RootSet<T> rs = roots(d, m + nn);

  std::vector<PeriodicPointRecord<T>> out;
  for (const auto& cl : rs.clusters) {
    PeriodicPointRecord<T> rec;
    rec.point = cl.point;
    rec.period = n;
    rec.multiplicity = cl.multiplicity;

    // Branches of f^n fixing the point; ambiguous or ramified -> undefined.
    const auto fiber = evaluate_forward(fn, cl.point);
    int fixing = 0;
    for (const auto& br : fiber.clusters) {
      if (br.point.chordal(cl.point) <= T(1e-5)) fixing += br.multiplicity;
    }
    if (fixing == 1) {
      bool ok = true;
      const Cx<T> mult = branch_derivative(fn.graph(), cl.point, cl.point, ok);
      if (ok) {
        rec.multiplier_defined = true;
        rec.multiplier_modulus = std::abs(mult);
      }
    }
    out.push_back(rec);
  }
  return out;
}

}  // namespace holocorr

#endif  // HOLOCORR_CORRESPONDENCE_HPP
