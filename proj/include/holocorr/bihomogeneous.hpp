// Copyright (c) 2026 the holocorr authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HOLOCORR_BIHOMOGENEOUS_HPP
#define HOLOCORR_BIHOMOGENEOUS_HPP

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/LU>

#include "holocorr/types.hpp"
#include "holocorr/univariate.hpp"

namespace holocorr {

/// Bidegree-(m, n) form on P^1 x P^1. coeff(i, j) multiplies
/// x0^(m-i) x1^i y0^(n-j) y1^j, so in the affine chart (x, y) = (x1/x0, y1/y0)
/// the matrix is read as sum coeff(i, j) x^i y^j. The x-degree m is the
/// backward degree d2, the y-degree n is the forward degree d1.
template <typename T>
struct BihomogeneousPoly {
  MatrixCx<T> coeff;

  BihomogeneousPoly() : coeff(MatrixCx<T>::Zero(1, 1)) {}
  explicit BihomogeneousPoly(MatrixCx<T> c) : coeff(std::move(c)) {}
  template <typename Derived>
  explicit BihomogeneousPoly(const Eigen::MatrixBase<Derived>& c) : coeff(c) {}

  int xdeg() const { return static_cast<int>(coeff.rows()) - 1; }
  int ydeg() const { return static_cast<int>(coeff.cols()) - 1; }
  T sup_norm() const { return coeff.cwiseAbs().maxCoeff(); }
};

/// Scales so the largest-modulus coefficient becomes exactly 1 (ties broken
/// by lowest (i, j)); canonical representative of the projective class.
template <typename T>
BihomogeneousPoly<T> normalized(const BihomogeneousPoly<T>& p) {
  const auto& c = p.coeff;
  int bi = 0, bj = 0;
  T best = T(-1);
  for (int i = 0; i < c.rows(); ++i) {
    for (int j = 0; j < c.cols(); ++j) {
      const T a = std::abs(c(i, j));
      if (a > best * (T(1) + T(1e-14))) {
        best = a;
        bi = i;
        bj = j;
      }
    }
  }
  if (best <= T(0)) throw NumericError("normalized: zero polynomial");
  BihomogeneousPoly<T> out;
  out.coeff = c / c(bi, bj);
  return out;
}

/// Coefficients of the affine form in the chart pair (cx, cy): flipping a
/// chart reverses the corresponding index of the homogeneous array.
template <typename T>
MatrixCx<T> chart_coeffs(const BihomogeneousPoly<T>& p, int cx, int cy) {
  MatrixCx<T> m = p.coeff;
  if (cx == 1) m = m.colwise().reverse().eval();
  if (cy == 1) m = m.rowwise().reverse().eval();
  return m;
}

/// Bivariate Horner in the affine coordinates of a fixed chart pair.
template <typename T, typename Derived>
Cx<T> eval_affine(const Eigen::MatrixBase<Derived>& m, Cx<T> u, Cx<T> v) {
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  Cx<T> acc(0);
  for (int i = rows - 1; i >= 0; --i) {
    Cx<T> row = m(i, cols - 1);
    for (int j = cols - 2; j >= 0; --j) row = row * v + m(i, j);
    acc = acc * u + row;
  }
  return acc;
}

template <typename T>
MatrixCx<T> d_du(const MatrixCx<T>& m) {
  if (m.rows() == 1) return MatrixCx<T>::Zero(1, m.cols());
  MatrixCx<T> out(m.rows() - 1, m.cols());
  for (int i = 1; i < m.rows(); ++i) out.row(i - 1) = T(i) * m.row(i);
  return out;
}

template <typename T>
MatrixCx<T> d_dv(const MatrixCx<T>& m) {
  if (m.cols() == 1) return MatrixCx<T>::Zero(m.rows(), 1);
  MatrixCx<T> out(m.rows(), m.cols() - 1);
  for (int j = 1; j < m.cols(); ++j) out.col(j - 1) = T(j) * m.col(j);
  return out;
}

/// Exact coefficient-wise partials (dP/dx, dP/dy) of the affine form in the
/// given chart pair.
template <typename T>
std::pair<MatrixCx<T>, MatrixCx<T>> derivative_coefficients(
    const BihomogeneousPoly<T>& p, int cx, int cy) {
  const MatrixCx<T> m = chart_coeffs(p, cx, cy);
  return {d_du(m), d_dv(m)};
}

/// The univariate polynomial y -> P(x, y) in the chart pair
/// (canonical chart of x, cy). Coefficients ascend in the y-power.
template <typename T>
UnivariatePoly<T> y_slice(const BihomogeneousPoly<T>& p,
                          const ProjectivePoint<T>& x, int cy = 0) {
  const int cx = x.canonical_chart();
  const MatrixCx<T> m = chart_coeffs(p, cx, cy);
  const Cx<T> u = x.chart_coord(cx);
  VectorCx<T> b(m.cols());
  for (int j = 0; j < m.cols(); ++j) {
    Cx<T> acc = m(m.rows() - 1, j);
    for (int i = static_cast<int>(m.rows()) - 2; i >= 0; --i) acc = acc * u + m(i, j);
    b(j) = acc;
  }
  return UnivariatePoly<T>(b);
}

/// dy/dx of the local solution branch of P(x, y) = 0 through (x, y), in the
/// chart coordinates (cx, cy). ok turns false within ramification tolerance.
template <typename T>
Cx<T> branch_derivative(const BihomogeneousPoly<T>& p,
                        const ProjectivePoint<T>& x,
                        const ProjectivePoint<T>& y, int cx, int cy, bool& ok,
                        T ram_tol = T(1e-8)) {
  const MatrixCx<T> m = chart_coeffs(p, cx, cy);
  const Cx<T> u = x.chart_coord(cx);
  const Cx<T> v = y.chart_coord(cy);
  const Cx<T> pu = eval_affine<T>(d_du(m), u, v);
  const Cx<T> pv = eval_affine<T>(d_dv(m), u, v);
  const T scale = p.sup_norm();
  if (std::abs(pv) <= ram_tol * scale) {
    ok = false;
    return Cx<T>(0);
  }
  ok = true;
  return -pu / pv;
}

/// Same in the canonical charts of the two points.
template <typename T>
Cx<T> branch_derivative(const BihomogeneousPoly<T>& p,
                        const ProjectivePoint<T>& x,
                        const ProjectivePoint<T>& y, bool& ok,
                        T ram_tol = T(1e-8)) {
  return branch_derivative(p, x, y, x.canonical_chart(), y.canonical_chart(),
                           ok, ram_tol);
}

namespace detail {

// Formal t-degree: index of the last column (or row) that is not
// numerically zero relative to the array sup-norm.
template <typename T>
int last_live_col(const MatrixCx<T>& m, T rel_tol) {
  const T cut = m.cwiseAbs().maxCoeff() * rel_tol;
  for (int j = static_cast<int>(m.cols()) - 1; j >= 0; --j) {
    if (m.col(j).cwiseAbs().maxCoeff() > cut) return j;
  }
  return -1;
}

template <typename T>
int last_live_row(const MatrixCx<T>& m, T rel_tol) {
  const T cut = m.cwiseAbs().maxCoeff() * rel_tol;
  for (int i = static_cast<int>(m.rows()) - 1; i >= 0; --i) {
    if (m.row(i).cwiseAbs().maxCoeff() > cut) return i;
  }
  return -1;
}

}  // namespace detail

/// Resultant in t of A(x, t) and B(t, z), by determinant evaluation on
/// roots-of-unity product grids followed by inverse-DFT interpolation.
/// A: rows are x-powers, cols t-powers. B: rows t-powers, cols z-powers.
/// The result (rows x-powers, cols z-powers) is sup-normalized.
template <typename T>
BihomogeneousPoly<T> sylvester_resultant(const BihomogeneousPoly<T>& a,
                                         const BihomogeneousPoly<T>& b) {
  const T rel = T(1e-13);
  if (a.sup_norm() == T(0) || b.sup_norm() == T(0)) {
    throw ValidationError("sylvester_resultant: zero polynomial input");
  }
  const int da_declared = a.ydeg();
  const int db_declared = b.xdeg();
  const bool a_lead_dead =
      detail::last_live_col(a.coeff, rel) < da_declared;
  const bool b_lead_dead = detail::last_live_row(b.coeff, rel) < db_declared;
  if (a_lead_dead && b_lead_dead) {
    throw NumericError("sylvester_resultant: ill-posed elimination");
  }
  const int da = detail::last_live_col(a.coeff, rel);
  const int db = detail::last_live_row(b.coeff, rel);
  if (da < 1 || db < 1) {
    throw ValidationError("sylvester_resultant: t-degree must be at least 1");
  }
  const MatrixCx<T> ac = a.coeff.leftCols(da + 1);
  const MatrixCx<T> bc = b.coeff.topRows(db + 1);
  const int mx = a.xdeg() * db;  // x-degree bound of the resultant
  const int nz = b.ydeg() * da;  // z-degree bound
  const int gm = mx + 1, gn = nz + 1;

  MatrixCx<T> values(gm, gn);
  const int sdim = da + db;
  MatrixCx<T> s(sdim, sdim);
  for (int k = 0; k < gm; ++k) {
    const T thx = T(2) * T(M_PI) * T(k) / T(gm);
    const Cx<T> xk(std::cos(thx), std::sin(thx));
    VectorCx<T> pa(da + 1);
    for (int t = 0; t <= da; ++t) {
      Cx<T> acc = ac(ac.rows() - 1, t);
      for (int i = static_cast<int>(ac.rows()) - 2; i >= 0; --i) acc = acc * xk + ac(i, t);
      pa(t) = acc;
    }
    for (int l = 0; l < gn; ++l) {
      const T thz = T(2) * T(M_PI) * T(l) / T(gn);
      const Cx<T> zl(std::cos(thz), std::sin(thz));
      VectorCx<T> pb(db + 1);
      for (int t = 0; t <= db; ++t) {
        Cx<T> acc = bc(t, bc.cols() - 1);
        for (int j = static_cast<int>(bc.cols()) - 2; j >= 0; --j) acc = acc * zl + bc(t, j);
        pb(t) = acc;
      }
      s.setZero();
      for (int r = 0; r < db; ++r) {
        for (int c = 0; c <= da; ++c) s(r, r + c) = pa(da - c);
      }
      for (int r = 0; r < da; ++r) {
        for (int c = 0; c <= db; ++c) s(db + r, r + c) = pb(db - c);
      }
      values(k, l) = Eigen::PartialPivLU<MatrixCx<T>>(s).determinant();
    }
  }

  // Inverse 2-D DFT; the Vandermonde system at these nodes is unitary.
  MatrixCx<T> fx(gm, gm), fz(gn, gn);
  for (int k = 0; k < gm; ++k) {
    for (int i = 0; i < gm; ++i) {
      const T th = T(-2) * T(M_PI) * T(k) * T(i) / T(gm);
      fx(i, k) = Cx<T>(std::cos(th), std::sin(th));
    }
  }
  for (int l = 0; l < gn; ++l) {
    for (int j = 0; j < gn; ++j) {
      const T th = T(-2) * T(M_PI) * T(l) * T(j) / T(gn);
      fz(l, j) = Cx<T>(std::cos(th), std::sin(th));
    }
  }
  MatrixCx<T> c = (fx * values * fz) / (T(gm) * T(gn));
  if (c.cwiseAbs().maxCoeff() == T(0)) {
    throw NumericError("sylvester_resultant: identically zero resultant");
  }
  return normalized(BihomogeneousPoly<T>(c));
}

struct StripReport {
  int x_at_zero = 0, x_at_infinity = 0;       // stripped powers of x1, x0
  int y_at_zero = 0, y_at_infinity = 0;       // stripped powers of y1, y0
  std::vector<std::complex<double>> x_fibers;  // affine fiber roots removed
  std::vector<std::complex<double>> y_fibers;
  bool warning = false;
  std::string message;

  bool any_removed() const {
    return x_at_zero || x_at_infinity || y_at_zero || y_at_infinity ||
           !x_fibers.empty() || !y_fibers.empty();
  }
};

namespace detail {

template <typename T>
void divide_columns_by_linear(MatrixCx<T>& m, Cx<T> c) {
  MatrixCx<T> out(m.rows() - 1, m.cols());
  for (int j = 0; j < m.cols(); ++j) {
    const int d = static_cast<int>(m.rows()) - 1;
    VectorCx<T> q(d);
    q(d - 1) = m(d, j);
    for (int k = d - 1; k >= 1; --k) q(k - 1) = m(k, j) + c * q(k);
    out.col(j) = q;
  }
  m = out;
}

// Affine roots c with P(c, y) == 0 for all y: common roots of the columns
// of m viewed as polynomials in x.
template <typename T>
std::vector<Cx<T>> common_column_roots(const MatrixCx<T>& m, T rel_tol) {
  std::vector<Cx<T>> found;
  if (m.rows() < 2) return found;
  int ref = 0;
  T best = T(-1);
  for (int j = 0; j < m.cols(); ++j) {
    const T s = m.col(j).cwiseAbs().maxCoeff();
    if (s > best) {
      best = s;
      ref = j;
    }
  }
  const UnivariatePoly<T> refpoly = trimmed(UnivariatePoly<T>{VectorCx<T>(m.col(ref))});
  if (refpoly.degree() < 1) return found;
  RootSet<T> rs;
  try {
    rs = roots(refpoly, refpoly.degree());
  } catch (const std::exception&) {
    return found;
  }
  for (const auto& cl : rs.clusters) {
    if (cl.point.is_infinity()) continue;
    const Cx<T> c = cl.point.affine();
    bool common = true;
    for (int j = 0; j < m.cols() && common; ++j) {
      UnivariatePoly<T> col{VectorCx<T>(m.col(j))};
      if (col.sup_norm() <= m.cwiseAbs().maxCoeff() * rel_tol) continue;
      if (poly_residual(col, c) > rel_tol * T(10)) common = false;
    }
    if (common) found.push_back(c);
  }
  return found;
}

}  // namespace detail

/// Removes factors that are binary forms in one variable pair only: zero
/// coefficient rows/columns (fibers over 0 and infinity) and common affine
/// roots of the rows/columns (fibers over finite points), deflated by
/// synthetic division. Tolerance is relative, 1e-9 by default.
template <typename T>
BihomogeneousPoly<T> strip_fiber_factors(const BihomogeneousPoly<T>& p,
                                         int expected_xdeg, int expected_ydeg,
                                         StripReport* report = nullptr,
                                         T rel_tol = T(1e-9)) {
  StripReport local;
  StripReport& rep = report ? *report : local;
  MatrixCx<T> m = normalized(p).coeff;

  auto live_rows = [&](const MatrixCx<T>& mm, int from_top) {
    const T cut = mm.cwiseAbs().maxCoeff() * rel_tol;
    if (from_top) {
      int r = static_cast<int>(mm.rows()) - 1;
      while (r > 0 && mm.row(r).cwiseAbs().maxCoeff() <= cut) --r;
      return r;
    }
    int r = 0;
    while (r < mm.rows() - 1 && mm.row(r).cwiseAbs().maxCoeff() <= cut) ++r;
    return r;
  };

  for (;;) {
    bool changed = false;
    // x0^a: dead top rows (x-degree deficit). x1^a: dead bottom rows.
    int top = live_rows(m, 1);
    if (top < m.rows() - 1) {
      rep.x_at_infinity += static_cast<int>(m.rows()) - 1 - top;
      m = m.topRows(top + 1).eval();
      changed = true;
    }
    int bottom = live_rows(m, 0);
    if (bottom > 0 && m.rows() > 1) {
      rep.x_at_zero += bottom;
      m = m.bottomRows(m.rows() - bottom).eval();
      changed = true;
    }
    MatrixCx<T> mt = m.transpose();
    int topc = live_rows(mt, 1);
    if (topc < mt.rows() - 1) {
      rep.y_at_infinity += static_cast<int>(mt.rows()) - 1 - topc;
      mt = mt.topRows(topc + 1).eval();
      changed = true;
    }
    int bottomc = live_rows(mt, 0);
    if (bottomc > 0 && mt.rows() > 1) {
      rep.y_at_zero += bottomc;
      mt = mt.bottomRows(mt.rows() - bottomc).eval();
      changed = true;
    }
    m = mt.transpose();

    if (m.rows() > 1 && static_cast<int>(m.rows()) - 1 > expected_xdeg) {
      auto cx = detail::common_column_roots(m, rel_tol);
      if (!cx.empty()) {
        detail::divide_columns_by_linear(m, cx.front());
        rep.x_fibers.push_back(cx.front());
        changed = true;
      }
    }
    if (m.cols() > 1 && static_cast<int>(m.cols()) - 1 > expected_ydeg) {
      MatrixCx<T> mt2 = m.transpose();
      auto cy = detail::common_column_roots(mt2, rel_tol);
      if (!cy.empty()) {
        detail::divide_columns_by_linear(mt2, cy.front());
        m = mt2.transpose();
        rep.y_fibers.push_back(cy.front());
        changed = true;
      }
    }
    if (!changed) break;
  }

  BihomogeneousPoly<T> out = normalized(BihomogeneousPoly<T>(m));
  if (out.xdeg() > expected_xdeg || out.ydeg() > expected_ydeg) {
    rep.warning = true;
    rep.message = "unstripped extraneous factor: bidegree (" +
                  std::to_string(out.xdeg()) + "," + std::to_string(out.ydeg()) +
                  ") exceeds expected (" + std::to_string(expected_xdeg) + "," +
                  std::to_string(expected_ydeg) + ")";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text format: header "bidegree m n", then one line per monomial
// "i j re im". Values round-trip exactly at 17 significant digits.

inline std::string format_g17(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

template <typename T>
void write_poly_text(std::ostream& os, const BihomogeneousPoly<T>& p,
                     const std::string& name = "") {
  if (!name.empty()) os << "name " << name << "\n";
  os << "bidegree " << p.xdeg() << " " << p.ydeg() << "\n";
  for (int i = 0; i <= p.xdeg(); ++i) {
    for (int j = 0; j <= p.ydeg(); ++j) {
      const auto c = p.coeff(i, j);
      if (c == Cx<T>(0)) continue;
      os << i << " " << j << " " << format_g17(static_cast<double>(c.real()))
         << " " << format_g17(static_cast<double>(c.imag())) << "\n";
    }
  }
}

struct PolyTextFile {
  BihomogeneousPoly<double> poly;
  std::string name;
};

inline PolyTextFile read_poly_text(std::istream& is) {
  PolyTextFile out;
  std::string line;
  int m = -1, n = -1;
  MatrixCx<double> c;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head == "name") {
      std::getline(ls, out.name);
      if (!out.name.empty() && out.name[0] == ' ') out.name.erase(0, 1);
      continue;
    }
    if (head == "bidegree") {
      if (!(ls >> m >> n) || m < 0 || n < 0) {
        throw ValidationError("poly text: malformed bidegree header");
      }
      c = MatrixCx<double>::Zero(m + 1, n + 1);
      continue;
    }
    if (m < 0) throw ValidationError("poly text: bidegree header missing");
    int i = -1, j = -1;
    double re = 0, im = 0;
    std::istringstream entry(line);
    if (!(entry >> i >> j >> re >> im) || i < 0 || i > m || j < 0 || j > n) {
      throw ValidationError("poly text: malformed monomial line: " + line);
    }
    c(i, j) = std::complex<double>(re, im);
  }
  if (m < 0) throw ValidationError("poly text: empty input");
  out.poly = BihomogeneousPoly<double>(c);
  return out;
}

}  // namespace holocorr

#endif  // HOLOCORR_BIHOMOGENEOUS_HPP
