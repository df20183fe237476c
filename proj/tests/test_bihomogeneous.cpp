// Copyright (c) 2026 the holocorr authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "holocorr/bihomogeneous.hpp"

using namespace holocorr;
using Cxd = std::complex<double>;
using Poly2 = BihomogeneousPoly<double>;

namespace {

Poly2 from_entries(int m, int n, std::initializer_list<std::tuple<int, int, Cxd>> e) {
  MatrixCx<double> c = MatrixCx<double>::Zero(m + 1, n + 1);
  for (const auto& [i, j, v] : e) c(i, j) = v;
  return Poly2(c);
}

// |<A,B>| / (|A||B|) over coefficient arrays padded to a common shape.
double correlation(const Poly2& a, const Poly2& b) {
  const int r = std::max(a.coeff.rows(), b.coeff.rows());
  const int c = std::max(a.coeff.cols(), b.coeff.cols());
  MatrixCx<double> pa = MatrixCx<double>::Zero(r, c), pb = pa;
  pa.topLeftCorner(a.coeff.rows(), a.coeff.cols()) = a.coeff;
  pb.topLeftCorner(b.coeff.rows(), b.coeff.cols()) = b.coeff;
  const double na = pa.norm(), nb = pb.norm();
  return std::abs((pa.conjugate().cwiseProduct(pb)).sum()) / (na * nb);
}

Poly2 random_poly(int m, int n, std::mt19937_64& gen) {
  MatrixCx<double> c(m + 1, n + 1);
  for (int i = 0; i <= m; ++i) {
    for (int j = 0; j <= n; ++j) c(i, j) = uniform_unit_disk(gen);
  }
  return normalized(Poly2(c));
}

}  // namespace

TEST_CASE("resultant of t - x^2 and z - t^2 is z - x^4") {
  // A(x,t) = t - x^2, B(t,z) = z - t^2
  auto a = from_entries(2, 1, {{0, 1, 1.0}, {2, 0, -1.0}});
  auto b = from_entries(2, 1, {{0, 1, 1.0}, {2, 0, -1.0}});
  auto r = sylvester_resultant(a, b);
  auto expected = from_entries(4, 1, {{0, 1, 1.0}, {4, 0, -1.0}});
  CHECK(r.xdeg() == 4);
  CHECK(r.ydeg() == 1);
  CHECK(correlation(r, expected) > 1.0 - 1e-12);
}

TEST_CASE("identity composed with identity") {
  auto id = from_entries(1, 1, {{0, 1, 1.0}, {1, 0, -1.0}});
  auto r = sylvester_resultant(id, id);
  CHECK(r.xdeg() == 1);
  CHECK(r.ydeg() == 1);
  CHECK(correlation(r, id) > 1.0 - 1e-12);
}

TEST_CASE("resultant of t^2 - x and z - t^2 is the multiplicity-two cycle") {
  // Hand elimination: prod over t^2 = x of (z - t^2) = (z - x)^2. The cycle
  // carries multiplicity two, matching d_i(f.g) = d_i(f) d_i(g) = 2.
  auto a = from_entries(1, 2, {{0, 2, 1.0}, {1, 0, -1.0}});
  auto b = from_entries(2, 1, {{0, 1, 1.0}, {2, 0, -1.0}});
  auto r = sylvester_resultant(a, b);
  // (z - x)^2 = z^2 - 2xz + x^2
  auto expected = from_entries(2, 2, {{0, 2, 1.0}, {1, 1, -2.0}, {2, 0, 1.0}});
  CHECK(r.xdeg() == 2);
  CHECK(r.ydeg() == 2);
  CHECK(correlation(r, expected) > 1.0 - 1e-12);
}

TEST_CASE("ill-posed elimination is reported") {
  // Both leading t-coefficients identically zero.
  auto a = from_entries(1, 2, {{0, 0, 1.0}, {1, 1, 1.0}});
  auto b = from_entries(2, 1, {{0, 0, 1.0}, {1, 1, 1.0}});
  CHECK_THROWS_AS(sylvester_resultant(a, b), NumericError);
}

TEST_CASE("strip removes an explicit x0 fiber factor") {
  // x0 * (y1 x0 - x1 y0) has a dead top coefficient row at declared (2,1).
  auto p = from_entries(2, 1, {{0, 1, 1.0}, {1, 0, -1.0}});
  StripReport rep;
  auto s = strip_fiber_factors(p, 1, 1, &rep);
  CHECK(s.xdeg() == 1);
  CHECK(s.ydeg() == 1);
  CHECK(rep.x_at_infinity == 1);
  CHECK_FALSE(rep.warning);
}

TEST_CASE("strip leaves a clean polynomial unchanged") {
  std::mt19937_64 gen(5);
  auto p = random_poly(2, 2, gen);
  StripReport rep;
  auto s = strip_fiber_factors(p, 2, 2, &rep);
  CHECK_FALSE(rep.any_removed());
  CHECK(correlation(p, s) > 1.0 - 1e-13);
}

TEST_CASE("strip removes an affine fiber factor (x - 1/2)") {
  // (x - 1/2) * (y - x^2), declared bidegree (3,1), expected (2,1).
  MatrixCx<double> c = MatrixCx<double>::Zero(4, 2);
  // Multiply y - x^2 (rows x^0..x^2) by (x - 1/2).
  // y-part: (x - 1/2) * y -> coeff (1,1)=1, (0,1)=-0.5
  // x^2-part: (x - 1/2) * (-x^2) -> (3,0)=-1, (2,0)=0.5
  c(1, 1) = 1.0;
  c(0, 1) = -0.5;
  c(3, 0) = -1.0;
  c(2, 0) = 0.5;
  StripReport rep;
  auto s = strip_fiber_factors(Poly2(c), 2, 1, &rep);
  CHECK(s.xdeg() == 2);
  CHECK(s.ydeg() == 1);
  REQUIRE(rep.x_fibers.size() == 1);
  CHECK(std::abs(rep.x_fibers[0] - Cxd(0.5)) < 1e-9);
  auto expected = from_entries(2, 1, {{0, 1, 1.0}, {2, 0, -1.0}});
  CHECK(correlation(s, expected) > 1.0 - 1e-10);
}

TEST_CASE("self-composition of the squaring graph strips to bidegree (4,1)") {
  auto sq = from_entries(2, 1, {{0, 1, 1.0}, {2, 0, -1.0}});
  auto raw = sylvester_resultant(sq, sq);
  StripReport rep;
  auto s = strip_fiber_factors(raw, 4, 1, &rep);
  CHECK(s.xdeg() == 4);
  CHECK(s.ydeg() == 1);
  auto expected = from_entries(4, 1, {{0, 1, 1.0}, {4, 0, -1.0}});
  CHECK(correlation(s, expected) > 1.0 - 1e-12);
}

TEST_CASE("resultant degree law on random pairs") {
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const int ma = 1 + static_cast<int>(gen() % 3), na = 1 + static_cast<int>(gen() % 3);
    const int mb = 1 + static_cast<int>(gen() % 3), nb = 1 + static_cast<int>(gen() % 3);
    auto a = random_poly(ma, na, gen);
    auto b = random_poly(mb, nb, gen);
    auto r = sylvester_resultant(a, b);
    StripReport rep;
    auto s = strip_fiber_factors(r, ma * mb, na * nb, &rep);
    CHECK(s.xdeg() == ma * mb);
    CHECK(s.ydeg() == na * nb);
    CHECK_FALSE(rep.warning);
  }
}

TEST_CASE("derivative coefficients: y - x^2 and y^2 - x") {
  auto p = from_entries(2, 1, {{0, 1, 1.0}, {2, 0, -1.0}});
  auto [px, py] = derivative_coefficients(p, 0, 0);
  // dP/dx = -2x, dP/dy = 1
  CHECK(std::abs(eval_affine<double>(px, Cxd(3.0), Cxd(7.0)) - Cxd(-6.0)) < 1e-14);
  CHECK(std::abs(eval_affine<double>(py, Cxd(3.0), Cxd(7.0)) - Cxd(1.0)) < 1e-14);

  auto q = from_entries(1, 2, {{0, 2, 1.0}, {1, 0, -1.0}});
  auto [qx, qy] = derivative_coefficients(q, 0, 0);
  CHECK(std::abs(eval_affine<double>(qx, Cxd(3.0), Cxd(7.0)) - Cxd(-1.0)) < 1e-14);
  CHECK(std::abs(eval_affine<double>(qy, Cxd(3.0), Cxd(7.0)) - Cxd(14.0)) < 1e-14);
}

TEST_CASE("derivatives match finite differences on a random (2,2) form") {
  std::mt19937_64 gen(77);
  auto p = random_poly(2, 2, gen);
  auto [px, py] = derivative_coefficients(p, 0, 0);
  const double h = 1e-6;
  for (int k = 0; k < 10; ++k) {
    const Cxd u = 0.8 * uniform_unit_disk(gen), v = 0.8 * uniform_unit_disk(gen);
    const Cxd fd_x = (eval_affine<double>(p.coeff, u + h, v) -
                      eval_affine<double>(p.coeff, u - h, v)) / (2 * h);
    const Cxd fd_y = (eval_affine<double>(p.coeff, u, v + h) -
                      eval_affine<double>(p.coeff, u, v - h)) / (2 * h);
    const Cxd dx = eval_affine<double>(px, u, v);
    const Cxd dy = eval_affine<double>(py, u, v);
    CHECK(std::abs(fd_x - dx) <= 1e-6 * std::max(1.0, std::abs(dx)));
    CHECK(std::abs(fd_y - dy) <= 1e-6 * std::max(1.0, std::abs(dy)));
  }
}

TEST_CASE("chart flips reverse coefficient indices") {
  auto p = from_entries(2, 1, {{0, 1, 1.0}, {2, 0, -1.0}});  // y - x^2
  // In the w = 1/x chart: P(w, y) = y w^2 - 1 (up to the homogeneous scale).
  auto m = chart_coeffs(p, 1, 0);
  CHECK(std::abs(m(2, 1) - Cxd(1.0)) < 1e-15);
  CHECK(std::abs(m(0, 0) - Cxd(-1.0)) < 1e-15);
}

TEST_CASE("text format round-trips exactly") {
  std::mt19937_64 gen(31);
  auto p = random_poly(3, 2, gen);
  std::stringstream ss;
  write_poly_text(ss, p, "sample");
  auto file = read_poly_text(ss);
  CHECK(file.name == "sample");
  REQUIRE(file.poly.xdeg() == 3);
  REQUIRE(file.poly.ydeg() == 2);
  CHECK((file.poly.coeff - p.coeff).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("malformed text is rejected") {
  std::stringstream a("1 1 0.5 0.5\n");
  CHECK_THROWS_AS(read_poly_text(a), ValidationError);
  std::stringstream b("bidegree 1 1\n5 0 1 0\n");
  CHECK_THROWS_AS(read_poly_text(b), ValidationError);
}
