// Copyright (c) 2026 the holocorr authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "holocorr/builtins.hpp"
#include "holocorr/pairing.hpp"

using namespace holocorr;
using Cxd = std::complex<double>;
using P1 = ProjectivePoint<double>;

namespace {

TestForm scaled(const TestForm& base, double s) {
  auto ev = [base, s](const P1& x, const P1& y, int cx, int cy) {
    FormComponents f = base.components(x, y, cx, cy);
    f.a *= s;
    f.b *= s;
    f.c *= s;
    f.e *= s;
    f.p *= s;
    f.q *= s;
    return f;
  };
  return TestForm(base.id() + "-scaled", ev, base.alpha(), s * base.norm_bound(),
                  base.support());
}

WeightedPointCloud random_probability_cloud(std::mt19937_64& gen, int n) {
  WeightedPointCloud c;
  double total = 0;
  for (int i = 0; i < n; ++i) {
    c.atoms.push_back(random_sphere_point(gen));
    c.weights.push_back(0.1 + uniform01(gen));
    total += c.weights.back();
  }
  for (auto& w : c.weights) w /= total;
  return c;
}

}  // namespace

TEST_CASE("area form has unit mass and the density transforms by |dw/dz|^2") {
  const SphereGrid grid(64);
  double mass = 0;
  for (const auto& node : grid.nodes()) mass += node.weight;
  CHECK(std::abs(mass - 1.0) < 1e-10);

  // Consistency: weight * inv_density integrates the chart Lebesgue density.
  double mass2 = 0;
  for (const auto& node : grid.nodes()) {
    mass2 += node.weight * node.inv_density *
             fs_density(node.point.chart_coord(node.point.canonical_chart()));
  }
  CHECK(std::abs(mass2 - 1.0) < 1e-12);

  std::mt19937_64 gen(3);
  for (int k = 0; k < 20; ++k) {
    const Cxd z = 3.0 * uniform_unit_disk(gen);
    if (std::abs(z) < 0.1) continue;
    const Cxd w = 1.0 / z;
    CHECK(std::abs(fs_density(w) - fs_density(z) * std::norm(z * z)) <=
          1e-10 * fs_density(w));
  }
}

TEST_CASE("the product form has unit square integral") {
  const SphereGrid grid(48);
  const auto omega = product_omega();
  // int beta^2 = int int (2ab - 2ce - 2pq) dA dA over both factors.
  double total = 0;
  for (const auto& nx : grid.nodes()) {
    for (const auto& ny : grid.nodes()) {
      const auto f = omega.components(nx.point, ny.point,
                                      nx.point.canonical_chart(),
                                      ny.point.canonical_chart());
      const Cxd val = 2.0 * (f.a * f.b - f.c * f.e - f.p * f.q);
      total += (nx.weight * nx.inv_density) * (ny.weight * ny.inv_density) *
               val.real();
    }
  }
  CHECK(std::abs(total - 1.0) < 1e-8);
}

TEST_CASE("graph mass identity at n = 1 for the squaring map") {
  auto f = builtin_correspondence("square");
  auto pr = pair_graph_current(f, 1, product_omega(), PairingStrategy::Symbolic);
  const double expected = (1.0 + 2.0) / (std::sqrt(2.0) * 2.0);
  CHECK(std::abs(pr.value - Cxd(expected)) < 1e-3);
}

TEST_CASE("graph mass identity for n <= 6 on square and the sqrt adjoint") {
  for (const char* name : {"square", "sqrt"}) {
    auto base = builtin_correspondence(name);
    auto f = std::string(name) == "sqrt" ? adjoint(base) : base;
    auto fn = f;
    for (int n = 1; n <= 6; ++n) {
      if (n > 1) fn = compose(f, fn);
      auto pr = pair_graph_current(f, n, product_omega(), PairingStrategy::Symbolic,
                                   4096, 96, 1, &fn);
      const double expected = (std::pow(f.d1(), n) + std::pow(f.d2(), n)) /
                              (std::sqrt(2.0) * std::pow(f.d2(), n));
      CHECK(std::abs(pr.value - Cxd(expected)) < 2e-3);
      CHECK(std::abs(pr.value) < 2.0);  // normalized graph mass stays below 2
    }
  }
}

TEST_CASE("pure a-forms with x-only coefficient reduce to the degree ratio") {
  auto f = builtin_correspondence("square");
  auto phi = [](const P1& x, const P1&) {
    return Cxd(1.0 + 0.5 * sphere_u1(x) + 0.25 * sphere_u2(x));
  };
  auto beta = global_a_form("a-x-only", phi, 1e9, 1.75);
  // <omega, phi> over the grid
  const SphereGrid grid(96);
  Cxd omega_phi = 0;
  for (const auto& node : grid.nodes()) omega_phi += node.weight * phi(node.point, node.point);
  for (int n = 1; n <= 3; ++n) {
    auto pr = pair_graph_current(f, n, beta, PairingStrategy::Symbolic);
    const Cxd expected = std::pow(0.5, n) * omega_phi;
    CHECK(std::abs(pr.value - expected) < 2e-3);
  }
}

TEST_CASE("symbolic and tree strategies agree") {
  auto circ = Correspondence<double>([] {
    MatrixCx<double> c = MatrixCx<double>::Zero(3, 3);
    c(0, 2) = 1.0;
    c(2, 0) = -1.0;
    c(0, 0) = -1.0;  // y^2 - x^2 - 1
    return BihomogeneousPoly<double>(c);
  }());
  auto beta = global_b_form("b-probe", [](const P1& x, const P1&) {
    return Cxd(1.0 + 0.5 * sphere_u1(x));
  }, 1e9, 1.5);
  auto sym = pair_graph_current(circ, 3, beta, PairingStrategy::Symbolic, 4096, 48);
  auto tree = pair_graph_current(circ, 3, beta, PairingStrategy::Tree, 4096, 48);
  const double tol = 3.0 * (sym.mc_stderr + tree.mc_stderr) + 1e-6;
  CHECK(std::abs(sym.value - tree.value) <= tol);
}

TEST_CASE("(2,0) and (0,2) components are annihilated on the graph") {
  auto f = builtin_correspondence("nwm22-seeded");
  auto base = global_b_form("b-u1", [](const P1& x, const P1&) {
    return Cxd(1.0 + 0.5 * sphere_u1(x));
  }, 1e9, 1.5);
  auto padded = with_holomorphic_part(base, [](const P1& x, const P1& y) {
    return Cxd(0.8 + 0.2 * sphere_u2(x), 0.4 * sphere_u3(y));
  });
  auto pr1 = pair_graph_current(f, 2, base, PairingStrategy::Symbolic, 4096, 48);
  auto pr2 = pair_graph_current(f, 2, padded, PairingStrategy::Symbolic, 4096, 48);
  CHECK(std::abs(pr1.value - pr2.value) <= 1e-8);
}

TEST_CASE("pairing is linear in the form") {
  auto f = builtin_correspondence("sqrt");
  auto beta = global_mixed_form("mixed", [](const P1& x, const P1& y) {
    return Cxd(1.0 + 0.3 * sphere_u1(x) * sphere_u1(y));
  }, 1e9, 1.3);
  auto twice = scaled(beta, 2.0);
  auto pr1 = pair_graph_current(f, 2, beta, PairingStrategy::Symbolic, 4096, 48);
  auto pr2 = pair_graph_current(f, 2, twice, PairingStrategy::Symbolic, 4096, 48);
  CHECK(std::abs(pr2.value - 2.0 * pr1.value) <= 1e-10 * (1.0 + std::abs(pr1.value)));
}

TEST_CASE("limit pairing: first-factor pullbacks weigh 1/sqrt(2) against omega") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 3; ++trial) {
    LimitCurrent lim{random_probability_cloud(gen, 5 + trial), std::nullopt};
    const Cxd v = pair_limit_current(lim, product_omega(), 64);
    CHECK(std::abs(v - Cxd(1.0 / std::sqrt(2.0))) < 1e-6);
  }
}

TEST_CASE("limit pairing vanishes without a fiber component") {
  std::mt19937_64 gen(13);
  LimitCurrent lim{random_probability_cloud(gen, 6), std::nullopt};
  auto beta = global_a_form("a-only", [](const P1&, const P1&) { return Cxd(1.0); },
                            1e9, 1.0);
  CHECK(std::abs(pair_limit_current(lim, beta, 48)) == 0.0);
}

TEST_CASE("limit pairing of a y-only b-form matches direct product quadrature") {
  std::mt19937_64 gen(17);
  auto phi = [](const P1& y) { return Cxd(1.0 + 0.4 * sphere_u1(y) + 0.2 * sphere_u3(y)); };
  auto beta = global_b_form("b-y-only", [phi](const P1&, const P1& y) { return phi(y); },
                            1e9, 1.6);
  LimitCurrent lim{random_probability_cloud(gen, 8), std::nullopt};
  const Cxd paired = pair_limit_current(lim, beta, 96);
  // Independent of the cloud: the fiber integral of phi against the area form.
  const SphereGrid grid(200);
  Cxd direct = 0;
  for (const auto& node : grid.nodes()) direct += node.weight * phi(node.point);
  CHECK(std::abs(paired - direct) < 1e-4);
}

TEST_CASE("case forms put the bump in exactly one slot") {
  auto bump = [](Cxd u, Cxd v) {
    auto b = [](double t) { return t > 0.25 && t < 0.75 ? std::exp(-1.0 / ((t - 0.25) * (0.75 - t))) : 0.0; };
    return Cxd(b(u.real()) * b(u.imag()) * b(v.real()) * b(v.imag()));
  };
  const P1 x = P1::from_affine(Cxd(0.5, 0.45));
  const P1 y = P1::from_affine(Cxd(0.4, 0.55));
  auto f1 = build_case_test_form(1, bump).components(x, y, 0, 0);
  CHECK(std::abs(f1.a) > 0);
  CHECK(std::abs(f1.b) + std::abs(f1.c) + std::abs(f1.e) == 0.0);
  auto f2 = build_case_test_form(2, bump).components(x, y, 0, 0);
  CHECK(std::abs(f2.b) > 0);
  CHECK(std::abs(f2.a) + std::abs(f2.c) + std::abs(f2.e) == 0.0);
  auto f3 = build_case_test_form(3, bump).components(x, y, 0, 0);
  CHECK(std::abs(f3.c) > 0);
  CHECK(std::abs(f3.a) + std::abs(f3.b) + std::abs(f3.e) == 0.0);
  auto f3e = build_case_test_form(3, bump, 0, 0, true).components(x, y, 0, 0);
  CHECK(std::abs(f3e.e) > 0);

  // Support audit rejects a function alive outside the core window.
  auto wide = [](Cxd u, Cxd v) { return Cxd(1.0) + u * 0.0 + v * 0.0; };
  CHECK_THROWS_AS(build_case_test_form(1, wide), ValidationError);
}

TEST_CASE("case forms transform consistently across charts") {
  auto bump = [](Cxd u, Cxd v) {
    auto b = [](double t) { return t > 0.25 && t < 0.75 ? std::exp(-1.0 / ((t - 0.25) * (0.75 - t))) : 0.0; };
    return Cxd(b(u.real()) * b(u.imag()) * b(v.real()) * b(v.imag()));
  };
  auto form = build_case_test_form(3, bump);
  const P1 x = P1::from_affine(Cxd(0.55, 0.6));   // |x| < 1: canonical chart 0
  const P1 y = P1::from_affine(Cxd(0.7, 0.72));   // |y| ~ 1: either chart valid
  const auto c00 = form.components(x, y, 0, 0);
  const auto c11 = form.components(x, y, 1, 1);
  // c transforms with fx conj(fy), fx = -z^2 (z the chart-0 coordinate read
  // from chart 1), checked against the direct evaluation.
  const Cxd fx = -x.chart_coord(0) * x.chart_coord(0);
  const Cxd fy = -y.chart_coord(0) * y.chart_coord(0);
  const Cxd back = c11.c / (1.0 / fx * std::conj(1.0 / fy));
  CHECK(std::abs(back - c00.c) <= 1e-12 * std::max(1.0, std::abs(c00.c)));
}

TEST_CASE("convergence experiment on the squaring map hits the degree ratio") {
  auto f = builtin_correspondence("square");
  auto beta = global_a_form("a-mix", [](const P1& x, const P1& y) {
    return Cxd(1.0 + 0.5 * sphere_u1(y) + 0.3 * sphere_u2(x) * sphere_u2(y));
  }, 1e9, 1.8);
  auto rep = convergence_experiment(f, beta, 8, PairingStrategy::Symbolic, {48, 24}, 4096, 7);
  REQUIRE_FALSE(rep.rate_indeterminate);
  CHECK(rep.fitted_rate > 0.35);
  CHECK(rep.fitted_rate < 0.7);
  CHECK(rep.fit_quality >= 0.9);
}

TEST_CASE("doubling the form doubles every error row") {
  auto f = builtin_correspondence("square");
  auto beta = global_a_form("a-lin", [](const P1&, const P1& y) {
    return Cxd(1.0 + 0.25 * sphere_u1(y));
  }, 1e9, 1.25);
  auto rep1 = convergence_experiment(f, beta, 4, PairingStrategy::Symbolic, {32, 16}, 4096, 5);
  auto rep2 = convergence_experiment(f, scaled(beta, 2.0), 4, PairingStrategy::Symbolic,
                                     {32, 16}, 4096, 5);
  for (size_t i = 0; i < rep1.rows.size(); ++i) {
    CHECK(rep2.rows[i].abs_error ==
          doctest::Approx(2.0 * rep1.rows[i].abs_error).epsilon(1e-10));
  }
}

TEST_CASE("balanced-degree limit current needs both factors") {
  auto f = builtin_correspondence("nwm22-seeded");
  std::mt19937_64 gen(23);
  auto lim = make_limit_current(f, 10, gen);
  CHECK(lim.mu_minus.has_value());
  const Cxd mass = pair_limit_current(lim, product_omega(), 48);
  CHECK(std::abs(mass - Cxd(std::sqrt(2.0))) < 1e-6);

  auto g = builtin_correspondence("sqrt");  // d1 > d2
  CHECK_THROWS_AS(make_limit_current(g, 6, gen), ValidationError);
}
