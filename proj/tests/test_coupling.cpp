#include <cmath>
#include <numbers>
#include <vector>

#include "ccn/coupling.hpp"
#include "doctest.h"

using namespace ccn;
using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;

Eigen::MatrixXd coeffs(std::initializer_list<std::initializer_list<double>> rows) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), 5);
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) c(i, j++) = v;
    ++i;
  }
  return c;
}
}  // namespace

TEST_CASE("cosine family values") {
  const PhaseCoupling d = cosine_coupling();
  CHECK(d(0.0) == Approx(1.0));
  CHECK(d.d1(0.0) == Approx(0.0));
  CHECK(d.d2(0.0) == Approx(-4 * pi * pi));
  CHECK(d(0.5) == Approx(-1.0));
  CHECK(d.d2(0.5) == Approx(4 * pi * pi));
  CHECK(d.d1(0.25) == Approx(-2 * pi));
  CHECK(d.even());
}

TEST_CASE("phase derivatives match finite differences") {
  for (const PhaseCoupling& d : {cosine_coupling(1.3), two_harmonic_coupling(1.0, 0.05)}) {
    for (double u = -0.9; u < 1.0; u += 0.137) {
      const double h = 1e-5;
      CHECK(d.d1(u) == Approx((d(u + h) - d(u - h)) / (2 * h)).epsilon(1e-6));
      CHECK(d.d2(u) == Approx((d.d1(u + h) - d.d1(u - h)) / (2 * h)).epsilon(1e-6));
    }
  }
}

TEST_CASE("builtin families by name") {
  const std::vector<double> a{2.0};
  CHECK(builtin_phase_family("cosine", a)(0.0) == Approx(2.0));
  const std::vector<double> ab{1.0, 0.05};
  CHECK(builtin_phase_family("two_harmonic", ab)(0.0) == Approx(1.05));
  CHECK_THROWS_AS(builtin_phase_family("sawtooth", a), std::invalid_argument);
  CHECK_THROWS_AS(builtin_phase_family("two_harmonic", a), std::invalid_argument);
}

TEST_CASE("ring conditions") {
  CHECK(check_ring_conditions(cosine_coupling()).all());
  const auto neg = check_ring_conditions(cosine_coupling(-1.0));
  CHECK_FALSE(neg.c4);
  const auto wiggle = check_ring_conditions(two_harmonic_coupling(1.0, 0.5));
  CHECK_FALSE(wiggle.c2);
  CHECK_FALSE(wiggle.derivative_zeros.empty());
  CHECK(check_ring_conditions(two_harmonic_coupling(1.0, 0.05)).all());
  // b = 0.1 keeps C1, C2 and C4 but delta'' is no longer monotone on (0, 1/2).
  const auto b01 = check_ring_conditions(two_harmonic_coupling(1.0, 0.1));
  CHECK(b01.c1);
  CHECK(b01.c2);
  CHECK(b01.c4);
  CHECK_FALSE(b01.c3);
  CHECK_THROWS(check_ring_conditions(cosine_coupling(), 16));
}

TEST_CASE("odd phase coupling fails C1") {
  const PhaseCoupling s("sine", [](double u) { return std::sin(2 * pi * u); },
                        [](double u) { return 2 * pi * std::cos(2 * pi * u); },
                        [](double u) { return -4 * pi * pi * std::sin(2 * pi * u); }, false);
  CHECK_FALSE(check_ring_conditions(s).c1);
}

TEST_CASE("polynomial coupling derivatives") {
  const CouplingFunction q = polynomial_coupling(coeffs({{0, 0, 1}, {0, 1}, {1}}), true);
  const SecondPartials s = q.hessian(0.3, -1.2);
  CHECK(s.xx == Approx(2.0));
  CHECK(s.xy == Approx(1.0));
  CHECK(s.yy == Approx(2.0));
  CHECK(q(1.0, 2.0) == Approx(7.0));

  const CouplingFunction x2y2 = polynomial_coupling(coeffs({{0}, {0}, {0, 0, 1}}), true);
  CHECK(x2y2.hessian(1.0, 1.0).xy == Approx(4.0));

  CHECK_THROWS_AS(polynomial_coupling(coeffs({{0}, {0}, {0}, {0, 1}}), true), std::invalid_argument);
  CHECK_NOTHROW(polynomial_coupling(coeffs({{0}, {0}, {0}, {0, 1}}), false));
}

TEST_CASE("single-variable monomials") {
  CHECK(has_single_variable_terms(coeffs({{0, 0, 1}})));
  CHECK(has_single_variable_terms(coeffs({{0}, {0}, {3}})));
  CHECK_FALSE(has_single_variable_terms(coeffs({{7, 0}, {0, 1}})));
}

TEST_CASE("diagnostics on analytic couplings") {
  const CouplingFunction q = polynomial_coupling(coeffs({{0, 0, 0, 1}, {0, 0.5}, {}, {1}}), true);
  const auto dq = diagnose_coupling(q, 200, 7);
  CHECK(dq.max_swap_error <= 1e-12);
  CHECK(dq.max_gradient_rel_error <= 1e-6);
  CHECK(dq.max_hessian_rel_error <= 1e-5);

  const auto dc = diagnose_coupling(as_bivariate(cosine_coupling()), 200, 7);
  CHECK(dc.max_swap_error <= 1e-12);
  CHECK(dc.max_gradient_rel_error <= 1e-6);

  const CouplingFunction skew = polynomial_coupling(coeffs({{0}, {0, 0, 0, 1}}), false);
  CHECK(diagnose_coupling(skew, 50, 3).max_swap_error > 1e-3);
}

TEST_CASE("finite-difference fallback") {
  const CouplingFunction f =
      CouplingFunction::scalar([](double x, double y) { return std::exp(x) * std::sin(y); }, false);
  CHECK_FALSE(f.has_analytic_gradient());
  const auto [gx, gy] = f.gradient(0.4, 0.7);
  CHECK(gx == Approx(std::exp(0.4) * std::sin(0.7)).epsilon(1e-8));
  CHECK(gy == Approx(std::exp(0.4) * std::cos(0.7)).epsilon(1e-8));
  CHECK(f.hessian(0.4, 0.7).xy == Approx(std::exp(0.4) * std::cos(0.7)).epsilon(1e-6));
}

TEST_CASE("vector couplings reject scalar hessians") {
  const CouplingFunction v(
      2, [](ConstSpan x, ConstSpan y) { return x[0] * y[0] + x[1] * y[1]; }, true);
  CHECK(v.arity() == 2);
  std::vector<double> x{1, 2}, y{3, 4}, gx(2), gy(2);
  v.gradient(x, y, gx, gy);
  CHECK(gx[0] == Approx(3.0));
  CHECK(gy[1] == Approx(2.0));
  CHECK_THROWS_AS(v.hessian(0.0, 0.0), std::domain_error);
}

TEST_CASE("self connections") {
  const SelfConnection a = polynomial_self_connection(3, {1.0, 0.0, 2.0});
  CHECK(a.degree() == 3);
  const std::vector<double> x{1.5};
  CHECK(a(x) == Approx(1.0 + 2.0 * 2.25));
  std::vector<double> g(1);
  a.gradient(x, g);
  CHECK(g[0] == Approx(6.0));
  CHECK(a.second_derivative(0.2) == Approx(4.0));
}
