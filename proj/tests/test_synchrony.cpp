#include <cmath>
#include <numbers>

#include "ccn/random.hpp"
#include "ccn/synchrony.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace ccn;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

CouplingFunction poly(std::initializer_list<std::tuple<int, int, double>> terms, bool z2) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(5, 5);
  for (auto [i, j, v] : terms) c(i, j) = v;
  return polynomial_coupling(c, z2);
}

}  // namespace

TEST_CASE("synchronous critical points of simple couplings") {
  const auto diff = find_synchronous_critical(poly({{2, 0, 1}, {1, 1, -2}, {0, 2, 1}}, true), -2, 2);
  CHECK(diff.continuum);

  const auto quad = find_synchronous_critical(poly({{2, 0, 1}, {1, 1, 1}, {0, 2, 1}}, true), -2, 2);
  CHECK_FALSE(quad.continuum);
  REQUIRE(quad.roots.size() == 1);
  CHECK(quad.roots[0] == Approx(0.0).epsilon(1e-12));

  const CouplingFunction mixed = CouplingFunction::scalar(
      [](double x, double y) { return std::cos(2 * pi * (x - y)) + x * x + y * y; }, true,
      [](double x, double y) {
        const double s = -2 * pi * std::sin(2 * pi * (x - y));
        return std::pair{s + 2 * x, -s + 2 * y};
      });
  const auto m = find_synchronous_critical(mixed, -3, 3);
  REQUIRE(m.roots.size() == 1);
  CHECK(std::abs(m.roots[0]) < 1e-10);

  // g(t) = 4 t^3 - 4 t has three roots.
  const auto cubic = find_synchronous_critical(poly({{4, 0, 0.5}, {0, 4, 0.5}, {2, 0, -1}, {0, 2, -1}}, true), -2, 2);
  CHECK(cubic.roots.size() == 3);
}

TEST_CASE("synchronous classification from parameters") {
  const auto k3 = classify_synchronous_params(complete(3), 1.0, 1.5);
  CHECK(k3.verdict == Verdict::minimum);
  CHECK(k3.eigen_verdict == Verdict::minimum);
  CHECK(k3.wedge);
  CHECK_FALSE(k3.coupling_minimum);
  CHECK(oracle::max_abs_diff(k3.closed_form_spectrum, Eigen::Vector3d(0.5, 0.5, 5)) < 1e-12);

  for (const CellGraph& g : {ring(4), complete(5), petersen()}) {
    const auto mx = classify_synchronous_params(g, -1.0, 0.0);
    CHECK(mx.verdict == Verdict::maximum);
    CHECK(mx.inertia.n_minus == g.size());
  }

  const auto sad = classify_synchronous_params(ring(4), 1.0, 2.0);
  CHECK(sad.verdict == Verdict::saddle);
  CHECK(sad.index() == 1);

  // alpha = beta on a bipartite graph makes the top Laplacian mode neutral.
  CHECK(classify_synchronous_params(ring(4), 1.0, 1.0).verdict == Verdict::degenerate);
  CHECK_THROWS_AS(classify_synchronous_params(star(4), 1, 0), std::domain_error);
}

TEST_CASE("bipartite regular graphs: network minimum iff coupling minimum") {
  for (const CellGraph& g : {ring(4), cube(), ring(6)})
    for (double a = -2; a <= 2; a += 0.25)
      for (double b = -2; b <= 2; b += 0.25) {
        const auto c = classify_synchronous_params(g, a, b);
        if (c.verdict == Verdict::degenerate) continue;
        CHECK((c.verdict == Verdict::minimum) == coupling_minimum(a, b));
        CHECK_FALSE(c.wedge);
      }
}

TEST_CASE("classification at a located critical point") {
  const CouplingFunction q = poly({{2, 0, 1}, {1, 1, 1}, {0, 2, 1}}, true);
  const auto c = classify_synchronous(petersen(), q, 0.0);
  CHECK(c.alpha == Approx(2.0));
  CHECK(c.beta == Approx(1.0));
  CHECK(c.verdict == Verdict::minimum);
  CHECK(c.point == std::vector<double>{0.0});
  CHECK_THROWS_AS(classify_synchronous(petersen(), q, 0.5), std::domain_error);
}

TEST_CASE("wedge geometry") {
  const Wedge q3 = wedge_region(cube());
  CHECK(q3.empty);
  CHECK(q3.angle == Approx(0.0).epsilon(1e-12));
  const Wedge k5 = wedge_region(complete(5));
  CHECK(k5.maximal);
  CHECK(k5.lambda_max == Approx(5.0));
  const Wedge p = wedge_region(petersen());
  CHECK_FALSE(p.empty);
  CHECK_FALSE(p.maximal);
  CHECK(p.slope == Approx(-2.0 / 3.0));
  CHECK(p.contains(1.0, 1.4));
  CHECK_FALSE(p.contains(1.0, 1.6));
  CHECK_FALSE(p.contains(1.0, 0.5));
  CHECK(wedge_region(complete(3)).angle > p.angle);
  CHECK(p.angle > wedge_region(ring(5)).angle);
}

TEST_CASE("two-colour critical points") {
  // Non-bipartite graphs carry no two-colour patterns.
  CHECK(find_two_colour_critical(complete(3), poly({{1, 1, 1}, {3, 0, 1}, {0, 3, 1}}, true), -2, 2).patterns.empty());

  // (x - 1/2)^2 + (y + 1/2)^2 has the single critical pair (1/2, -1/2).
  const CouplingFunction shifted = poly({{2, 0, 1}, {1, 0, -1}, {0, 2, 1}, {0, 1, 1}}, false);
  const auto s = find_two_colour_critical(ring(4), shifted, -2, 2);
  REQUIRE(s.patterns.size() == 1);
  CHECK(s.patterns[0].x0 == Approx(0.5));
  CHECK(s.patterns[0].y0 == Approx(-0.5));
  const Eigen::VectorXd st = s.patterns[0].state(4);
  CHECK(oracle::max_abs_diff(st, Eigen::Vector4d(0.5, -0.5, 0.5, -0.5)) < 1e-10);

  // The cosine coupling has lines of critical pairs x0 - y0 = +-1/2.
  const auto c = find_two_colour_critical(ring(4), as_bivariate(cosine_coupling()), 0.05, 0.95, 32);
  CHECK(c.continuum);
  REQUIRE_FALSE(c.patterns.empty());
  for (const auto& p : c.patterns) CHECK(std::abs(std::abs(p.x0 - p.y0) - 0.5) < 1e-9);
}

TEST_CASE("Z2 couplings give swap pairs") {
  // x^2 y^2 - x^2 - y^2 has the critical pairs (1, -1) and (-1, 1).
  const CouplingFunction phi = poly({{2, 2, 1}, {2, 0, -1}, {0, 2, -1}}, true);
  const auto s = find_two_colour_critical(cube(), phi, -2, 2);
  REQUIRE(s.patterns.size() % 2 == 0);
  for (std::size_t i = 0; i + 1 < s.patterns.size(); i += 2) {
    CHECK(s.patterns[i].x0 == Approx(s.patterns[i + 1].y0));
    CHECK(s.patterns[i].y0 == Approx(s.patterns[i + 1].x0));
  }
}

TEST_CASE("two-colour classification on (d,m)-graphs") {
  const CouplingFunction shifted = poly({{2, 0, 1}, {1, 0, -1}, {0, 2, 1}, {0, 1, 1}}, false);
  const TwoColourPattern pat{*bipartition(cube()), 0.5, -0.5};
  const auto c = classify_two_colour(cube(), shifted, pat);
  CHECK(c.verdict == Verdict::minimum);
  CHECK(c.eigen_verdict == Verdict::minimum);
  REQUIRE(c.gamma);
  CHECK(*c.gamma == Approx(2.0));

  CHECK(classify_two_colour_params(cube(), 1, 1, 2).verdict == Verdict::saddle);
  CHECK(classify_two_colour_params(cube(), 1, 1, 2).closed_form_spectrum[0] == Approx(-3.0));
  CHECK(classify_two_colour_params(cube(), -1, -1, 0.5).verdict == Verdict::maximum);
  CHECK_THROWS_AS(classify_two_colour_params(ring(5), 1, 1, 0), std::domain_error);
  CHECK_THROWS_AS(classify_two_colour(cube(), shifted, {*bipartition(cube()), 0.0, 0.0}), std::domain_error);
}

TEST_CASE("the two (3,4)-graphs share two-colour spectra") {
  const CellGraph a = cube(), b = complete_bipartite_minus_matching(4);
  const Bipartition pa = *bipartition(a), pb = *bipartition(b);
  Rng rng(17);
  for (int t = 0; t < 30; ++t) {
    const double al = rng.uniform(-2, 2), ga = rng.uniform(-2, 2), be = rng.uniform(-2, 2);
    const Eigen::VectorXd ea = oracle::eigensolve(structured_hessian(a, pa, al, ga, be));
    const Eigen::VectorXd eb = oracle::eigensolve(structured_hessian(b, pb, al, ga, be));
    CHECK(oracle::max_abs_diff(ea, eb) <= 1e-8);
    CHECK(ea.minCoeff() == Approx(dm_two_colour_min_eigenvalue(3, al, ga, be)).epsilon(1e-10));
  }
}

TEST_CASE("coexistence report") {
  // x^2 y^2 - x^2 - y^2: synchronous critical points at 0 and +-1, two-colour pairs (1,-1), (-1,1).
  const CouplingFunction phi = poly({{2, 2, 1}, {2, 0, -1}, {0, 2, -1}}, true);
  const auto r = coexistence_report(ring(4), phi, -2, 2);
  CHECK(r.synchronous.roots.size() == 3);
  CHECK_FALSE(r.two_colour.patterns.empty());
  CHECK(r.shared_values.size() == 2);
}

TEST_CASE("verdict strings") {
  CHECK(to_string(Verdict::minimum) == "minimum");
  CHECK(to_string(Verdict::saddle) == "saddle");
  CHECK(verdict_from_spectrum(Eigen::Vector3d(-1, 2, 3)) == Verdict::saddle);
  CHECK(verdict_from_spectrum(Eigen::Vector3d(0, 2, 3)) == Verdict::degenerate);
}
