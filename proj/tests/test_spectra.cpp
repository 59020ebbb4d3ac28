#include <cmath>
#include <vector>

#include "ccn/random.hpp"
#include "ccn/spectra.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace ccn;
using doctest::Approx;

TEST_CASE("standard Laplacian spectra") {
  CHECK(oracle::max_abs_diff(laplacian_spectrum(ring(4)), Eigen::Vector4d(0, 2, 2, 4)) < 1e-12);
  CHECK(oracle::max_abs_diff(laplacian_spectrum(complete(4)), Eigen::Vector4d(0, 4, 4, 4)) < 1e-12);
  CHECK(laplacian_max(cube()) == Approx(6.0));
  CHECK(laplacian_max(petersen()) == Approx(5.0));
  const Eigen::MatrixXd l = laplacian_matrix(oracle::load_fixture("fig2.json"));
  CHECK((l * Eigen::VectorXd::Ones(10)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((l - l.transpose()).norm() == 0.0);
}

TEST_CASE("weighted Laplacian") {
  const CellGraph g = ring(4);
  const std::vector<double> ones(4, 1.0), neg(4, -1.0);
  const WeightedLaplacian p(g, ones), n(g, neg);
  CHECK(p.inertia() == Inertia{0, 1, 3});
  CHECK(n.inertia() == Inertia{3, 1, 0});
  CHECK((p.matrix() * Eigen::VectorXd::Ones(4)).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(p.matrix()(0, 1) == -1.0);
  CHECK(p.matrix()(0, 0) == 2.0);
  const std::vector<double> bad(3, 1.0);
  CHECK_THROWS_AS(WeightedLaplacian(g, bad), std::invalid_argument);

  const std::vector<double> mixed{1.0, -1.0};
  const WeightedLaplacian pm(path(3), mixed);
  CHECK(pm.inertia().n_zero >= 1);
  CHECK(inertia_bounds_from_weights(path(3), mixed).contains(pm.inertia()));
}

TEST_CASE("inertia thresholds") {
  CHECK(zero_threshold(Eigen::Vector3d(0, 1, 2)) == Approx(2e-9));
  CHECK(zero_threshold(Eigen::Vector3d(0, 1e-6, 1e-5)) == Approx(1e-12));
  CHECK(inertia(Eigen::VectorXd{{-1, 1e-12, 3}}) == Inertia{1, 1, 1});
  CHECK(inertia(Eigen::VectorXd{{-1, 0.5, 3}}, 0.9) == Inertia{1, 1, 1});
}

TEST_CASE("synchronous spectrum closed form") {
  CHECK(oracle::max_abs_diff(synchronous_hessian_spectrum(ring(4), 3, 1), Eigen::Vector4d(4, 6, 6, 8)) < 1e-12);
  CHECK(oracle::max_abs_diff(synchronous_hessian_spectrum(complete(3), 1, 1.5), Eigen::Vector3d(0.5, 0.5, 5)) <
        1e-12);
  const Eigen::VectorXd flat = synchronous_hessian_spectrum(petersen(), 2.5, 0.0);
  CHECK((flat.array() - 7.5).abs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(synchronous_hessian_spectrum(star(4), 1, 1), std::domain_error);

  Rng rng(3);
  for (const CellGraph& g : {ring(5), complete(4), cube(), petersen()}) {
    for (int s = 0; s < 20; ++s) {
      const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
      CHECK(oracle::max_abs_diff(synchronous_hessian_spectrum(g, a, b),
                                 oracle::eigensolve(synchronous_hessian(g, a, b))) < 1e-8);
    }
  }
}

TEST_CASE("K_{m,n} closed form") {
  CHECK(oracle::max_abs_diff(kmn_hessian_spectrum(2, 3, 1, 0), Eigen::VectorXd{{2, 2, 2, 3, 3}}) < 1e-12);
  const Eigen::VectorXd s = kmn_hessian_spectrum(2, 3, 2, 1);
  CHECK(s.maxCoeff() == Approx((10 + std::sqrt(28.0)) / 2));
  CHECK(s.minCoeff() == Approx((10 - std::sqrt(28.0)) / 2));
  CHECK_THROWS_AS(kmn_hessian_spectrum(3, 3, 1, 1), std::domain_error);

  Rng rng(4);
  for (int m = 2; m <= 4; ++m)
    for (int n = m + 1; n <= 5; ++n)
      for (int t = 0; t < 10; ++t) {
        const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
        const CellGraph g = complete_bipartite(m, n);
        CHECK(oracle::max_abs_diff(kmn_hessian_spectrum(m, n, a, b),
                                   oracle::eigensolve(synchronous_hessian(g, a, b))) < 1e-8);
      }
}

TEST_CASE("(d,m) two-colour minimum eigenvalue") {
  CHECK(dm_two_colour_min_eigenvalue(3, 1, 1, 0) == Approx(3.0));
  CHECK(dm_two_colour_min_eigenvalue(3, 2, 1, 1) == Approx(1.5 * (3 - std::sqrt(5.0))));
  CHECK(dm_two_colour_min_eigenvalue(3, 1, 1, 2) == Approx(-3.0));
  const Bipartition parts = *bipartition(cube());
  const Eigen::VectorXd ev = oracle::eigensolve(structured_hessian(cube(), parts, 2, 1, 1));
  CHECK(ev.minCoeff() == Approx(1.5 * (3 - std::sqrt(5.0))));
}

TEST_CASE("inertia bounds") {
  const CellGraph r5 = ring(5);
  // edges of ring(5): {1,2},{1,5},{2,3},{3,4},{4,5}; make {1,5} the negative one.
  std::vector<int> signs{1, -1, 1, 1, 1};
  const InertiaBounds b = inertia_bounds(r5, signs);
  CHECK(b.c_plus == 1);
  CHECK(b.c_minus == 4);
  CHECK(b.n_minus_lo == 0);
  CHECK(b.n_minus_hi == 1);

  const std::vector<int> pos(5, 1), neg(5, -1);
  CHECK(inertia_bounds(r5, pos).n_minus_hi == 0);
  CHECK(inertia_bounds(r5, neg).n_minus_lo == 4);
  CHECK(inertia_bounds(r5, neg).n_minus_hi == 4);

  Rng rng(9);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> w(5);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = signs[i] * rng.uniform(0.1, 3);
    CHECK(b.contains(WeightedLaplacian(r5, w).inertia()));
  }
}

TEST_CASE("inertia bounds with zero weights") {
  const CellGraph g = path(4);
  std::vector<double> w{1.0, 0.0, -2.0};
  const InertiaBounds b = inertia_bounds_from_weights(g, w);
  CHECK(b.components == 2);
  CHECK(b.contains(WeightedLaplacian(g, w).inertia()));
  CHECK(WeightedLaplacian(g, w).inertia() == Inertia{1, 2, 1});
}
