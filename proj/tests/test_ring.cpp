#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "ccn/random.hpp"
#include "ccn/ring.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace ccn;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

/// delta(u) = cos(2 pi u) + c sin(2 pi u), not even.
PhaseCoupling skewed(double c) {
  return PhaseCoupling(
      "skewed", [c](double u) { return std::cos(2 * pi * u) + c * std::sin(2 * pi * u); },
      [c](double u) { return -2 * pi * std::sin(2 * pi * u) + 2 * pi * c * std::cos(2 * pi * u); },
      [c](double u) { return -4 * pi * pi * (std::cos(2 * pi * u) + c * std::sin(2 * pi * u)); }, false);
}

Eigen::VectorXd random_phases(Rng& rng, int n) {
  Eigen::VectorXd t(n);
  for (double& v : t) v = rng.uniform();
  return t;
}

}  // namespace

TEST_CASE("energy, weights and Hessian at simple states") {
  const RingFunction rf(4, cosine_coupling());
  CHECK(rf.value(Eigen::Vector4d::Zero()) == Approx(4.0));
  CHECK((rf.weights(Eigen::Vector4d::Zero()).array() + 4 * pi * pi).abs().maxCoeff() < 1e-12);
  const Eigen::Vector4d alt(0, 0.5, 0, 0.5);
  CHECK(rf.value(alt) == Approx(-4.0));
  CHECK((rf.weights(alt).array() - 4 * pi * pi).abs().maxCoeff() < 1e-9);
  CHECK_THROWS_AS(rf.value(Eigen::Vector3d::Zero()), std::invalid_argument);
}

TEST_CASE("S1 and dihedral invariance of the ring energy") {
  Rng rng(2);
  for (int n : {3, 5, 8}) {
    const RingFunction rf(n, two_harmonic_coupling(1.0, 0.05));
    for (int s = 0; s < 20; ++s) {
      const Eigen::VectorXd t = random_phases(rng, n);
      const double e = rf.value(t);
      CHECK(rf.value((t.array() + rng.uniform()).matrix()) == Approx(e).epsilon(1e-12));
      Eigen::VectorXd rot(n), ref(n);
      for (int i = 0; i < n; ++i) {
        rot[i] = t[(i + 1) % n];
        ref[i] = t[n - 1 - i];
      }
      CHECK(rf.value(rot) == Approx(e).epsilon(1e-12));
      CHECK(rf.value(ref) == Approx(e).epsilon(1e-12));
    }
  }
}

TEST_CASE("gradient and Hessian match finite differences") {
  Rng rng(3);
  const RingFunction rf(6, two_harmonic_coupling(1.0, 0.05));
  auto value = [&rf](const Eigen::VectorXd& x) { return rf.value(x); };
  auto grad = [&rf](const Eigen::VectorXd& x) { return rf.gradient(x); };
  for (int s = 0; s < 20; ++s) {
    const Eigen::VectorXd t = random_phases(rng, 6);
    CHECK((rf.gradient(t) - oracle::fd_gradient(value, t)).cwiseAbs().maxCoeff() < 1e-6);
    CHECK((rf.hessian(t) - oracle::fd_jacobian(grad, t)).cwiseAbs().maxCoeff() < 1e-4);
  }
}

TEST_CASE("difference coordinates") {
  const Eigen::Vector4d t(0.1, 0.35, 0.9, 0.2);
  const Eigen::VectorXd x = ring_differences(t);
  CHECK(x[0] == Approx(0.25));
  CHECK(x[1] == Approx(0.55));
  CHECK(x[2] == Approx(0.3));
  CHECK(x[3] == Approx(0.9));
  const Eigen::VectorXd back = phases_from_differences(x);
  CHECK(back[0] == 0.0);
  CHECK(ring_distance(back, t) < 1e-12);

  // Rotations, reflections and global shifts are identified.
  const Eigen::Vector4d a(0, 0.1, 0.3, 0.6), b(0.85, 0.55, 0.35, 0.25);
  CHECK(ring_distance(a, b) < 1e-12);
  CHECK(ring_distance(a, Eigen::Vector4d(0, 0.5, 0, 0.5)) > 0.1);
  CHECK(oracle::max_abs_diff(canonical_differences(a), canonical_differences(b)) < 1e-12);
}

TEST_CASE("cosine n = 4 enumeration") {
  const RingFunction rf(4, cosine_coupling());
  const auto eqs = enumerate_equilibria(rf);
  std::set<long> energies;
  for (const auto& e : eqs) energies.insert(std::lround(e.energy));
  CHECK(energies == std::set<long>{-4, 0, 4});
  REQUIRE(eqs.size() >= 3);
  CHECK(eqs[0].isotropy == Isotropy::synchronous);
  CHECK(eqs[1].isotropy == Isotropy::twisted);
  CHECK(eqs[1].energy == Approx(0.0).epsilon(1e-12));
  CHECK(eqs[2].isotropy == Isotropy::antiphase);
  CHECK(eqs[2].energy == Approx(-4.0));
  CHECK(eqs[2].eigen == Stability::stable);
  CHECK(eqs[0].eigen == Stability::unstable);
  const bool has_boundary =
      std::any_of(eqs.begin(), eqs.end(), [](const RingEquilibrium& e) { return e.boundary; });
  CHECK(has_boundary);
}

TEST_CASE("cosine n = 5 enumeration") {
  const RingFunction rf(5, cosine_coupling());
  const auto eqs = enumerate_equilibria(rf);
  int twisted = 0, interior = 0;
  for (const auto& e : eqs) {
    CHECK(e.residual <= 1e-10);
    CHECK(e.consistent());
    if (e.isotropy == Isotropy::twisted) {
      ++twisted;
      CHECK(e.energy == Approx(5 * std::cos(2 * pi * e.m / 5.0)));
    }
    if (e.isotropy == Isotropy::trivial && !e.boundary) {
      ++interior;
      // One difference of 1/3 and four of 1/6 sum to 1.
      CHECK(*e.xi == Approx(1.0 / 3));
      CHECK(*e.eta == Approx(1.0 / 6));
      CHECK(e.p == 1);
      CHECK(e.q == 4);
      CHECK(e.eigen == Stability::unstable);
    }
  }
  CHECK(twisted == 2);
  CHECK(interior == 1);
}

TEST_CASE("every representative is an equilibrium with a forced zero mode") {
  for (int n = 3; n <= 8; ++n) {
    const RingFunction rf(n, two_harmonic_coupling(1.0, 0.05));
    for (const auto& e : enumerate_equilibria(rf)) {
      CHECK(rf.gradient(e.theta).cwiseAbs().maxCoeff() <= 1e-10);
      const ZeroModeReport z = zero_mode(rf.hessian(e.theta));
      CHECK(std::abs(z.closest_eigenvalue) <= 1e-9);
      CHECK(z.angle <= 1e-6);
      CHECK(e.consistent());
    }
  }
}

TEST_CASE("stability rules") {
  const RingFunction r4(4, cosine_coupling());
  for (const auto& e : enumerate_equilibria(r4))
    if (e.isotropy == Isotropy::antiphase) CHECK(e.rule == Stability::stable);
  for (int n = 3; n <= 9; ++n) {
    const RingFunction rf(n, cosine_coupling());
    const auto eqs = enumerate_equilibria(rf);
    CHECK(eqs.front().rule == Stability::unstable);
    for (const auto& e : eqs)
      if (e.isotropy == Isotropy::twisted) {
        const double d2 = rf.coupling().d2(static_cast<double>(e.m) / n);
        if (d2 > 1e-9) CHECK(e.eigen == Stability::stable);
        if (d2 < -1e-9) CHECK(e.eigen == Stability::unstable);
      }
  }
}

TEST_CASE("five-cell frustration pattern") {
  const RingFunction rf(5, cosine_coupling());
  // Four anti-aligned neighbour pairs and one aligned pair.
  const Eigen::VectorXd theta = phases_from_differences(Eigen::VectorXd{{0.5, 0.5, 0.5, 0.5, 0.0}});
  CHECK(rf.gradient(theta).cwiseAbs().maxCoeff() < 1e-12);
  const Eigen::VectorXd w = rf.weights(theta);
  CHECK(std::count_if(w.begin(), w.end(), [](double v) { return v > 0; }) == 4);
  const auto eqs = enumerate_equilibria(rf);
  const int idx = match_equilibrium(rf, eqs, theta);
  REQUIRE(idx >= 0);
  CHECK(eqs[idx].boundary);
  CHECK(eqs[idx].inertia == Inertia{1, 1, 3});
  CHECK(eqs[idx].eigen == Stability::unstable);
}

TEST_CASE("conditions are enforced before enumeration") {
  CHECK_THROWS_AS(enumerate_equilibria(RingFunction(5, cosine_coupling(-1))), std::domain_error);
  CHECK_THROWS_AS(enumerate_equilibria(RingFunction(5, two_harmonic_coupling(1, 0.5))), std::domain_error);
  CHECK_THROWS_AS(RingFunction(5, skewed(0.3)), std::domain_error);
  CHECK_NOTHROW(RingFunction(6, skewed(0.3)));
}

TEST_CASE("bipartite Hessian reproduces the Figure 4 pattern") {
  const CellGraph g = oracle::load_fixture("fig4.json");
  const PhaseCoupling d = skewed(0.4);
  Rng rng(8);
  const Eigen::VectorXd theta = random_phases(rng, 7);
  // Weights a_ij = delta''(theta_i - theta_j) with i in {2, 4, 5}.
  const WeightedLaplacian h = bipartite_s1_hessian(g, d, theta, 2);
  auto a = [&](int i, int j) { return d.d2(theta[i - 1] - theta[j - 1]); };
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(7, 7);
  auto put = [&](int i, int j) {
    const double w = a(i, j);
    expect(i - 1, j - 1) = expect(j - 1, i - 1) = -w;
    expect(i - 1, i - 1) += w;
    expect(j - 1, j - 1) += w;
  };
  put(2, 1);
  put(2, 3);
  put(4, 3);
  put(5, 3);
  put(4, 6);
  put(5, 7);
  CHECK((h.matrix() - expect).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((h.matrix() * Eigen::VectorXd::Ones(7)).cwiseAbs().maxCoeff() < 1e-10);

  // The S1 function itself has this Hessian.
  const S1Function f(g, d, 2);
  CHECK((f.hessian(theta) - expect).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(bipartite_s1_hessian(ring(5), d, Eigen::VectorXd::Zero(5)), std::domain_error);
  const WeightedLaplacian sync = bipartite_s1_hessian(g, cosine_coupling(), Eigen::VectorXd::Zero(7));
  CHECK((sync.matrix() + 4 * pi * pi * laplacian_matrix(g)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("zero mode geometry") {
  const ZeroModeReport z = zero_mode(laplacian_matrix(ring(6)));
  CHECK(z.null_dimension == 1);
  CHECK(z.angle < 1e-12);
}

TEST_CASE("ground states of small rings") {
  const RingFunction r4(4, cosine_coupling());
  const GroundStateReport g4 = ground_state(r4, 40, 1);
  CHECK(g4.formula_energy == Approx(-4.0));
  CHECK(g4.empirical_energy == Approx(-4.0).epsilon(1e-8));
  CHECK(g4.agrees);

  const RingFunction r5(5, cosine_coupling());
  const GroundStateReport g5 = ground_state(r5, 40, 1);
  CHECK(g5.formula_energy == Approx(5 * std::cos(4 * pi / 5)));
  CHECK(std::abs(g5.empirical_energy - g5.formula_energy) <= 1e-6);
  CHECK(g5.state_distance <= 1e-6);
}

TEST_CASE("isotropy and stability strings") {
  CHECK(to_string(Isotropy::synchronous) == "D_n");
  CHECK(to_string(Isotropy::twisted) == "Z_n(tau,m/n)");
  CHECK(to_string(Isotropy::antiphase) == "Z_n(tau,1/2)");
  CHECK(to_string(Isotropy::trivial) == "1");
  CHECK(stability_from_inertia({0, 1, 3}) == Stability::stable);
  CHECK(stability_from_inertia({0, 2, 2}) == Stability::degenerate);
  CHECK(stability_from_inertia({1, 2, 1}) == Stability::unstable);
}
