#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ccn/coupling.hpp"
#include "ccn/flow.hpp"
#include "ccn/graph.hpp"
#include "ccn/spectra.hpp"

namespace ccn {

/// Phase-difference function h(theta) = sum over edges of delta(theta_head - theta_tail).
///
/// For even delta the orientation is irrelevant. Otherwise the graph must be
/// bipartite and every edge is read from its endpoint in part `head_side`
/// (1 or 2). Phases live on [0, 1).
class S1Function {
 public:
  S1Function(CellGraph g, PhaseCoupling delta, int head_side = 1);

  const CellGraph& graph() const { return graph_; }
  const PhaseCoupling& coupling() const { return delta_; }
  int size() const { return graph_.size(); }
  /// Edges as (head, tail), indexed like graph().edges().
  const std::vector<Edge>& oriented_edges() const { return oriented_; }

  double value(const Eigen::VectorXd& theta) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& theta) const;
  /// delta''(theta_head - theta_tail) per edge.
  Eigen::VectorXd weights(const Eigen::VectorXd& theta) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& theta) const;

 private:
  void check(const Eigen::VectorXd& theta) const;

  CellGraph graph_;
  PhaseCoupling delta_;
  std::vector<Edge> oriented_;
};

/// Hessian of the S1-invariant function on a bipartite graph as a weighted
/// Laplacian, weights delta''(theta_i - theta_j) with i in part `head_side`.
/// std::domain_error for non-bipartite g with a non-even delta.
WeightedLaplacian bipartite_s1_hessian(const CellGraph& g, const PhaseCoupling& delta, const Eigen::VectorXd& theta,
                                       int head_side = 1);

/// h on the n-ring, edges {i, i+1}. A non-even delta needs n even and is read
/// from the odd-labelled cells.
class RingFunction : public S1Function {
 public:
  RingFunction(int n, PhaseCoupling delta);
};

/// x_i = theta_{i+1} - theta_i mod 1, theta_{n+1} = theta_1.
Eigen::VectorXd ring_differences(const Eigen::VectorXd& theta);
/// Phases with theta_1 = 0 from a difference vector.
Eigen::VectorXd phases_from_differences(const Eigen::VectorXd& x);
/// Lexicographically smallest difference vector over the 2n dihedral images
/// (entries compared with tolerance 1e-7, values within 1e-9 of 1 read as 0).
Eigen::VectorXd canonical_differences(const Eigen::VectorXd& theta);
/// Minimum over dihedral images of the largest circular distance between
/// difference vectors; zero iff the states agree mod D_n x S^1.
double ring_distance(const Eigen::VectorXd& theta_a, const Eigen::VectorXd& theta_b);

enum class Isotropy { synchronous, twisted, antiphase, trivial };
/// "D_n", "Z_n(tau,m/n)", "Z_n(tau,1/2)", "1".
std::string to_string(Isotropy iso);

enum class Stability { stable, unstable, degenerate, undetermined };
std::string to_string(Stability s);

struct RingEquilibrium {
  Isotropy isotropy = Isotropy::synchronous;
  int m = 0;
  int p = 0;  // count of xi differences (trivial isotropy)
  int q = 0;  // count of eta differences
  std::optional<double> xi;
  std::optional<double> eta;
  bool boundary = false;   // differences in {0, 1/2}
  bool continuum = false;  // member of a one-parameter family of equilibria
  Eigen::VectorXd theta;
  Eigen::VectorXd differences;
  double energy = 0.0;
  double residual = 0.0;  // |grad h|_inf at theta
  Eigen::VectorXd weights;
  Eigen::VectorXd eigenvalues;
  Inertia inertia;
  Stability rule = Stability::undetermined;  // from the stability propositions
  Stability eigen = Stability::undetermined;  // from the inertia

  /// Rule verdict does not contradict the eigensolver.
  bool consistent() const;
};

/// Eigen verdict with one forced zero mode: n_minus >= 1 unstable,
/// n_minus = 0 and n_zero = 1 stable, otherwise degenerate.
Stability stability_from_inertia(const Inertia& in);

struct EnumerationOptions {
  int grid = 1024;  // scan resolution for the interior two-value families
};

/// All equilibria of h on the n-ring up to D_n x S^1: synchronous,
/// Z_n(tau, m/n) for 0 < m < n/2, Z_n(tau, 1/2) for even n, {0, 1/2}
/// difference patterns with an even number (>= 2) of 1/2 entries and at least
/// one 0, and two-value patterns xi, eta in (0, 1/2) with p xi + q eta = m.
/// std::domain_error unless delta passes the ring conditions.
std::vector<RingEquilibrium> enumerate_equilibria(const RingFunction& rf, const EnumerationOptions& opt = {});

/// Fills residual, weights, spectrum, inertia and both verdicts.
void classify_stability(const RingFunction& rf, RingEquilibrium& eq);

/// Index of the equilibrium matching theta mod D_n x S^1, or -1. Continuum
/// families match any member with the same xi/eta arrangement.
int match_equilibrium(const RingFunction& rf, const std::vector<RingEquilibrium>& eqs,
                      const Eigen::VectorXd& theta, double tol = 1e-6);

/// Zero-mode check: eigenvalue closest to 0 and the angle between 1/sqrt(n)
/// and the numerical null space (eigenvectors with |lambda| <= tau).
struct ZeroModeReport {
  double closest_eigenvalue = 0.0;
  double angle = 0.0;
  int null_dimension = 0;
};
ZeroModeReport zero_mode(const Eigen::MatrixXd& hessian);

struct GroundStateReport {
  int n = 0;
  double formula_energy = 0.0;
  Eigen::VectorXd formula_theta;
  double empirical_energy = 0.0;
  Eigen::VectorXd empirical_theta;  // canonical representative
  double state_distance = 0.0;      // ring_distance(formula, empirical)
  int starts = 0;
  int converged = 0;
  int basins = 0;
  bool agrees = false;
};

/// Formula ground state (differences 1/2 for even n, 1/2 - 1/(2n) for odd n)
/// against the best of `starts` seeded gradient flows on the torus.
GroundStateReport ground_state(const RingFunction& rf, int starts, std::uint64_t seed, double tol = 1e-6,
                               const FlowConfig& cfg = {});

/// Multistart flow on the ring torus with D_n x S^1 clustering.
MultistartResult ring_multistart(const RingFunction& rf, int starts, std::uint64_t seed, const FlowConfig& cfg = {});

}  // namespace ccn
