#pragma once

#include <span>

#include <Eigen/Dense>

#include "ccn/graph.hpp"

namespace ccn {

/// Counts of negative, zero and positive eigenvalues.
struct Inertia {
  int n_minus = 0;
  int n_zero = 0;
  int n_plus = 0;
  friend bool operator==(const Inertia&, const Inertia&) = default;
};

/// Eigenvalues of a symmetric matrix, ascending.
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m);

/// Relative zero threshold: max(1e-9 * max|lambda|, 1e-12).
double zero_threshold(const Eigen::VectorXd& eigenvalues);

/// tau < 0 selects zero_threshold(eigenvalues).
Inertia inertia(const Eigen::VectorXd& eigenvalues, double tau = -1.0);
Inertia inertia(const Eigen::MatrixXd& symmetric);

Eigen::MatrixXd adjacency_matrix(const CellGraph& g);
/// Standard Laplacian D - A.
Eigen::MatrixXd laplacian_matrix(const CellGraph& g);
Eigen::VectorXd laplacian_spectrum(const CellGraph& g);
/// Largest standard-Laplacian eigenvalue.
double laplacian_max(const CellGraph& g);

/// L_w with diag(v) = sum of incident weights and offdiag(u,v) = -w_uv.
/// Weights are indexed like g.edges().
class WeightedLaplacian {
 public:
  WeightedLaplacian(const CellGraph& g, std::span<const double> weights);

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  Eigen::VectorXd eigenvalues() const { return symmetric_eigenvalues(matrix_); }
  Inertia inertia(double tau = -1.0) const { return ccn::inertia(eigenvalues(), tau); }

 private:
  Eigen::VectorXd weights_;
  Eigen::MatrixXd matrix_;
};

/// mu_i = (alpha + beta) d - beta lambda_i for a d-regular graph, ascending.
/// std::domain_error if g is not regular.
Eigen::VectorXd synchronous_hessian_spectrum(const CellGraph& g, double alpha, double beta);

/// Spectrum of the synchronous Hessian on K_{m,n}, m != n, ascending:
/// n alpha (m-1 times), m alpha (n-1 times) and
/// ((m+n) alpha +- sqrt((m-n)^2 alpha^2 + 4 m n beta^2)) / 2.
Eigen::VectorXd kmn_hessian_spectrum(int m, int n, double alpha, double beta);

/// Smallest eigenvalue of the two-colour Hessian on a (d,m)-graph:
/// (d/2) ((alpha + gamma) - sqrt((alpha - gamma)^2 + 4 beta^2)).
double dm_two_colour_min_eigenvalue(int d, double alpha, double gamma, double beta);

/// Hessian shape diag(d(v) alpha_v) + beta A, with alpha_v = alpha on part1 of
/// `parts` and gamma on part2 (pass gamma = alpha for the synchronous shape).
Eigen::MatrixXd structured_hessian(const CellGraph& g, const Bipartition& parts, double alpha, double gamma,
                                   double beta);
/// d(v) alpha on the diagonal, beta on edges.
Eigen::MatrixXd synchronous_hessian(const CellGraph& g, double alpha, double beta);

/// Inertia window for a weighted Laplacian from the sign pattern of its weights.
///
/// With c(G+), c(G-) the component counts of the positive- and negative-weight
/// subgraphs on all n vertices and k the component count of the nonzero-weight
/// subgraph:
///   c(G+) - k <= n_minus <= n - c(G-)
///   c(G-) - k <= n_plus  <= n - c(G+)
///   k <= n_zero <= n + 2k - c(G-) - c(G+)
/// For k = 1 these are the usual connected-graph bounds.
struct InertiaBounds {
  int c_plus = 0;
  int c_minus = 0;
  int components = 0;
  int n_minus_lo = 0, n_minus_hi = 0;
  int n_plus_lo = 0, n_plus_hi = 0;
  int n_zero_lo = 0, n_zero_hi = 0;

  bool contains(const Inertia& in) const;
};

/// `signs` holds -1, 0 or +1 per edge of g (indexed like g.edges()).
InertiaBounds inertia_bounds(const CellGraph& g, std::span<const int> signs);
/// Signs taken from weights; zero weights drop their edge.
InertiaBounds inertia_bounds_from_weights(const CellGraph& g, std::span<const double> weights);

}  // namespace ccn
