#include "ccn/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccn/errors.hpp"

namespace ccn {

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix is not square");
  if (m.size() == 0) return {};
  if (!m.allFinite()) throw NumericalError("non-finite matrix entry");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
  return solver.eigenvalues();  // ascending
}

double zero_threshold(const Eigen::VectorXd& eigenvalues) {
  const double radius = eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  return std::max(1e-9 * radius, 1e-12);
}

Inertia inertia(const Eigen::VectorXd& eigenvalues, double tau) {
  if (tau < 0.0) tau = zero_threshold(eigenvalues);
  Inertia in;
  for (double l : eigenvalues) {
    if (l < -tau)
      ++in.n_minus;
    else if (l > tau)
      ++in.n_plus;
    else
      ++in.n_zero;
  }
  return in;
}

Inertia inertia(const Eigen::MatrixXd& symmetric) { return inertia(symmetric_eigenvalues(symmetric)); }

Eigen::MatrixXd adjacency_matrix(const CellGraph& g) {
  const int n = g.size();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) a(e.u - 1, e.v - 1) = a(e.v - 1, e.u - 1) = 1.0;
  return a;
}

Eigen::MatrixXd laplacian_matrix(const CellGraph& g) {
  Eigen::MatrixXd l = -adjacency_matrix(g);
  for (Vertex v = 1; v <= g.size(); ++v) l(v - 1, v - 1) = g.degree(v);
  return l;
}

Eigen::VectorXd laplacian_spectrum(const CellGraph& g) { return symmetric_eigenvalues(laplacian_matrix(g)); }

double laplacian_max(const CellGraph& g) { return laplacian_spectrum(g).maxCoeff(); }

WeightedLaplacian::WeightedLaplacian(const CellGraph& g, std::span<const double> weights) {
  const auto& edges = g.edges();
  if (weights.size() != edges.size())
    throw std::invalid_argument("expected " + std::to_string(edges.size()) + " edge weights, got " +
                                std::to_string(weights.size()));
  const int n = g.size();
  weights_ = Eigen::Map<const Eigen::VectorXd>(weights.data(), static_cast<Eigen::Index>(weights.size()));
  matrix_ = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const int a = edges[i].u - 1, b = edges[i].v - 1;
    const double w = weights[i];
    matrix_(a, a) += w;
    matrix_(b, b) += w;
    matrix_(a, b) -= w;
    matrix_(b, a) -= w;
  }
}

Eigen::VectorXd synchronous_hessian_spectrum(const CellGraph& g, double alpha, double beta) {
  const auto d = is_regular(g);
  if (!d) throw std::domain_error("synchronous spectrum formula needs a regular graph");
  Eigen::VectorXd mu = ((alpha + beta) * *d) - beta * laplacian_spectrum(g).array();
  std::sort(mu.begin(), mu.end());
  return mu;
}

Eigen::VectorXd kmn_hessian_spectrum(int m, int n, double alpha, double beta) {
  if (m < 2 || n < 2) throw std::invalid_argument("K_{m,n} spectrum needs m, n >= 2");
  if (m == n) throw std::domain_error("K_{n,n} is regular; use the synchronous spectrum");
  Eigen::VectorXd mu(m + n);
  int i = 0;
  for (int j = 0; j < m - 1; ++j) mu[i++] = n * alpha;
  for (int j = 0; j < n - 1; ++j) mu[i++] = m * alpha;
  const double disc = std::sqrt(double(m - n) * (m - n) * alpha * alpha + 4.0 * m * n * beta * beta);
  mu[i++] = 0.5 * ((m + n) * alpha + disc);
  mu[i++] = 0.5 * ((m + n) * alpha - disc);
  std::sort(mu.begin(), mu.end());
  return mu;
}

double dm_two_colour_min_eigenvalue(int d, double alpha, double gamma, double beta) {
  if (d < 1) throw std::invalid_argument("degree must be >= 1");
  return 0.5 * d * ((alpha + gamma) - std::hypot(alpha - gamma, 2.0 * beta));
}

Eigen::MatrixXd structured_hessian(const CellGraph& g, const Bipartition& parts, double alpha, double gamma,
                                   double beta) {
  Eigen::MatrixXd h = beta * adjacency_matrix(g);
  for (Vertex v = 1; v <= g.size(); ++v) h(v - 1, v - 1) = g.degree(v) * (parts.side(v) == 1 ? alpha : gamma);
  return h;
}

Eigen::MatrixXd synchronous_hessian(const CellGraph& g, double alpha, double beta) {
  Eigen::MatrixXd h = beta * adjacency_matrix(g);
  for (Vertex v = 1; v <= g.size(); ++v) h(v - 1, v - 1) = g.degree(v) * alpha;
  return h;
}

bool InertiaBounds::contains(const Inertia& in) const {
  return in.n_minus >= n_minus_lo && in.n_minus <= n_minus_hi && in.n_plus >= n_plus_lo &&
         in.n_plus <= n_plus_hi && in.n_zero >= n_zero_lo && in.n_zero <= n_zero_hi;
}

InertiaBounds inertia_bounds(const CellGraph& g, std::span<const int> signs) {
  const auto& edges = g.edges();
  if (signs.size() != edges.size())
    throw std::invalid_argument("expected " + std::to_string(edges.size()) + " edge signs, got " +
                                std::to_string(signs.size()));
  std::vector<Edge> plus, minus, nonzero;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (signs[i] > 0) plus.push_back(edges[i]);
    if (signs[i] < 0) minus.push_back(edges[i]);
    if (signs[i] != 0) nonzero.push_back(edges[i]);
  }
  const int n = g.size();
  InertiaBounds b;
  b.c_plus = count_components(n, plus);
  b.c_minus = count_components(n, minus);
  b.components = count_components(n, nonzero);
  const int k = b.components;
  b.n_minus_lo = b.c_plus - k;
  b.n_minus_hi = n - b.c_minus;
  b.n_plus_lo = b.c_minus - k;
  b.n_plus_hi = n - b.c_plus;
  b.n_zero_lo = k;
  b.n_zero_hi = n + 2 * k - b.c_minus - b.c_plus;
  return b;
}

InertiaBounds inertia_bounds_from_weights(const CellGraph& g, std::span<const double> weights) {
  std::vector<int> signs;
  for (double w : weights) signs.push_back(w > 0.0 ? 1 : (w < 0.0 ? -1 : 0));
  return inertia_bounds(g, signs);
}

}  // namespace ccn
