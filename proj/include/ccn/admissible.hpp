#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ccn/coupling.hpp"
#include "ccn/graph.hpp"

namespace ccn {

enum class Form { all_to_all, bipartite_general, symmetric };

std::string to_string(Form form);
/// Parses "all_to_all", "bipartite_general" or "symmetric".
Form form_from_string(const std::string& name);

/// Network function assembled from a coupling and per-degree self-connections.
///
///   symmetric:          sum_edges beta(x_u, x_v) + sum_v alpha_{d(v)}(x_v), beta Z2-invariant
///   bipartite_general:  sum_edges beta(x_{V1 end}, x_{V2 end})
///                       + sum_{v in V1} alpha_{d(v)}(x_v) + sum_{v in V2} gamma_{d(v)}(x_v)
///   all_to_all:         complete graph, symmetric form plus optional
///                       sum_j c_j e_j(x) over elementary symmetric polynomials, j >= 3 (k = 1)
///
/// Degrees without a self-connection contribute nothing. State vectors are
/// laid out cell by cell: x[(v-1)*k .. v*k).
class AdmissibleFunction {
 public:
  using SelfTable = std::vector<SelfConnection>;

  static AdmissibleFunction symmetric(CellGraph g, CouplingFunction beta, SelfTable alpha = {});
  static AdmissibleFunction bipartite_general(CellGraph g, CouplingFunction beta, SelfTable alpha = {},
                                              SelfTable gamma = {});
  /// `elementary[j]` is the coefficient of e_j; entries 0..2 must be zero.
  static AdmissibleFunction all_to_all(int n, CouplingFunction beta, SelfTable alpha = {},
                                       std::vector<double> elementary = {});

  const CellGraph& graph() const { return graph_; }
  Form form() const { return form_; }
  const CouplingFunction& coupling() const { return beta_; }
  int arity() const { return beta_.arity(); }
  int dimension() const { return arity() * graph_.size(); }
  /// Edges as evaluated: beta(x_first, x_second).
  const std::vector<Edge>& oriented_edges() const { return oriented_; }
  const std::optional<Bipartition>& parts() const { return parts_; }

  double value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  /// k = 1 only; std::domain_error otherwise.
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;

 private:
  AdmissibleFunction(CellGraph g, Form form, CouplingFunction beta);
  void check_dimension(const Eigen::VectorXd& x) const;
  const SelfConnection* self_for(Vertex v) const;
  static std::map<int, SelfConnection> index_table(SelfTable table, int k);

  CellGraph graph_;
  Form form_;
  CouplingFunction beta_;
  std::optional<Bipartition> parts_;
  std::vector<Edge> oriented_;
  std::map<int, SelfConnection> alpha_;
  std::map<int, SelfConnection> gamma_;
  std::vector<double> elementary_;
};

/// One flagged derivative obstruction found by validate_admissibility.
struct AdmissibilityViolation {
  char check;                  // 'a' non-edge mixed partial, 'b' triple partial, 'c' same-degree symmetry
  std::vector<Vertex> cells;
  double magnitude;
  double threshold;
};

struct AdmissibilityReport {
  int samples = 0;
  std::vector<AdmissibilityViolation> violations;
  bool passed() const { return violations.empty(); }
  bool failed(char check) const;
};

/// Samples a black-box f: R^n -> R (k = 1) for the structural obstructions of
/// admissibility: nonzero mixed second partials across non-edges, nonzero
/// mixed third partials over distinct triples (unless g is complete), and
/// asymmetric partials between cells of equal degree. Finite differences use
/// step 1e-3; a value is flagged when it exceeds 1e-4 (1 + |f|).
/// Only the worst violation per check and cell tuple is kept.
AdmissibilityReport validate_admissibility(const CellGraph& g,
                                           const std::function<double(const Eigen::VectorXd&)>& f,
                                           int samples, std::uint64_t seed, double box = 1.0);

}  // namespace ccn
