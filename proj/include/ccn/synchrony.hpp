#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ccn/coupling.hpp"
#include "ccn/graph.hpp"
#include "ccn/spectra.hpp"

namespace ccn {

enum class Verdict { minimum, saddle, maximum, degenerate };
std::string to_string(Verdict v);

/// Verdict from a spectrum: degenerate if any |mu| <= tau, otherwise by sign pattern.
Verdict verdict_from_spectrum(const Eigen::VectorXd& mu, double tau = -1.0);

/// Classified synchronous or two-colour critical point (k = 1).
struct SyncClassification {
  std::vector<double> point;  // {x0} or {x0, y0}
  double alpha = 0.0;         // phi_11
  double beta = 0.0;          // phi_12
  std::optional<double> gamma;  // phi_22, two-colour only
  Verdict verdict = Verdict::degenerate;       // closed-form criterion
  Eigen::VectorXd closed_form_spectrum;        // Eq.-style formula where one exists
  Inertia inertia;                             // eigensolve of the assembled Hessian
  Verdict eigen_verdict = Verdict::degenerate;
  bool wedge = false;  // network minimum but not a coupling minimum
  bool coupling_minimum = false;

  int index() const { return inertia.n_minus; }
};

struct SyncCriticalSet {
  std::vector<double> roots;
  /// g(t) = phi_1(t,t) + phi_2(t,t) vanishes on the whole search interval.
  bool continuum = false;
};

/// Roots of g(t) = phi_1(t,t) + phi_2(t,t) in [lo, hi]: grid, bisection, Newton
/// polish to |g| <= 1e-10, roots merged within 1e-8.
SyncCriticalSet find_synchronous_critical(const CouplingFunction& phi, double lo, double hi, int grid = 512);

/// Prop 3.1 inequalities for a d-regular graph with largest Laplacian
/// eigenvalue lambda: alpha + beta > 0 and alpha + (1 - lambda/d) beta > 0.
/// The eigen verdict comes from d alpha I + beta A.
SyncClassification classify_synchronous_params(const CellGraph& g, double alpha, double beta);

/// Evaluates alpha, beta at (x0, x0) and classifies. std::domain_error if g
/// is not regular or x0 is not a critical point (|phi_1 + phi_2| > 1e-8).
SyncClassification classify_synchronous(const CellGraph& g, const CouplingFunction& phi, double x0);

/// Whether (alpha, beta) is a strict local minimum of phi along the
/// synchronous Hessian [[alpha, beta], [beta, alpha]]: alpha +- beta > 0.
bool coupling_minimum(double alpha, double beta);

/// Wedge {alpha - beta < 0, alpha + (1 - lambda/d) beta > 0} of a regular graph.
struct Wedge {
  int d = 0;
  double lambda_max = 0.0;
  double slope = 0.0;  // 1 - lambda/d
  /// Opening angle in radians, atan2(1, lambda/d - 1) - pi/4.
  double angle = 0.0;
  bool empty = false;    // lambda = 2d
  bool maximal = false;  // lambda = d + 1

  bool contains(double alpha, double beta) const;
};
Wedge wedge_region(const CellGraph& g);

struct TwoColourPattern {
  Bipartition parts;
  double x0 = 0.0;
  double y0 = 0.0;
  /// Cells of part1 take x0, cells of part2 take y0.
  Eigen::VectorXd state(int n) const;
};

struct TwoColourSet {
  std::vector<TwoColourPattern> patterns;
  /// Newton met a singular curve of critical pairs of phi.
  bool continuum = false;
};

/// Critical pairs (x0, y0), x0 != y0, of phi in [lo, hi]^2 laid on the
/// bipartition of g. Empty for non-bipartite g. For Z2-invariant phi each
/// pattern is accompanied by its swap (y0, x0).
TwoColourSet find_two_colour_critical(const CellGraph& g, const CouplingFunction& phi, double lo, double hi,
                                      int grid = 64);

/// Prop 3.8 criterion alpha > 0 and alpha gamma - beta^2 > 0, checked against
/// the assembled Hessian diag(d alpha, d gamma) + beta A. Requires a (d,m)-graph.
SyncClassification classify_two_colour_params(const CellGraph& g, double alpha, double gamma, double beta);
SyncClassification classify_two_colour(const CellGraph& g, const CouplingFunction& phi,
                                       const TwoColourPattern& pattern);

/// Synchronous and two-colour critical sets side by side; `shared_values`
/// lists values that occur in both (e.g. x0 of a synchronous point reused as
/// one colour of a two-colour point).
struct CoexistenceReport {
  SyncCriticalSet synchronous;
  TwoColourSet two_colour;
  std::vector<double> shared_values;
};
CoexistenceReport coexistence_report(const CellGraph& g, const CouplingFunction& phi, double lo, double hi);

}  // namespace ccn
