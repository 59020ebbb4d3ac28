#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace ccn {

using ConstSpan = std::span<const double>;
using MutSpan = std::span<double>;

/// Central-difference steps used whenever analytic derivatives are missing.
inline constexpr double kFirstDiffStep = 1e-5;
inline constexpr double kSecondDiffStep = 1e-4;

/// Second partials of a two-cell coupling at (x, y), cell dimension 1.
struct SecondPartials {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;
};

/// Smooth coupling beta: R^k x R^k -> R between two cells.
///
/// Derivatives are analytic when supplied and otherwise fall back to central
/// differences (first partials with step 1e-5, second partials by differencing
/// the gradient with step 1e-4). Second partials are only defined for k = 1.
/// The object is immutable; evaluators must be pure so that a single
/// instance can be shared across threads.
class CouplingFunction {
 public:
  using Value = std::function<double(ConstSpan x, ConstSpan y)>;
  using Gradient = std::function<void(ConstSpan x, ConstSpan y, MutSpan gx, MutSpan gy)>;
  using ScalarValue = std::function<double(double x, double y)>;
  using ScalarGradient = std::function<std::pair<double, double>(double x, double y)>;
  using ScalarHessian = std::function<SecondPartials(double x, double y)>;

  /// General k-dimensional coupling.
  CouplingFunction(int k, Value value, bool z2_invariant, Gradient gradient = {});

  /// k = 1 coupling with optional analytic first and second partials.
  static CouplingFunction scalar(ScalarValue value, bool z2_invariant, ScalarGradient gradient = {},
                                 ScalarHessian hessian = {});

  int arity() const { return k_; }
  bool z2_invariant() const { return z2_; }
  bool has_analytic_gradient() const { return static_cast<bool>(gradient_); }
  bool has_analytic_hessian() const { return static_cast<bool>(hessian_); }

  double operator()(ConstSpan x, ConstSpan y) const { return value_(x, y); }
  double operator()(double x, double y) const;

  void gradient(ConstSpan x, ConstSpan y, MutSpan gx, MutSpan gy) const;
  /// (d/dx, d/dy) for k = 1.
  std::pair<double, double> gradient(double x, double y) const;
  /// k = 1 only; throws std::domain_error otherwise.
  SecondPartials hessian(double x, double y) const;

  /// Coefficient table c(i, j) of x^i y^j when built by polynomial_coupling.
  const std::optional<Eigen::MatrixXd>& polynomial_coefficients() const { return poly_; }

 private:
  CouplingFunction() = default;

  int k_ = 1;
  bool z2_ = false;
  Value value_;
  Gradient gradient_;
  ScalarHessian hessian_;
  std::optional<Eigen::MatrixXd> poly_;

  friend CouplingFunction polynomial_coupling(const Eigen::MatrixXd& coeffs, bool z2_invariant);
};

/// Bivariate polynomial coupling sum_{i,j} c(i,j) x^i y^j with exact derivatives.
/// Throws std::invalid_argument if z2_invariant is claimed but c is not symmetric.
CouplingFunction polynomial_coupling(const Eigen::MatrixXd& coeffs, bool z2_invariant);

/// True if the polynomial has a monomial in only one of the two variables.
bool has_single_variable_terms(const Eigen::MatrixXd& coeffs);

/// Self-connection alpha_d: R^k -> R shared by all cells of degree d (per part).
class SelfConnection {
 public:
  using Value = std::function<double(ConstSpan x)>;
  using Gradient = std::function<void(ConstSpan x, MutSpan g)>;
  using ScalarFn = std::function<double(double)>;

  SelfConnection(int degree, int k, Value value, Gradient gradient = {});
  static SelfConnection scalar(int degree, ScalarFn value, ScalarFn d1 = {}, ScalarFn d2 = {});

  int degree() const { return degree_; }
  int arity() const { return k_; }
  double operator()(ConstSpan x) const { return value_(x); }
  void gradient(ConstSpan x, MutSpan g) const;
  /// k = 1 only.
  double second_derivative(double x) const;

 private:
  int degree_;
  int k_;
  Value value_;
  Gradient gradient_;
  ScalarFn d2_;
};

/// Univariate polynomial sum_i c[i] x^i as a self-connection for degree class d.
SelfConnection polynomial_self_connection(int degree, std::vector<double> coeffs);

/// Phase coupling delta on the rescaled circle S^1 = [0, 1).
///
/// Evaluated on the real line; built-in families are 1-periodic by
/// construction, user-supplied ones are checked by check_ring_conditions.
class PhaseCoupling {
 public:
  using Fn = std::function<double(double)>;

  PhaseCoupling(std::string name, Fn value, Fn d1, Fn d2, bool even);

  const std::string& name() const { return name_; }
  bool even() const { return even_; }
  double operator()(double u) const { return value_(u); }
  double d1(double u) const { return d1_(u); }
  double d2(double u) const { return d2_(u); }

 private:
  std::string name_;
  Fn value_;
  Fn d1_;
  Fn d2_;
  bool even_;
};

/// delta(u) = a cos(2 pi u).
PhaseCoupling cosine_coupling(double a = 1.0);
/// delta(u) = a cos(2 pi u) + b cos(4 pi u).
PhaseCoupling two_harmonic_coupling(double a, double b);
/// Built-in family by name: "cosine" {a} or "two_harmonic" {a, b}.
PhaseCoupling builtin_phase_family(std::string_view name, std::span<const double> params);

/// The bivariate coupling beta(x, y) = delta(x - y).
CouplingFunction as_bivariate(const PhaseCoupling& delta);

/// Sampled verdicts on the four ring conditions:
///   C1 delta even and 1-periodic,
///   C2 delta' vanishes on [0, 1/2] only at 0 and 1/2,
///   C3 delta'' monotone on (0, 1/2),
///   C4 delta''(0) < 0 < delta''(1/2).
/// A grid cannot prove C2/C3, hence `sampled` is always true.
struct RingConditionReport {
  bool c1 = false;
  bool c2 = false;
  bool c3 = false;
  bool c4 = false;
  bool sampled = true;
  int grid_size = 0;
  /// Interior zeros of delta' on (0, 1/2), refined by bisection.
  std::vector<double> derivative_zeros;

  bool all() const { return c1 && c2 && c3 && c4; }
};

/// Requires grid_size >= 64.
RingConditionReport check_ring_conditions(const PhaseCoupling& delta, int grid_size = 1024);

/// Sample-based diagnostics for a coupling's stated invariants.
struct CouplingDiagnostics {
  double max_swap_error = 0.0;          // |phi(x,y) - phi(y,x)|
  double max_gradient_rel_error = 0.0;  // analytic vs central differences
  double max_hessian_rel_error = 0.0;   // analytic vs differenced gradient (k = 1)
};

CouplingDiagnostics diagnose_coupling(const CouplingFunction& phi, int samples, std::uint64_t seed,
                                      double box = 1.0);

}  // namespace ccn
