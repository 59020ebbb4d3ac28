#include "ccn/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ccn/random.hpp"

namespace ccn {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace

// ---------------------------------------------------------------------------
// CouplingFunction

CouplingFunction::CouplingFunction(int k, Value value, bool z2_invariant, Gradient gradient)
    : k_(k), z2_(z2_invariant), value_(std::move(value)), gradient_(std::move(gradient)) {
  if (k < 1) throw std::invalid_argument("coupling arity must be >= 1");
  if (!value_) throw std::invalid_argument("coupling needs an evaluator");
}

CouplingFunction CouplingFunction::scalar(ScalarValue value, bool z2_invariant, ScalarGradient gradient,
                                          ScalarHessian hessian) {
  if (!value) throw std::invalid_argument("coupling needs an evaluator");
  CouplingFunction c;
  c.k_ = 1;
  c.z2_ = z2_invariant;
  c.value_ = [value](ConstSpan x, ConstSpan y) { return value(x[0], y[0]); };
  if (gradient)
    c.gradient_ = [gradient](ConstSpan x, ConstSpan y, MutSpan gx, MutSpan gy) {
      auto [a, b] = gradient(x[0], y[0]);
      gx[0] = a;
      gy[0] = b;
    };
  c.hessian_ = std::move(hessian);
  return c;
}

double CouplingFunction::operator()(double x, double y) const {
  return value_(ConstSpan(&x, 1), ConstSpan(&y, 1));
}

void CouplingFunction::gradient(ConstSpan x, ConstSpan y, MutSpan gx, MutSpan gy) const {
  if (gradient_) {
    gradient_(x, y, gx, gy);
    return;
  }
  const double h = kFirstDiffStep;
  std::vector<double> xs(x.begin(), x.end()), ys(y.begin(), y.end());
  for (int i = 0; i < k_; ++i) {
    const double xi = xs[i];
    xs[i] = xi + h;
    double fp = value_(xs, ys);
    xs[i] = xi - h;
    double fm = value_(xs, ys);
    xs[i] = xi;
    gx[i] = (fp - fm) / (2.0 * h);

    const double yi = ys[i];
    ys[i] = yi + h;
    fp = value_(xs, ys);
    ys[i] = yi - h;
    fm = value_(xs, ys);
    ys[i] = yi;
    gy[i] = (fp - fm) / (2.0 * h);
  }
}

std::pair<double, double> CouplingFunction::gradient(double x, double y) const {
  if (k_ != 1) throw std::domain_error("scalar gradient requires cell dimension 1");
  double gx = 0.0, gy = 0.0;
  gradient(ConstSpan(&x, 1), ConstSpan(&y, 1), MutSpan(&gx, 1), MutSpan(&gy, 1));
  return {gx, gy};
}

SecondPartials CouplingFunction::hessian(double x, double y) const {
  if (k_ != 1) throw std::domain_error("second partials require cell dimension 1");
  if (hessian_) return hessian_(x, y);
  const double h = kSecondDiffStep;
  // Difference the gradient; nested central differences of the value when the
  // gradient itself is numerical.
  auto [gxp, gyp_x] = gradient(x + h, y);
  auto [gxm, gym_x] = gradient(x - h, y);
  auto [gxp_y, gyp] = gradient(x, y + h);
  auto [gxm_y, gym] = gradient(x, y - h);
  SecondPartials s;
  s.xx = (gxp - gxm) / (2.0 * h);
  s.yy = (gyp - gym) / (2.0 * h);
  s.xy = 0.5 * ((gxp_y - gxm_y) + (gyp_x - gym_x)) / (2.0 * h);
  return s;
}

// ---------------------------------------------------------------------------
// Polynomials

namespace {

// sum_i c[i] * falling(i, order) * x^(i - order)
double poly_derivative(std::span<const double> c, double x, int order) {
  double acc = 0.0;
  for (int i = static_cast<int>(c.size()) - 1; i >= order; --i) {
    double factor = 1.0;
    for (int j = 0; j < order; ++j) factor *= (i - j);
    acc = acc * x + c[i] * factor;
  }
  return acc;
}

// d^a/dx^a d^b/dy^b of sum c(i,j) x^i y^j
double bivariate_derivative(const Eigen::MatrixXd& c, double x, double y, int a, int b) {
  double total = 0.0;
  for (int i = static_cast<int>(c.rows()) - 1; i >= a; --i) {
    double fi = 1.0;
    for (int t = 0; t < a; ++t) fi *= (i - t);
    double row = 0.0;
    for (int j = static_cast<int>(c.cols()) - 1; j >= b; --j) {
      double fj = 1.0;
      for (int t = 0; t < b; ++t) fj *= (j - t);
      row = row * y + c(i, j) * fj;
    }
    total = total * x + fi * row;
  }
  // Horner above accumulates powers (i - a) and (j - b) correctly only when
  // each level multiplies once per index step, which holds for dense tables.
  return total;
}

}  // namespace

CouplingFunction polynomial_coupling(const Eigen::MatrixXd& coeffs, bool z2_invariant) {
  if (coeffs.size() == 0) throw std::invalid_argument("empty polynomial coefficient table");
  if (!coeffs.allFinite()) throw std::invalid_argument("non-finite polynomial coefficient");
  const Eigen::Index s = std::max(coeffs.rows(), coeffs.cols());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(s, s);
  c.topLeftCorner(coeffs.rows(), coeffs.cols()) = coeffs;
  if (z2_invariant && c != c.transpose())
    throw std::invalid_argument("coupling flagged Z2-invariant but coefficients are not symmetric");

  CouplingFunction phi = CouplingFunction::scalar(
      [c](double x, double y) { return bivariate_derivative(c, x, y, 0, 0); }, z2_invariant,
      [c](double x, double y) {
        return std::pair{bivariate_derivative(c, x, y, 1, 0), bivariate_derivative(c, x, y, 0, 1)};
      },
      [c](double x, double y) {
        return SecondPartials{bivariate_derivative(c, x, y, 2, 0), bivariate_derivative(c, x, y, 1, 1),
                              bivariate_derivative(c, x, y, 0, 2)};
      });
  phi.poly_ = c;
  return phi;
}

bool has_single_variable_terms(const Eigen::MatrixXd& coeffs) {
  for (Eigen::Index i = 1; i < coeffs.rows(); ++i)
    if (coeffs(i, 0) != 0.0) return true;
  for (Eigen::Index j = 1; j < coeffs.cols(); ++j)
    if (coeffs(0, j) != 0.0) return true;
  return false;
}

// ---------------------------------------------------------------------------
// SelfConnection

SelfConnection::SelfConnection(int degree, int k, Value value, Gradient gradient)
    : degree_(degree), k_(k), value_(std::move(value)), gradient_(std::move(gradient)) {
  if (k < 1) throw std::invalid_argument("self-connection arity must be >= 1");
  if (degree < 0) throw std::invalid_argument("degree tag must be >= 0");
  if (!value_) throw std::invalid_argument("self-connection needs an evaluator");
}

SelfConnection SelfConnection::scalar(int degree, ScalarFn value, ScalarFn d1, ScalarFn d2) {
  Gradient g;
  if (d1) g = [d1](ConstSpan x, MutSpan out) { out[0] = d1(x[0]); };
  SelfConnection s(degree, 1, [value](ConstSpan x) { return value(x[0]); }, std::move(g));
  s.d2_ = std::move(d2);
  return s;
}

void SelfConnection::gradient(ConstSpan x, MutSpan g) const {
  if (gradient_) {
    gradient_(x, g);
    return;
  }
  std::vector<double> xs(x.begin(), x.end());
  for (int i = 0; i < k_; ++i) {
    const double xi = xs[i];
    xs[i] = xi + kFirstDiffStep;
    const double fp = value_(xs);
    xs[i] = xi - kFirstDiffStep;
    const double fm = value_(xs);
    xs[i] = xi;
    g[i] = (fp - fm) / (2.0 * kFirstDiffStep);
  }
}

double SelfConnection::second_derivative(double x) const {
  if (k_ != 1) throw std::domain_error("second derivative requires cell dimension 1");
  if (d2_) return d2_(x);
  auto d1 = [this](double t) {
    double g = 0.0;
    gradient(ConstSpan(&t, 1), MutSpan(&g, 1));
    return g;
  };
  return central_difference(d1, x, kSecondDiffStep);
}

SelfConnection polynomial_self_connection(int degree, std::vector<double> coeffs) {
  for (double c : coeffs)
    if (!std::isfinite(c)) throw std::invalid_argument("non-finite self-connection coefficient");
  return SelfConnection::scalar(
      degree, [coeffs](double x) { return poly_derivative(coeffs, x, 0); },
      [coeffs](double x) { return poly_derivative(coeffs, x, 1); },
      [coeffs](double x) { return poly_derivative(coeffs, x, 2); });
}

// ---------------------------------------------------------------------------
// PhaseCoupling

PhaseCoupling::PhaseCoupling(std::string name, Fn value, Fn d1, Fn d2, bool even)
    : name_(std::move(name)), value_(std::move(value)), d1_(std::move(d1)), d2_(std::move(d2)), even_(even) {
  if (!value_ || !d1_ || !d2_) throw std::invalid_argument("phase coupling needs value, delta' and delta''");
}

PhaseCoupling cosine_coupling(double a) {
  return PhaseCoupling(
      "cosine", [a](double u) { return a * std::cos(kTwoPi * u); },
      [a](double u) { return -a * kTwoPi * std::sin(kTwoPi * u); },
      [a](double u) { return -a * kTwoPi * kTwoPi * std::cos(kTwoPi * u); }, true);
}

PhaseCoupling two_harmonic_coupling(double a, double b) {
  constexpr double w = 2.0 * kTwoPi;
  return PhaseCoupling(
      "two_harmonic", [a, b](double u) { return a * std::cos(kTwoPi * u) + b * std::cos(w * u); },
      [a, b](double u) { return -a * kTwoPi * std::sin(kTwoPi * u) - b * w * std::sin(w * u); },
      [a, b](double u) {
        return -a * kTwoPi * kTwoPi * std::cos(kTwoPi * u) - b * w * w * std::cos(w * u);
      },
      true);
}

PhaseCoupling builtin_phase_family(std::string_view name, std::span<const double> params) {
  if (name == "cosine") {
    if (params.size() > 1) throw std::invalid_argument("cosine family takes one parameter a");
    return cosine_coupling(params.empty() ? 1.0 : params[0]);
  }
  if (name == "two_harmonic") {
    if (params.size() != 2) throw std::invalid_argument("two_harmonic family takes parameters a, b");
    return two_harmonic_coupling(params[0], params[1]);
  }
  throw std::invalid_argument("unknown phase coupling family '" + std::string(name) + "'");
}

CouplingFunction as_bivariate(const PhaseCoupling& delta) {
  return CouplingFunction::scalar(
      [delta](double x, double y) { return delta(x - y); }, delta.even(),
      [delta](double x, double y) {
        const double d = delta.d1(x - y);
        return std::pair{d, -d};
      },
      [delta](double x, double y) {
        const double d = delta.d2(x - y);
        return SecondPartials{d, -d, d};
      });
}

RingConditionReport check_ring_conditions(const PhaseCoupling& delta, int grid_size) {
  if (grid_size < 64) throw std::invalid_argument("grid_size must be >= 64");
  RingConditionReport r;
  r.grid_size = grid_size;

  double scale = 0.0, d1_scale = 0.0;
  for (int i = 0; i <= grid_size; ++i) {
    const double u = static_cast<double>(i) / grid_size;
    scale = std::max(scale, std::abs(delta(u)));
    d1_scale = std::max(d1_scale, std::abs(delta.d1(u)));
  }
  const double tol = 1e-12 * (1.0 + scale);

  r.c1 = true;
  for (int i = 0; i < grid_size; ++i) {
    const double u = static_cast<double>(i) / grid_size;
    const double v = delta(u);
    if (std::abs(v - delta(-u)) > tol || std::abs(v - delta(u + 1.0)) > tol || std::abs(v - delta(1.0 - u)) > tol) {
      r.c1 = false;
      break;
    }
  }

  // Interior grid of (0, 1/2): sign changes of delta' locate extra zeros.
  const int m = grid_size / 2;
  const double d1_tol = 1e-12 * (1.0 + d1_scale);
  r.c2 = std::abs(delta.d1(0.0)) <= d1_tol && std::abs(delta.d1(0.5)) <= d1_tol;
  double prev_u = 0.5 / m, prev = delta.d1(prev_u);
  for (int i = 1; i < m; ++i) {
    const double u = 0.5 * i / m;
    const double v = delta.d1(u);
    if (std::abs(v) <= d1_tol) {
      r.derivative_zeros.push_back(u);
    } else if (i > 1 && std::abs(prev) > d1_tol && (v > 0) != (prev > 0)) {
      double lo = prev_u, hi = u, flo = prev;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = delta.d1(mid);
        if ((fm > 0) == (flo > 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      r.derivative_zeros.push_back(0.5 * (lo + hi));
    }
    prev_u = u;
    prev = v;
  }
  if (!r.derivative_zeros.empty()) r.c2 = false;

  int increasing = 0, decreasing = 0;
  double last = delta.d2(0.5 / m);
  for (int i = 2; i < m; ++i) {
    const double v = delta.d2(0.5 * i / m);
    if (v > last) ++increasing;
    if (v < last) ++decreasing;
    last = v;
  }
  r.c3 = increasing == 0 || decreasing == 0;
  r.c4 = delta.d2(0.0) < 0.0 && delta.d2(0.5) > 0.0;
  return r;
}

CouplingDiagnostics diagnose_coupling(const CouplingFunction& phi, int samples, std::uint64_t seed, double box) {
  CouplingDiagnostics d;
  Rng rng(seed);
  const int k = phi.arity();
  std::vector<double> x(k), y(k), gx(k), gy(k);
  const double h = kFirstDiffStep;
  for (int s = 0; s < samples; ++s) {
    for (int i = 0; i < k; ++i) {
      x[i] = rng.uniform(-box, box);
      y[i] = rng.uniform(-box, box);
    }
    d.max_swap_error = std::max(d.max_swap_error, std::abs(phi(x, y) - phi(y, x)));
    phi.gradient(x, y, gx, gy);
    for (int i = 0; i < k; ++i) {
      auto probe = [&](std::vector<double>& v, double analytic) {
        const double vi = v[i];
        v[i] = vi + h;
        const double fp = phi(x, y);
        v[i] = vi - h;
        const double fm = phi(x, y);
        v[i] = vi;
        const double fd = (fp - fm) / (2.0 * h);
        d.max_gradient_rel_error =
            std::max(d.max_gradient_rel_error, std::abs(analytic - fd) / std::max(1.0, std::abs(analytic)));
      };
      probe(x, gx[i]);
      probe(y, gy[i]);
    }
    if (k == 1) {
      const SecondPartials s = phi.hessian(x[0], y[0]);
      const double hh = kSecondDiffStep;
      auto [gxp, gyp] = phi.gradient(x[0] + hh, y[0]);
      auto [gxm, gym] = phi.gradient(x[0] - hh, y[0]);
      auto [gxq, gyq] = phi.gradient(x[0], y[0] + hh);
      auto [gxr, gyr] = phi.gradient(x[0], y[0] - hh);
      auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); };
      d.max_hessian_rel_error = std::max({d.max_hessian_rel_error, rel(s.xx, (gxp - gxm) / (2 * hh)),
                                          rel(s.xy, (gxq - gxr) / (2 * hh)), rel(s.xy, (gyp - gym) / (2 * hh)),
                                          rel(s.yy, (gyq - gyr) / (2 * hh))});
    }
  }
  return d;
}

}  // namespace ccn
