#include "ccn/ring.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "ccn/errors.hpp"

namespace ccn {

// ---------------------------------------------------------------------------
// S1Function

S1Function::S1Function(CellGraph g, PhaseCoupling delta, int head_side)
    : graph_(std::move(g)), delta_(std::move(delta)) {
  if (head_side != 1 && head_side != 2) throw std::invalid_argument("head side must be 1 or 2");
  const auto parts = bipartition(graph_);
  if (!delta_.even() && !parts)
    throw std::domain_error("a non-even phase coupling needs a bipartite graph");
  for (const Edge& e : graph_.edges()) {
    if (parts && parts->side(e.u) != head_side)
      oriented_.push_back({e.v, e.u});
    else
      oriented_.push_back(e);
  }
}

void S1Function::check(const Eigen::VectorXd& theta) const {
  if (theta.size() != size())
    throw std::invalid_argument("phase vector has length " + std::to_string(theta.size()) + ", expected " +
                                std::to_string(size()));
}

double S1Function::value(const Eigen::VectorXd& theta) const {
  check(theta);
  double total = 0.0;
  for (const Edge& e : oriented_) total += delta_(theta[e.u - 1] - theta[e.v - 1]);
  return total;
}

Eigen::VectorXd S1Function::gradient(const Eigen::VectorXd& theta) const {
  check(theta);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(size());
  for (const Edge& e : oriented_) {
    const double d = delta_.d1(theta[e.u - 1] - theta[e.v - 1]);
    g[e.u - 1] += d;
    g[e.v - 1] -= d;
  }
  return g;
}

Eigen::VectorXd S1Function::weights(const Eigen::VectorXd& theta) const {
  check(theta);
  Eigen::VectorXd w(static_cast<Eigen::Index>(oriented_.size()));
  for (std::size_t i = 0; i < oriented_.size(); ++i)
    w[static_cast<Eigen::Index>(i)] = delta_.d2(theta[oriented_[i].u - 1] - theta[oriented_[i].v - 1]);
  return w;
}

Eigen::MatrixXd S1Function::hessian(const Eigen::VectorXd& theta) const {
  const Eigen::VectorXd w = weights(theta);
  return WeightedLaplacian(graph_, std::span<const double>(w.data(), static_cast<std::size_t>(w.size()))).matrix();
}

WeightedLaplacian bipartite_s1_hessian(const CellGraph& g, const PhaseCoupling& delta, const Eigen::VectorXd& theta,
                                       int head_side) {
  const S1Function h(g, delta, head_side);
  const Eigen::VectorXd w = h.weights(theta);
  return WeightedLaplacian(g, std::span<const double>(w.data(), static_cast<std::size_t>(w.size())));
}

namespace {

CellGraph ring_for(int n, const PhaseCoupling& delta) {
  if (n < 3) throw std::invalid_argument("ring needs n >= 3");
  if (!delta.even() && n % 2 != 0) throw std::domain_error("a non-even phase coupling needs an even ring");
  return ring(n);
}

}  // namespace

RingFunction::RingFunction(int n, PhaseCoupling delta) : S1Function(ring_for(n, delta), delta, 1) {}

// ---------------------------------------------------------------------------
// Differences and symmetry

namespace {

double frac(double v) {
  double r = v - std::floor(v);
  if (r >= 1.0) r = 0.0;
  return r;
}

double circular(double a, double b) {
  const double d = frac(a - b);
  return std::min(d, 1.0 - d);
}

// The 2n dihedral images of a difference vector: rotations, and rotations of
// the reflected vector reverse(-x).
std::vector<Eigen::VectorXd> dihedral_images(const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd r(n);
  for (Eigen::Index i = 0; i < n; ++i) r[i] = frac(-x[n - 1 - i]);
  std::vector<Eigen::VectorXd> out;
  out.reserve(2 * n);
  for (const Eigen::VectorXd* base : std::array<const Eigen::VectorXd*, 2>{&x, &r})
    for (Eigen::Index s = 0; s < n; ++s) {
      Eigen::VectorXd y(n);
      for (Eigen::Index i = 0; i < n; ++i) y[i] = (*base)[(i + s) % n];
      out.push_back(std::move(y));
    }
  return out;
}

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > 1e-7) return a[i] < b[i];
  return false;
}

}  // namespace

Eigen::VectorXd ring_differences(const Eigen::VectorXd& theta) {
  const Eigen::Index n = theta.size();
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = frac(theta[(i + 1) % n] - theta[i]);
  return x;
}

Eigen::VectorXd phases_from_differences(const Eigen::VectorXd& x) {
  Eigen::VectorXd theta(x.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    theta[i] = frac(acc);
    acc += x[i];
  }
  return theta;
}

Eigen::VectorXd canonical_differences(const Eigen::VectorXd& theta) {
  Eigen::VectorXd x = ring_differences(theta);
  for (double& v : x)
    if (v > 1.0 - 1e-9) v = 0.0;
  const auto images = dihedral_images(x);
  Eigen::VectorXd best = images.front();
  for (const auto& y : images) {
    Eigen::VectorXd z = y;
    for (double& v : z)
      if (v > 1.0 - 1e-9) v = 0.0;
    if (lex_less(z, best)) best = z;
  }
  return best;
}

double ring_distance(const Eigen::VectorXd& theta_a, const Eigen::VectorXd& theta_b) {
  if (theta_a.size() != theta_b.size()) throw std::invalid_argument("ring states differ in length");
  const Eigen::VectorXd xa = ring_differences(theta_a);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& y : dihedral_images(ring_differences(theta_b))) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < y.size() && worst < best; ++i) worst = std::max(worst, circular(xa[i], y[i]));
    best = std::min(best, worst);
  }
  return best;
}

std::string to_string(Isotropy iso) {
  switch (iso) {
    case Isotropy::synchronous:
      return "D_n";
    case Isotropy::twisted:
      return "Z_n(tau,m/n)";
    case Isotropy::antiphase:
      return "Z_n(tau,1/2)";
    case Isotropy::trivial:
      return "1";
  }
  return "?";
}

std::string to_string(Stability s) {
  switch (s) {
    case Stability::stable:
      return "stable";
    case Stability::unstable:
      return "unstable";
    case Stability::degenerate:
      return "degenerate";
    case Stability::undetermined:
      return "undetermined";
  }
  return "?";
}

Stability stability_from_inertia(const Inertia& in) {
  if (in.n_minus >= 1) return Stability::unstable;
  if (in.n_zero == 1) return Stability::stable;
  return Stability::degenerate;
}

bool RingEquilibrium::consistent() const {
  switch (rule) {
    case Stability::stable:
      return eigen == Stability::stable;
    case Stability::unstable:
      return eigen != Stability::stable;
    case Stability::degenerate:
      return eigen == Stability::degenerate;
    case Stability::undetermined:
      return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

// Zero of delta'' in (0, 1/2); the ring conditions make it unique.
double inflection(const PhaseCoupling& delta) {
  double lo = 0.0, hi = 0.5;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    (delta.d2(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// xi in (u*, 1/2) with delta'(xi) = delta'(eta) for eta in (0, u*).
double partner(const PhaseCoupling& delta, double u_star, double eta) {
  const double target = delta.d1(eta);
  double lo = u_star, hi = 0.5;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    (delta.d1(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Binary words of length n with `ones` set bits, one per class under
// rotation (and reversal when `reflect`), as the smallest member.
std::vector<std::vector<int>> binary_classes(int n, int ones, bool reflect) {
  std::vector<std::vector<int>> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != ones) continue;
    std::vector<int> w(n);
    for (int i = 0; i < n; ++i) w[i] = (mask >> (n - 1 - i)) & 1u;
    bool smallest = true;
    for (int pass = 0; pass < (reflect ? 2 : 1) && smallest; ++pass) {
      std::vector<int> base = w;
      if (pass == 1) std::reverse(base.begin(), base.end());
      for (int s = 0; s < n && smallest; ++s) {
        std::vector<int> r(n);
        for (int i = 0; i < n; ++i) r[i] = base[(i + s) % n];
        if (r < w) smallest = false;
      }
    }
    if (smallest) out.push_back(std::move(w));
  }
  return out;
}

RingEquilibrium from_differences(Eigen::VectorXd x) {
  RingEquilibrium eq;
  eq.theta = phases_from_differences(x);
  eq.differences = std::move(x);
  return eq;
}

}  // namespace

void classify_stability(const RingFunction& rf, RingEquilibrium& eq) {
  const PhaseCoupling& delta = rf.coupling();
  const int n = rf.size();
  eq.energy = rf.value(eq.theta);
  eq.residual = rf.gradient(eq.theta).cwiseAbs().maxCoeff();
  eq.weights = rf.weights(eq.theta);
  const WeightedLaplacian lap(rf.graph(),
                              std::span<const double>(eq.weights.data(), static_cast<std::size_t>(eq.weights.size())));
  eq.eigenvalues = lap.eigenvalues();
  eq.inertia = inertia(eq.eigenvalues);
  eq.eigen = stability_from_inertia(eq.inertia);

  const double scale = std::max(std::abs(delta.d2(0.0)), std::abs(delta.d2(0.5)));
  const double tol = std::max(1e-9 * scale, 1e-12);
  switch (eq.isotropy) {
    case Isotropy::antiphase:
      eq.rule = delta.d2(0.5) > tol ? Stability::stable : Stability::degenerate;
      break;
    case Isotropy::synchronous:
    case Isotropy::twisted: {
      const double w = delta.d2(static_cast<double>(eq.m) / n);
      eq.rule = w > tol ? Stability::stable : (w < -tol ? Stability::unstable : Stability::degenerate);
      break;
    }
    case Isotropy::trivial:
      if (eq.boundary)
        eq.rule = eq.q <= 1 ? Stability::undetermined : Stability::unstable;
      else
        eq.rule = (eq.p == n - 1 && eq.q == 1) ? Stability::undetermined : Stability::unstable;
      break;
  }
}

std::vector<RingEquilibrium> enumerate_equilibria(const RingFunction& rf, const EnumerationOptions& opt) {
  const PhaseCoupling& delta = rf.coupling();
  const RingConditionReport cond = check_ring_conditions(delta, std::max(opt.grid, 64));
  if (!cond.all())
    throw std::domain_error(std::string("phase coupling violates ring condition") + (!cond.c1 ? " C1" : "") +
                            (!cond.c2 ? " C2" : "") + (!cond.c3 ? " C3" : "") + (!cond.c4 ? " C4" : ""));
  const int n = rf.size();
  std::vector<RingEquilibrium> out;
  auto emit = [&](RingEquilibrium eq) {
    classify_stability(rf, eq);
    out.push_back(std::move(eq));
  };

  // Uniform phase shifts.
  for (int m = 0; 2 * m <= n; ++m) {
    RingEquilibrium eq = from_differences(Eigen::VectorXd::Constant(n, static_cast<double>(m) / n));
    eq.m = m;
    eq.isotropy = m == 0 ? Isotropy::synchronous : (2 * m == n ? Isotropy::antiphase : Isotropy::twisted);
    emit(std::move(eq));
  }

  // Differences in {0, 1/2}: an even number p >= 2 of halves, q >= 1 zeros.
  for (int p = 2; p <= n - 1; p += 2)
    for (const auto& word : binary_classes(n, p, true)) {
      Eigen::VectorXd x(n);
      for (int i = 0; i < n; ++i) x[i] = word[i] ? 0.5 : 0.0;
      RingEquilibrium eq = from_differences(x);
      eq.isotropy = Isotropy::trivial;
      eq.boundary = true;
      eq.m = p / 2;
      eq.p = p;
      eq.q = n - p;
      eq.xi = 0.5;
      eq.eta = 0.0;
      emit(std::move(eq));
    }

  // Two values eta < u* < xi in (0, 1/2) with delta'(xi) = delta'(eta).
  const double u_star = inflection(delta);
  const int grid = opt.grid;
  std::vector<double> etas(grid - 1), xis(grid - 1);
  for (int i = 1; i < grid; ++i) {
    etas[i - 1] = u_star * i / grid;
    xis[i - 1] = partner(delta, u_star, etas[i - 1]);
  }
  const double edge = 1e-9;
  for (int p = 1; p <= n - 1; ++p) {
    const int q = n - p;
    for (int m = 1; 2 * m < n; ++m) {
      auto G = [&](double eta) { return p * partner(delta, u_star, eta) + q * eta - m; };
      std::vector<double> gs(etas.size());
      for (std::size_t i = 0; i < etas.size(); ++i) gs[i] = p * xis[i] + q * etas[i] - m;
      std::vector<std::pair<double, bool>> roots;  // (eta, continuum)
      if (std::all_of(gs.begin(), gs.end(), [](double v) { return std::abs(v) <= 1e-10; })) {
        roots.emplace_back(0.5 * u_star, true);
      } else {
        for (std::size_t i = 0; i < gs.size(); ++i) {
          if (std::abs(gs[i]) <= 1e-13) {
            roots.emplace_back(etas[i], false);
            continue;
          }
          if (i + 1 < gs.size() && std::abs(gs[i + 1]) > 1e-13 && (gs[i] > 0) != (gs[i + 1] > 0)) {
            double lo = etas[i], hi = etas[i + 1], glo = gs[i];
            for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
              const double mid = 0.5 * (lo + hi);
              const double gm = G(mid);
              if ((gm > 0) == (glo > 0)) {
                lo = mid;
                glo = gm;
              } else {
                hi = mid;
              }
            }
            roots.emplace_back(0.5 * (lo + hi), false);
          }
        }
      }
      for (auto [eta, family] : roots) {
        if (eta <= edge || eta >= u_star - edge) continue;
        const double xi = partner(delta, u_star, eta);
        for (const auto& word : binary_classes(n, p, false)) {
          Eigen::VectorXd x(n);
          for (int i = 0; i < n; ++i) x[i] = word[i] ? xi : eta;
          RingEquilibrium eq = from_differences(x);
          eq.isotropy = Isotropy::trivial;
          eq.m = m;
          eq.p = p;
          eq.q = q;
          eq.xi = xi;
          eq.eta = eta;
          eq.continuum = family;
          emit(std::move(eq));
        }
      }
    }
  }
  return out;
}

int match_equilibrium(const RingFunction& rf, const std::vector<RingEquilibrium>& eqs, const Eigen::VectorXd& theta,
                      double tol) {
  for (std::size_t i = 0; i < eqs.size(); ++i)
    if (!eqs[i].continuum && ring_distance(eqs[i].theta, theta) <= tol) return static_cast<int>(i);

  const double u_star = inflection(rf.coupling());
  const auto images = dihedral_images(ring_differences(theta));
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    const RingEquilibrium& eq = eqs[i];
    if (!eq.continuum) continue;
    for (const auto& y : images) {
      bool same = true;
      double sum = 0.0;
      for (Eigen::Index j = 0; j < y.size() && same; ++j) {
        if (!(y[j] > 0.0 && y[j] < 0.5)) same = false;
        const bool big = y[j] > u_star;
        const bool want = eq.differences[j] > u_star;
        if (big != want) same = false;
        sum += y[j];
      }
      if (same && std::abs(sum - eq.m) <= tol) return static_cast<int>(i);
    }
  }
  return -1;
}

ZeroModeReport zero_mode(const Eigen::MatrixXd& hessian) {
  const Eigen::Index n = hessian.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hessian);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
  const Eigen::VectorXd& lam = es.eigenvalues();
  const double tau = zero_threshold(lam);
  ZeroModeReport r;
  Eigen::Index closest = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(lam[i]) < std::abs(lam[closest])) closest = i;
  r.closest_eigenvalue = lam[closest];

  std::vector<Eigen::Index> null;
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(lam[i]) <= tau) null.push_back(i);
  if (null.empty()) null.push_back(closest);
  r.null_dimension = static_cast<int>(null.size());
  const Eigen::VectorXd u = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  Eigen::VectorXd projected = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i : null) projected += es.eigenvectors().col(i).dot(u) * es.eigenvectors().col(i);
  r.angle = std::asin(std::min(1.0, (u - projected).norm()));
  return r;
}

MultistartResult ring_multistart(const RingFunction& rf, int starts, std::uint64_t seed, const FlowConfig& cfg) {
  FlowConfig c = cfg;
  c.torus = true;
  const int n = rf.size();
  MultistartOptions opt;
  opt.starts = starts;
  opt.seed = seed;
  opt.canonicalize = [](const Eigen::VectorXd& th) { return phases_from_differences(canonical_differences(th)); };
  opt.distance = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return ring_distance(a, b); };
  return multistart_minimize(
      rf,
      [n](Rng& rng) {
        Eigen::VectorXd th(n);
        for (double& v : th) v = rng.uniform();
        return th;
      },
      c, opt);
}

GroundStateReport ground_state(const RingFunction& rf, int starts, std::uint64_t seed, double tol,
                               const FlowConfig& cfg) {
  const int n = rf.size();
  GroundStateReport r;
  r.n = n;
  const double shift = n % 2 == 0 ? 0.5 : 0.5 - 0.5 / n;
  r.formula_theta = phases_from_differences(Eigen::VectorXd::Constant(n, shift));
  r.formula_energy = rf.value(r.formula_theta);

  const MultistartResult ms = ring_multistart(rf, starts, seed, cfg);
  const Basin& best = ms.best();
  r.empirical_theta = best.representative;
  r.empirical_energy = rf.value(best.representative);
  r.state_distance = ring_distance(r.formula_theta, r.empirical_theta);
  r.starts = starts;
  r.converged = ms.converged;
  r.basins = static_cast<int>(ms.basins.size());
  r.agrees = std::abs(r.empirical_energy - r.formula_energy) <= tol && r.state_distance <= 1e-6;
  return r;
}

}  // namespace ccn
