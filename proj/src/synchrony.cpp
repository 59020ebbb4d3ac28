#include "ccn/synchrony.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ccn {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::minimum:
      return "minimum";
    case Verdict::saddle:
      return "saddle";
    case Verdict::maximum:
      return "maximum";
    case Verdict::degenerate:
      return "degenerate";
  }
  return "?";
}

Verdict verdict_from_spectrum(const Eigen::VectorXd& mu, double tau) {
  const Inertia in = inertia(mu, tau);
  if (in.n_zero > 0) return Verdict::degenerate;
  if (in.n_minus == 0) return Verdict::minimum;
  if (in.n_plus == 0) return Verdict::maximum;
  return Verdict::saddle;
}

namespace {

constexpr double kRootTol = 1e-10;
constexpr double kMergeTol = 1e-8;

double tolerance_for(double a, double b) { return std::max(1e-9 * std::max(std::abs(a), std::abs(b)), 1e-12); }

}  // namespace

SyncCriticalSet find_synchronous_critical(const CouplingFunction& phi, double lo, double hi, int grid) {
  if (phi.arity() != 1) throw std::domain_error("synchronous root search requires cell dimension 1");
  if (!(lo < hi) || grid < 2) throw std::invalid_argument("invalid search interval or grid");
  auto g = [&](double t) {
    auto [a, b] = phi.gradient(t, t);
    return a + b;
  };
  auto dg = [&](double t) {
    const SecondPartials s = phi.hessian(t, t);
    return s.xx + 2.0 * s.xy + s.yy;
  };
  auto polish = [&](double t) {
    for (int it = 0; it < 30 && std::abs(g(t)) > kRootTol * 1e-3; ++it) {
      const double slope = dg(t);
      if (slope == 0.0 || !std::isfinite(slope)) break;
      const double next = t - g(t) / slope;
      if (!(next >= lo && next <= hi)) break;
      if (std::abs(g(next)) >= std::abs(g(t))) break;
      t = next;
    }
    return t;
  };

  std::vector<double> ts(grid + 1), gs(grid + 1);
  for (int i = 0; i <= grid; ++i) {
    ts[i] = lo + (hi - lo) * i / grid;
    gs[i] = g(ts[i]);
  }
  SyncCriticalSet out;
  if (std::all_of(gs.begin(), gs.end(), [](double v) { return std::abs(v) <= kRootTol; })) {
    out.continuum = true;
    return out;
  }

  std::vector<double> roots;
  for (int i = 0; i <= grid; ++i) {
    if (std::abs(gs[i]) <= kRootTol) {
      roots.push_back(polish(ts[i]));
      continue;
    }
    if (i < grid && std::abs(gs[i + 1]) > kRootTol && (gs[i] > 0) != (gs[i + 1] > 0)) {
      double a = ts[i], b = ts[i + 1], ga = gs[i];
      for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
        const double m = 0.5 * (a + b);
        const double gm = g(m);
        if (gm == 0.0) {
          a = b = m;
          break;
        }
        if ((gm > 0) == (ga > 0)) {
          a = m;
          ga = gm;
        } else {
          b = m;
        }
      }
      roots.push_back(polish(0.5 * (a + b)));
      continue;
    }
    // Touching roots: local minima of |g| polished by Newton.
    if (i > 0 && i < grid && std::abs(gs[i]) < std::abs(gs[i - 1]) && std::abs(gs[i]) < std::abs(gs[i + 1])) {
      const double t = polish(ts[i]);
      if (std::abs(g(t)) <= kRootTol) roots.push_back(t);
    }
  }
  std::sort(roots.begin(), roots.end());
  for (double r : roots)
    if (out.roots.empty() || r - out.roots.back() > kMergeTol) out.roots.push_back(r);
  return out;
}

bool coupling_minimum(double alpha, double beta) {
  const double tol = tolerance_for(alpha + beta, alpha - beta);
  return alpha + beta > tol && alpha - beta > tol;
}

SyncClassification classify_synchronous_params(const CellGraph& g, double alpha, double beta) {
  const auto d = is_regular(g);
  if (!d) throw std::domain_error("synchronous classification needs a regular graph");
  SyncClassification c;
  c.alpha = alpha;
  c.beta = beta;
  c.closed_form_spectrum = synchronous_hessian_spectrum(g, alpha, beta);
  const double lambda = c.closed_form_spectrum.size() ? laplacian_max(g) : 0.0;

  const double i1 = alpha + beta;
  const double i2 = alpha + (1.0 - lambda / *d) * beta;
  const double tol = tolerance_for(i1, i2);
  if (i1 > tol && i2 > tol)
    c.verdict = Verdict::minimum;
  else
    c.verdict = verdict_from_spectrum(c.closed_form_spectrum);

  const Eigen::VectorXd direct = symmetric_eigenvalues(synchronous_hessian(g, alpha, beta));
  c.inertia = inertia(direct);
  c.eigen_verdict = verdict_from_spectrum(direct);
  c.coupling_minimum = coupling_minimum(alpha, beta);
  c.wedge = c.verdict == Verdict::minimum && alpha - beta < -tolerance_for(alpha, beta);
  return c;
}

SyncClassification classify_synchronous(const CellGraph& g, const CouplingFunction& phi, double x0) {
  if (phi.arity() != 1) throw std::domain_error("synchronous classification requires cell dimension 1");
  auto [a, b] = phi.gradient(x0, x0);
  if (std::abs(a + b) > 1e-8)
    throw std::domain_error("x0 = " + std::to_string(x0) + " is not a synchronous critical point");
  const SecondPartials s = phi.hessian(x0, x0);
  SyncClassification c = classify_synchronous_params(g, s.xx, s.xy);
  c.point = {x0};
  return c;
}

bool Wedge::contains(double alpha, double beta) const { return alpha - beta < 0.0 && alpha + slope * beta > 0.0; }

Wedge wedge_region(const CellGraph& g) {
  const auto d = is_regular(g);
  if (!d) throw std::domain_error("wedge needs a regular graph");
  Wedge w;
  w.d = *d;
  w.lambda_max = laplacian_max(g);
  w.slope = 1.0 - w.lambda_max / w.d;
  w.angle = std::max(0.0, std::atan2(1.0, -w.slope) - std::numbers::pi / 4.0);
  const double tol = 1e-9 * std::max(1, w.d);
  w.empty = std::abs(w.lambda_max - 2.0 * w.d) <= tol;
  w.maximal = std::abs(w.lambda_max - (w.d + 1.0)) <= tol;
  if (w.empty) w.angle = 0.0;
  return w;
}

Eigen::VectorXd TwoColourPattern::state(int n) const {
  Eigen::VectorXd x(n);
  for (Vertex v = 1; v <= n; ++v) x[v - 1] = parts.side(v) == 1 ? x0 : y0;
  return x;
}

namespace {

struct PairRoot {
  Eigen::Vector2d point;
  Eigen::Vector2d null_direction;  // zero if the Hessian is regular
};

bool on_same_family(const PairRoot& a, const Eigen::Vector2d& p, const CouplingFunction& phi) {
  if (a.null_direction.isZero()) return false;
  const Eigen::Vector2d diff = p - a.point;
  const double cross = diff.x() * a.null_direction.y() - diff.y() * a.null_direction.x();
  if (std::abs(cross) > 1e-6) return false;
  const Eigen::Vector2d mid = 0.5 * (p + a.point);
  auto [gx, gy] = phi.gradient(mid.x(), mid.y());
  return std::max(std::abs(gx), std::abs(gy)) <= 1e-8;
}

}  // namespace

TwoColourSet find_two_colour_critical(const CellGraph& g, const CouplingFunction& phi, double lo, double hi,
                                      int grid) {
  if (phi.arity() != 1) throw std::domain_error("two-colour search requires cell dimension 1");
  if (!(lo < hi) || grid < 2) throw std::invalid_argument("invalid search box or grid");
  TwoColourSet out;
  auto parts = bipartition(g);
  if (!parts) return out;

  const double slack = 1e-9 * (hi - lo);
  std::vector<PairRoot> roots;
  for (int i = 0; i <= grid; ++i)
    for (int j = 0; j <= grid; ++j) {
      Eigen::Vector2d p(lo + (hi - lo) * i / grid, lo + (hi - lo) * j / grid);
      bool converged = false;
      for (int it = 0; it < 60; ++it) {
        auto [gx, gy] = phi.gradient(p.x(), p.y());
        const Eigen::Vector2d r(gx, gy);
        if (!r.allFinite()) break;
        if (r.cwiseAbs().maxCoeff() <= kRootTol) {
          converged = true;
          break;
        }
        const SecondPartials s = phi.hessian(p.x(), p.y());
        Eigen::Matrix2d h;
        h << s.xx, s.xy, s.xy, s.yy;
        const Eigen::Vector2d step = h.completeOrthogonalDecomposition().solve(r);
        if (!step.allFinite() || step.isZero()) break;
        p -= step;
        if (p.cwiseAbs().maxCoeff() > 1e6) break;
      }
      if (!converged) continue;
      if (p.minCoeff() < lo - slack || p.maxCoeff() > hi + slack) continue;
      if (std::abs(p.x() - p.y()) <= kMergeTol) continue;

      bool known = false;
      for (const PairRoot& r : roots)
        if ((r.point - p).cwiseAbs().maxCoeff() <= kMergeTol || on_same_family(r, p, phi)) {
          known = true;
          break;
        }
      if (known) continue;

      const SecondPartials s = phi.hessian(p.x(), p.y());
      Eigen::Matrix2d h;
      h << s.xx, s.xy, s.xy, s.yy;
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h);
      PairRoot root{p, Eigen::Vector2d::Zero()};
      const double scale = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1.0);
      if (std::abs(es.eigenvalues()[0]) <= 1e-8 * scale) {
        root.null_direction = es.eigenvectors().col(0);
        out.continuum = true;
      } else if (std::abs(es.eigenvalues()[1]) <= 1e-8 * scale) {
        root.null_direction = es.eigenvectors().col(1);
        out.continuum = true;
      }
      roots.push_back(root);
    }

  std::vector<Eigen::Vector2d> points;
  for (const PairRoot& r : roots) points.push_back(r.point);
  std::sort(points.begin(), points.end(), [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return std::pair(a.x(), a.y()) < std::pair(b.x(), b.y());
  });

  if (!phi.z2_invariant()) {
    for (const auto& p : points) out.patterns.push_back({*parts, p.x(), p.y()});
    return out;
  }
  // Emit (x0, y0), (y0, x0) pairs, anchored at the member with x0 < y0.
  std::vector<bool> used(points.size(), false);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (used[i]) continue;
    Eigen::Vector2d p = points[i];
    if (p.x() > p.y()) p = Eigen::Vector2d(p.y(), p.x());
    used[i] = true;
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (used[j]) continue;
      const Eigen::Vector2d q = points[j];
      if ((Eigen::Vector2d(q.y(), q.x()) - points[i]).cwiseAbs().maxCoeff() <= kMergeTol ||
          (q - points[i]).cwiseAbs().maxCoeff() <= kMergeTol)
        used[j] = true;
    }
    out.patterns.push_back({*parts, p.x(), p.y()});
    out.patterns.push_back({*parts, p.y(), p.x()});
  }
  return out;
}

SyncClassification classify_two_colour_params(const CellGraph& g, double alpha, double gamma, double beta) {
  const auto dm = is_dm_graph(g);
  if (!dm) throw std::domain_error("two-colour classification needs a (d,m)-graph");
  SyncClassification c;
  c.alpha = alpha;
  c.beta = beta;
  c.gamma = gamma;
  const double xi = dm_two_colour_min_eigenvalue(dm->d, alpha, gamma, beta);
  c.closed_form_spectrum = Eigen::VectorXd::Constant(1, xi);

  const double det = alpha * gamma - beta * beta;
  const double tol = std::max(1e-9 * std::max({alpha * alpha, gamma * gamma, beta * beta}), 1e-12);
  if (std::abs(det) <= tol)
    c.verdict = Verdict::degenerate;
  else if (det < 0.0)
    c.verdict = Verdict::saddle;
  else
    c.verdict = alpha > 0.0 ? Verdict::minimum : Verdict::maximum;

  const Bipartition parts = *bipartition(g);
  const Eigen::VectorXd direct = symmetric_eigenvalues(structured_hessian(g, parts, alpha, gamma, beta));
  c.inertia = inertia(direct);
  c.eigen_verdict = verdict_from_spectrum(direct);
  c.coupling_minimum = c.verdict == Verdict::minimum;
  return c;
}

SyncClassification classify_two_colour(const CellGraph& g, const CouplingFunction& phi,
                                       const TwoColourPattern& pattern) {
  if (phi.arity() != 1) throw std::domain_error("two-colour classification requires cell dimension 1");
  auto [gx, gy] = phi.gradient(pattern.x0, pattern.y0);
  if (std::max(std::abs(gx), std::abs(gy)) > 1e-8)
    throw std::domain_error("pattern values are not a critical pair of the coupling");
  const SecondPartials s = phi.hessian(pattern.x0, pattern.y0);
  SyncClassification c = classify_two_colour_params(g, s.xx, s.yy, s.xy);
  c.point = {pattern.x0, pattern.y0};
  return c;
}

CoexistenceReport coexistence_report(const CellGraph& g, const CouplingFunction& phi, double lo, double hi) {
  CoexistenceReport r;
  r.synchronous = find_synchronous_critical(phi, lo, hi);
  r.two_colour = find_two_colour_critical(g, phi, lo, hi);
  for (double t : r.synchronous.roots) {
    const bool shared = std::any_of(r.two_colour.patterns.begin(), r.two_colour.patterns.end(),
                                    [t](const TwoColourPattern& p) {
                                      return std::abs(p.x0 - t) <= kMergeTol || std::abs(p.y0 - t) <= kMergeTol;
                                    });
    if (shared) r.shared_values.push_back(t);
  }
  return r;
}

}  // namespace ccn
