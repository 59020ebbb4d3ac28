#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "ccn/errors.hpp"
#include "ccn/random.hpp"

namespace ccn {

/// Anything with value(x) and gradient(x) on Eigen vectors.
template <class F>
concept GradientSystem = requires(const F& f, const Eigen::VectorXd& x) {
  { f.value(x) } -> std::convertible_to<double>;
  { f.gradient(x) } -> std::convertible_to<Eigen::VectorXd>;
};

enum class Integrator { rk4, adaptive };
enum class FlowStatus { converged, max_time, diverged };

inline std::string to_string(FlowStatus s) {
  switch (s) {
    case FlowStatus::converged:
      return "converged";
    case FlowStatus::max_time:
      return "max_time";
    case FlowStatus::diverged:
      return "diverged";
  }
  return "?";
}

struct FlowConfig {
  Integrator integrator = Integrator::rk4;
  double h = 1e-2;
  double max_time = 1e4;
  double tol = 1e-10;  // on |grad f|_inf
  bool torus = false;  // wrap coordinates into [0, 1)
  /// Record every n-th accepted step (0 keeps only the endpoints).
  int sample_every = 0;
  /// Local error target of the adaptive integrator.
  double adaptive_tol = 1e-9;

  void validate() const {
    if (!(h > 0.0) || !(tol > 0.0) || !(max_time > 0.0)) throw std::invalid_argument("flow needs h, tol, T > 0");
  }
};

struct FlowSample {
  double t;
  Eigen::VectorXd x;
  double value;
  double grad_norm;
};

struct Trajectory {
  std::vector<FlowSample> samples;
  FlowStatus status = FlowStatus::max_time;
  long steps = 0;

  const FlowSample& final() const { return samples.back(); }
};

inline void wrap_unit(Eigen::VectorXd& x) {
  for (double& v : x) {
    v -= std::floor(v);
    if (v >= 1.0) v = 0.0;
  }
}

/// Gradient flow x' = -grad f(x) until |grad f|_inf <= tol or t = max_time.
///
/// Fixed-step RK4 halves the step whenever f would increase by more than
/// 1e-12 (1 + |f|) and doubles it back after 10 accepted steps. The adaptive
/// integrator is a Dormand-Prince 5(4) pair with the same descent guard and a
/// step cap of 2.5 / rho, rho the secant curvature of the gradient along the
/// last step, which keeps it inside the explicit stability interval.
template <GradientSystem F>
Trajectory integrate(const F& f, Eigen::VectorXd x, const FlowConfig& cfg) {
  cfg.validate();
  Trajectory tr;
  if (cfg.torus) wrap_unit(x);
  double fx = f.value(x);
  Eigen::VectorXd g = f.gradient(x);
  double t = 0.0, h = cfg.h;
  int accepted_since_cut = 0;
  auto record = [&] { tr.samples.push_back({t, x, fx, g.cwiseAbs().maxCoeff()}); };
  record();

  auto finite = [](const Eigen::VectorXd& v) { return v.allFinite(); };
  while (true) {
    const double gnorm = g.cwiseAbs().maxCoeff();
    if (!std::isfinite(fx) || !finite(g)) {
      tr.status = FlowStatus::diverged;
      break;
    }
    if (gnorm <= cfg.tol) {
      tr.status = FlowStatus::converged;
      break;
    }
    if (t >= cfg.max_time) {
      tr.status = FlowStatus::max_time;
      break;
    }
    const double step = std::min(h, cfg.max_time - t);
    Eigen::VectorXd next;
    double err_ratio = 0.0;
    double curvature = 0.0;  // secant estimate |d grad| / |dx| along the step (adaptive only)
    if (cfg.integrator == Integrator::rk4) {
      const Eigen::VectorXd k1 = -g;
      const Eigen::VectorXd k2 = -f.gradient(x + 0.5 * step * k1);
      const Eigen::VectorXd k3 = -f.gradient(x + 0.5 * step * k2);
      const Eigen::VectorXd k4 = -f.gradient(x + step * k3);
      next = x + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } else {
      const Eigen::VectorXd k1 = -g;
      const Eigen::VectorXd k2 = -f.gradient(x + step * (1.0 / 5) * k1);
      const Eigen::VectorXd k3 = -f.gradient(x + step * ((3.0 / 40) * k1 + (9.0 / 40) * k2));
      const Eigen::VectorXd k4 = -f.gradient(x + step * ((44.0 / 45) * k1 - (56.0 / 15) * k2 + (32.0 / 9) * k3));
      const Eigen::VectorXd k5 =
          -f.gradient(x + step * ((19372.0 / 6561) * k1 - (25360.0 / 2187) * k2 + (64448.0 / 6561) * k3 -
                                  (212.0 / 729) * k4));
      const Eigen::VectorXd k6 =
          -f.gradient(x + step * ((9017.0 / 3168) * k1 - (355.0 / 33) * k2 + (46732.0 / 5247) * k3 +
                                  (49.0 / 176) * k4 - (5103.0 / 18656) * k5));
      next = x + step * ((35.0 / 384) * k1 + (500.0 / 1113) * k3 + (125.0 / 192) * k4 - (2187.0 / 6784) * k5 +
                         (11.0 / 84) * k6);
      const Eigen::VectorXd k7 = -f.gradient(next);
      const Eigen::VectorXd err =
          step * ((71.0 / 57600) * k1 - (71.0 / 16695) * k3 + (71.0 / 1920) * k4 - (17253.0 / 339200) * k5 +
                  (22.0 / 525) * k6 - (1.0 / 40) * k7);
      err_ratio = err.cwiseAbs().maxCoeff() / (cfg.adaptive_tol * (1.0 + x.cwiseAbs().maxCoeff()));
      // Near an equilibrium the error estimate shrinks with the gradient and
      // stops limiting the step; the explicit stability bound must then hold.
      const double moved = (next - x).norm();
      if (moved > 0.0) curvature = (k7 - k1).norm() / moved;
    }
    if (!finite(next)) {
      tr.status = FlowStatus::diverged;
      break;
    }
    if (cfg.torus) wrap_unit(next);
    const double fnext = f.value(next);
    const bool uphill = !(fnext <= fx + 1e-12 * (1.0 + std::abs(fx)));
    const bool too_coarse = err_ratio > 1.0;
    const bool unstable = step * curvature > 3.0;
    if ((uphill || too_coarse || unstable) && step > 1e-12 * cfg.h) {
      h = step * (too_coarse ? std::clamp(0.9 * std::pow(err_ratio, -0.2), 0.1, 0.5) : 0.5);
      if (unstable) h = std::min(h, 2.0 / curvature);
      accepted_since_cut = 0;
      continue;
    }
    x = std::move(next);
    fx = fnext;
    g = f.gradient(x);
    t += step;
    ++tr.steps;
    if (cfg.integrator == Integrator::rk4) {
      if (h < cfg.h && ++accepted_since_cut >= 10) {
        h = std::min(2.0 * h, cfg.h);
        accepted_since_cut = 0;
      }
    } else {
      const double grow = err_ratio > 0.0 ? std::clamp(0.9 * std::pow(err_ratio, -0.2), 1.0, 5.0) : 5.0;
      h = std::min(step * grow, 100.0 * cfg.h);
      if (curvature > 0.0) h = std::min(h, 2.5 / curvature);
    }
    if (cfg.sample_every > 0 && tr.steps % cfg.sample_every == 0) record();
  }
  if (tr.steps > 0 && tr.samples.back().t != t) record();
  return tr;
}

/// One cluster of converged terminals.
struct Basin {
  Eigen::VectorXd representative;  // canonical form of the first member
  double value = 0.0;
  int count = 0;
  std::vector<int> starts;
};

struct MultistartResult {
  std::vector<Basin> basins;  // in order of first discovery
  int converged = 0;
  int failed = 0;
  std::vector<Eigen::VectorXd> terminals;  // raw terminal per start (empty if not converged)
  std::vector<FlowStatus> status;

  const Basin& best() const {
    return *std::min_element(basins.begin(), basins.end(),
                             [](const Basin& a, const Basin& b) { return a.value < b.value; });
  }
};

struct MultistartOptions {
  int starts = 200;
  std::uint64_t seed = 1;
  double merge_radius = 1e-5;
  int threads = 1;
  /// Maps a terminal to canonical coordinates; identity when empty.
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> canonicalize;
  /// Distance between canonical points; sup-norm when empty.
  std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)> distance;
};

/// Runs `starts` flows from points drawn by `sample(rng)`, where start i uses
/// Rng::for_index(seed, i). Results are merged in start order, so the output
/// does not depend on the thread count. Throws NumericalError if no start converges.
template <GradientSystem F>
MultistartResult multistart_minimize(const F& f, const std::function<Eigen::VectorXd(Rng&)>& sample,
                                     const FlowConfig& cfg, const MultistartOptions& opt) {
  if (opt.starts < 1) throw std::invalid_argument("multistart needs at least one start");
  const int n = opt.starts;
  std::vector<Trajectory> runs(n);
  auto work = [&](int first, int stride) {
    for (int i = first; i < n; i += stride) {
      Rng rng = Rng::for_index(opt.seed, static_cast<std::uint64_t>(i));
      runs[i] = integrate(f, sample(rng), cfg);
    }
  };
  const int threads = std::max(1, std::min(opt.threads, n));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }

  auto canon = [&](const Eigen::VectorXd& x) { return opt.canonicalize ? opt.canonicalize(x) : x; };
  auto dist = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return opt.distance ? opt.distance(a, b) : (a - b).cwiseAbs().maxCoeff();
  };

  MultistartResult r;
  for (int i = 0; i < n; ++i) {
    const Trajectory& tr = runs[i];
    r.status.push_back(tr.status);
    if (tr.status != FlowStatus::converged) {
      ++r.failed;
      r.terminals.emplace_back();
      continue;
    }
    ++r.converged;
    const FlowSample& end = tr.final();
    r.terminals.push_back(end.x);
    const Eigen::VectorXd c = canon(end.x);
    auto it = std::find_if(r.basins.begin(), r.basins.end(),
                           [&](const Basin& b) { return dist(b.representative, c) <= opt.merge_radius; });
    if (it == r.basins.end()) {
      r.basins.push_back({c, end.value, 1, {i}});
    } else {
      ++it->count;
      it->starts.push_back(i);
    }
  }
  if (r.converged == 0) throw NumericalError("no multistart run converged");
  return r;
}

}  // namespace ccn
