#include "ccn/admissible.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ccn/random.hpp"

namespace ccn {

std::string to_string(Form form) {
  switch (form) {
    case Form::all_to_all:
      return "all_to_all";
    case Form::bipartite_general:
      return "bipartite_general";
    case Form::symmetric:
      return "symmetric";
  }
  return "?";
}

Form form_from_string(const std::string& name) {
  if (name == "all_to_all") return Form::all_to_all;
  if (name == "bipartite_general") return Form::bipartite_general;
  if (name == "symmetric") return Form::symmetric;
  throw std::invalid_argument("unknown form '" + name + "'");
}

AdmissibleFunction::AdmissibleFunction(CellGraph g, Form form, CouplingFunction beta)
    : graph_(std::move(g)), form_(form), beta_(std::move(beta)) {}

std::map<int, SelfConnection> AdmissibleFunction::index_table(SelfTable table, int k) {
  std::map<int, SelfConnection> out;
  for (SelfConnection& s : table) {
    if (s.arity() != k) throw std::invalid_argument("self-connection arity differs from coupling arity");
    const int d = s.degree();
    if (!out.emplace(d, std::move(s)).second)
      throw std::invalid_argument("two self-connections for degree " + std::to_string(d));
  }
  return out;
}

namespace {

// Pure one-variable monomials would duplicate self-connection terms and make
// the split between beta and alpha ambiguous.
void check_pure_terms(const CouplingFunction& beta, bool has_self_terms) {
  const auto& c = beta.polynomial_coefficients();
  if (has_self_terms && c && has_single_variable_terms(*c))
    throw std::invalid_argument(
        "polynomial coupling has single-variable monomials; move them into the self-connections");
}

}  // namespace

AdmissibleFunction AdmissibleFunction::symmetric(CellGraph g, CouplingFunction beta, SelfTable alpha) {
  if (!beta.z2_invariant()) throw std::domain_error("symmetric form requires a Z2-invariant coupling");
  check_pure_terms(beta, !alpha.empty());
  AdmissibleFunction f(std::move(g), Form::symmetric, std::move(beta));
  f.alpha_ = index_table(std::move(alpha), f.arity());
  f.oriented_ = f.graph_.edges();
  f.parts_ = bipartition(f.graph_);
  return f;
}

AdmissibleFunction AdmissibleFunction::bipartite_general(CellGraph g, CouplingFunction beta, SelfTable alpha,
                                                         SelfTable gamma) {
  auto parts = bipartition(g);
  if (!parts) throw std::domain_error("bipartite_general form requires a bipartite graph");
  std::vector<int> deg1, deg2;
  for (Vertex v : parts->part1) deg1.push_back(g.degree(v));
  for (Vertex v : parts->part2) deg2.push_back(g.degree(v));
  std::sort(deg1.begin(), deg1.end());
  std::sort(deg2.begin(), deg2.end());
  std::vector<int> shared;
  std::set_intersection(deg1.begin(), deg1.end(), deg2.begin(), deg2.end(), std::back_inserter(shared));
  if (!shared.empty())
    throw std::domain_error("cells of degree " + std::to_string(shared.front()) +
                            " occur in both parts; use the symmetric form");
  check_pure_terms(beta, !alpha.empty() || !gamma.empty());

  AdmissibleFunction f(std::move(g), Form::bipartite_general, std::move(beta));
  f.alpha_ = index_table(std::move(alpha), f.arity());
  f.gamma_ = index_table(std::move(gamma), f.arity());
  for (const Edge& e : f.graph_.edges())
    f.oriented_.push_back(parts->side(e.u) == 1 ? e : Edge{e.v, e.u});
  f.parts_ = std::move(parts);
  return f;
}

AdmissibleFunction AdmissibleFunction::all_to_all(int n, CouplingFunction beta, SelfTable alpha,
                                                  std::vector<double> elementary) {
  if (!beta.z2_invariant()) throw std::domain_error("all-to-all form requires a Z2-invariant coupling");
  for (const SelfConnection& s : alpha)
    if (s.degree() != n - 1) throw std::invalid_argument("all-to-all self-connection must have degree n-1");
  if (!elementary.empty()) {
    if (beta.arity() != 1) throw std::invalid_argument("elementary symmetric terms require cell dimension 1");
    if (static_cast<int>(elementary.size()) > n + 1)
      throw std::invalid_argument("elementary symmetric polynomial degree exceeds n");
    for (std::size_t j = 0; j < std::min<std::size_t>(3, elementary.size()); ++j)
      if (elementary[j] != 0.0) throw std::invalid_argument("elementary symmetric terms start at degree 3");
  }
  check_pure_terms(beta, !alpha.empty());
  AdmissibleFunction f(complete(n), Form::all_to_all, std::move(beta));
  f.alpha_ = index_table(std::move(alpha), f.arity());
  f.oriented_ = f.graph_.edges();
  f.elementary_ = std::move(elementary);
  return f;
}

void AdmissibleFunction::check_dimension(const Eigen::VectorXd& x) const {
  if (x.size() != dimension())
    throw std::invalid_argument("state has length " + std::to_string(x.size()) + ", expected " +
                                std::to_string(dimension()));
}

const SelfConnection* AdmissibleFunction::self_for(Vertex v) const {
  const auto& table = (form_ == Form::bipartite_general && parts_->side(v) == 2) ? gamma_ : alpha_;
  auto it = table.find(graph_.degree(v));
  return it == table.end() ? nullptr : &it->second;
}

namespace {

// e_0..e_top of the entries of x with positions `skip_a`, `skip_b` removed.
std::vector<double> elementary_values(const Eigen::VectorXd& x, int top, int skip_a = -1, int skip_b = -1) {
  std::vector<double> e(top + 1, 0.0);
  e[0] = 1.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i == skip_a || i == skip_b) continue;
    for (int j = top; j >= 1; --j) e[j] += x[i] * e[j - 1];
  }
  return e;
}

}  // namespace

double AdmissibleFunction::value(const Eigen::VectorXd& x) const {
  check_dimension(x);
  const int k = arity();
  auto cell = [&](Vertex v) { return ConstSpan(x.data() + (v - 1) * k, k); };
  double total = 0.0;
  for (const Edge& e : oriented_) total += beta_(cell(e.u), cell(e.v));
  for (Vertex v = 1; v <= graph_.size(); ++v)
    if (const SelfConnection* s = self_for(v)) total += (*s)(cell(v));
  if (!elementary_.empty()) {
    const int top = static_cast<int>(elementary_.size()) - 1;
    const auto e = elementary_values(x, top);
    for (int j = 3; j <= top; ++j) total += elementary_[j] * e[j];
  }
  return total;
}

Eigen::VectorXd AdmissibleFunction::gradient(const Eigen::VectorXd& x) const {
  check_dimension(x);
  const int k = arity();
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(x.size());
  std::vector<double> ga(k), gb(k);
  auto cell = [&](Vertex v) { return ConstSpan(x.data() + (v - 1) * k, k); };
  for (const Edge& e : oriented_) {
    beta_.gradient(cell(e.u), cell(e.v), ga, gb);
    for (int i = 0; i < k; ++i) {
      grad[(e.u - 1) * k + i] += ga[i];
      grad[(e.v - 1) * k + i] += gb[i];
    }
  }
  for (Vertex v = 1; v <= graph_.size(); ++v)
    if (const SelfConnection* s = self_for(v)) {
      s->gradient(cell(v), ga);
      for (int i = 0; i < k; ++i) grad[(v - 1) * k + i] += ga[i];
    }
  if (!elementary_.empty()) {
    const int top = static_cast<int>(elementary_.size()) - 1;
    for (Eigen::Index v = 0; v < x.size(); ++v) {
      const auto e = elementary_values(x, top - 1, static_cast<int>(v));
      for (int j = 3; j <= top; ++j) grad[v] += elementary_[j] * e[j - 1];
    }
  }
  return grad;
}

Eigen::MatrixXd AdmissibleFunction::hessian(const Eigen::VectorXd& x) const {
  if (arity() != 1) throw std::domain_error("Hessian assembly requires cell dimension 1");
  check_dimension(x);
  const int n = graph_.size();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : oriented_) {
    const SecondPartials s = beta_.hessian(x[e.u - 1], x[e.v - 1]);
    h(e.u - 1, e.u - 1) += s.xx;
    h(e.v - 1, e.v - 1) += s.yy;
    h(e.u - 1, e.v - 1) += s.xy;
    h(e.v - 1, e.u - 1) += s.xy;
  }
  for (Vertex v = 1; v <= n; ++v)
    if (const SelfConnection* s = self_for(v)) h(v - 1, v - 1) += s->second_derivative(x[v - 1]);
  if (!elementary_.empty()) {
    const int top = static_cast<int>(elementary_.size()) - 1;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) {
        const auto e = elementary_values(x, std::max(top - 2, 0), u, v);
        double sum = 0.0;
        for (int j = 3; j <= top; ++j) sum += elementary_[j] * e[j - 2];
        h(u, v) += sum;
        h(v, u) += sum;
      }
  }
  return h;
}

// ---------------------------------------------------------------------------

bool AdmissibilityReport::failed(char check) const {
  return std::any_of(violations.begin(), violations.end(),
                     [check](const AdmissibilityViolation& v) { return v.check == check; });
}

namespace {

constexpr double kValidationStep = 1e-3;
constexpr double kValidationRel = 1e-4;

struct Recorder {
  std::map<std::pair<char, std::vector<Vertex>>, AdmissibilityViolation> worst;

  void add(char check, std::vector<Vertex> cells, double magnitude, double threshold) {
    if (!(std::abs(magnitude) > threshold) && std::isfinite(magnitude)) return;
    auto key = std::pair{check, cells};
    auto it = worst.find(key);
    if (it == worst.end() || std::abs(magnitude) > std::abs(it->second.magnitude))
      worst[key] = AdmissibilityViolation{check, std::move(cells), magnitude, threshold};
  }
};

}  // namespace

AdmissibilityReport validate_admissibility(const CellGraph& g,
                                           const std::function<double(const Eigen::VectorXd&)>& f,
                                           int samples, std::uint64_t seed, double box) {
  const int n = g.size();
  const double h = kValidationStep;
  Rng rng(seed);
  Recorder rec;
  AdmissibilityReport report;
  report.samples = samples;

  auto random_point = [&] {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(-box, box);
    return x;
  };
  auto partial = [&](Eigen::VectorXd x, int i) {
    const double xi = x[i];
    x[i] = xi + kFirstDiffStep;
    const double fp = f(x);
    x[i] = xi - kFirstDiffStep;
    const double fm = f(x);
    return (fp - fm) / (2.0 * kFirstDiffStep);
  };

  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXd x0 = random_point();
    const double threshold = kValidationRel * (1.0 + std::abs(f(x0)));

    // (a) mixed second partials across non-edges.
    for (int u = 1; u <= n; ++u)
      for (int v = u + 1; v <= n; ++v) {
        if (g.adjacent(u, v)) continue;
        double acc = 0.0;
        for (int su : {1, -1})
          for (int sv : {1, -1}) {
            Eigen::VectorXd x = x0;
            x[u - 1] += su * h;
            x[v - 1] += sv * h;
            acc += su * sv * f(x);
          }
        rec.add('a', {u, v}, acc / (4.0 * h * h), threshold);
      }

    // (b) mixed third partials over distinct triples.
    if (!is_complete(g)) {
      for (int u = 1; u <= n; ++u)
        for (int v = u + 1; v <= n; ++v)
          for (int w = v + 1; w <= n; ++w) {
            double acc = 0.0;
            for (int su : {1, -1})
              for (int sv : {1, -1})
                for (int sw : {1, -1}) {
                  Eigen::VectorXd x = x0;
                  x[u - 1] += su * h;
                  x[v - 1] += sv * h;
                  x[w - 1] += sw * h;
                  acc += su * sv * sw * f(x);
                }
            rec.add('b', {u, v, w}, acc / (8.0 * h * h * h), threshold);
          }
    }

    // (c) equal-degree cells see the same partial derivative at matching
    // local configurations, whatever the ordering of their inputs.
    for (int u = 1; u <= n; ++u)
      for (int v = u; v <= n; ++v) {
        const int d = g.degree(u);
        if (g.degree(v) != d) continue;
        const double a = rng.uniform(-box, box);
        std::vector<double> b(d);
        for (double& bi : b) bi = rng.uniform(-box, box);
        auto place = [&](Vertex c) {
          Eigen::VectorXd x = random_point();
          std::vector<double> perm = b;
          for (int i = d - 1; i > 0; --i) std::swap(perm[i], perm[rng.integer(0, i)]);
          const auto& in = g.inputs(c);
          for (int i = 0; i < d; ++i) x[in[i] - 1] = perm[i];
          x[c - 1] = a;
          return x;
        };
        const Eigen::VectorXd xu = place(u), xv = place(v);
        const double thr = kValidationRel * (1.0 + std::max(std::abs(f(xu)), std::abs(f(xv))));
        rec.add('c', {u, v}, partial(xu, u - 1) - partial(xv, v - 1), thr);
      }
  }
  for (auto& [key, v] : rec.worst) report.violations.push_back(v);
  return report;
}

}  // namespace ccn
