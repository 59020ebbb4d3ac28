// Command-line front end: graph reports, synchrony and two-colour
// classification, ring equilibria, ground states, gradient flows and inertia
// bounds. Every subcommand emits one table (CSV) or document (JSON); with
// --out-dir the files are written atomically next to a run manifest.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ccn/admissible.hpp"
#include "ccn/errors.hpp"
#include "ccn/flow.hpp"
#include "ccn/io.hpp"
#include "ccn/ring.hpp"
#include "ccn/spectra.hpp"
#include "ccn/synchrony.hpp"

#ifndef CCN_VERSION
#define CCN_VERSION "dev"
#endif

using namespace ccn;

namespace {

enum class Format { csv, json };

struct Globals {
  std::uint64_t seed = 1;
  std::string out_dir;
  Format format = Format::csv;
  int threads = 1;
};

/// What a subcommand produced: one table, one document and optional extra files.
struct Report {
  std::string stem;
  CsvTable table{{}};
  Json document = Json::object();
  std::vector<std::pair<std::string, std::string>> extra;  // file name, content
  std::vector<std::string> inputs;
  int exit_code = 0;
};

// ---------------------------------------------------------------- parsing

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (item.empty() || used != item.size()) throw std::invalid_argument("bad number '" + item + "' in " + what);
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument(what + " is empty");
  return out;
}

struct Range {
  double lo;
  double hi;
  int steps;
};

/// "lo:hi" or "lo:hi:steps".
Range parse_range(const std::string& s, const std::string& what, int default_steps) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 2 && parts.size() != 3) throw std::invalid_argument(what + " must look like lo:hi[:steps]");
  Range r{parse_list(parts[0], what)[0], parse_list(parts[1], what)[0], default_steps};
  if (parts.size() == 3) {
    const double st = parse_list(parts[2], what)[0];
    if (st != std::floor(st) || st < 1) throw std::invalid_argument(what + ": steps must be a positive integer");
    r.steps = static_cast<int>(st);
  }
  if (!(r.lo < r.hi)) throw std::invalid_argument(what + ": need lo < hi");
  return r;
}

void note_input(Report& r, const std::string& spec) {
  if (std::filesystem::exists(spec)) r.inputs.push_back(spec);
}

std::string fmt(double v) { return format_double(v); }
std::string fmt(int v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }

std::string join(const Eigen::VectorXd& v, char sep = ';') {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += fmt(v[i]);
  }
  return s;
}

Json to_json(const Eigen::VectorXd& v) { return Json(std::vector<double>(v.begin(), v.end())); }
Json to_json(const Inertia& in) { return Json{in.n_minus, in.n_zero, in.n_plus}; }

// ---------------------------------------------------------------- SVG

/// Minimal static plot: scatter layers and polylines on linear axes.
class SvgPlot {
 public:
  SvgPlot(std::string title, std::string xlabel, std::string ylabel, double x0, double x1, double y0, double y1)
      : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)),
        x0_(x0), x1_(x1), y0_(y0), y1_(y1) {
    if (x1_ <= x0_) x1_ = x0_ + 1;
    if (y1_ <= y0_) y1_ = y0_ + 1;
  }

  void point(double x, double y, const std::string& colour) {
    body_ << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"2.5\" fill=\"" << colour << "\"/>\n";
  }
  void line(const std::vector<std::pair<double, double>>& pts, const std::string& colour) {
    body_ << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : pts) body_ << px(x) << ',' << py(y) << ' ';
    body_ << "\"/>\n";
  }
  void legend(const std::string& label, const std::string& colour) { legend_.emplace_back(label, colour); }

  std::string str() const {
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<rect x=\"" << kM << "\" y=\"" << kM << "\" width=\"" << kW - 2 * kM << "\" height=\"" << kH - 2 * kM
      << "\" fill=\"none\" stroke=\"black\"/>\n"
      << text(kW / 2.0, kM / 2.0, title_) << text(kW / 2.0, kH - kM / 3.0, xlabel_)
      << text(kM / 3.0, kH / 2.0, ylabel_) << text(kM, kH - kM / 1.6, fmt_short(x0_))
      << text(kW - kM, kH - kM / 1.6, fmt_short(x1_)) << text(kM / 1.5, kH - kM, fmt_short(y0_))
      << text(kM / 1.5, kM, fmt_short(y1_)) << body_.str();
    for (std::size_t i = 0; i < legend_.size(); ++i) {
      const double y = kM + 15.0 + 15.0 * static_cast<double>(i);
      o << "<rect x=\"" << kW - kM - 150 << "\" y=\"" << y - 8 << "\" width=\"8\" height=\"8\" fill=\""
        << legend_[i].second << "\"/>\n"
        << "<text x=\"" << kW - kM - 138 << "\" y=\"" << y << "\" font-size=\"11\">" << legend_[i].first
        << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
  }

 private:
  static constexpr int kW = 640, kH = 480, kM = 60;
  double px(double x) const { return kM + (x - x0_) / (x1_ - x0_) * (kW - 2 * kM); }
  double py(double y) const { return kH - kM - (y - y0_) / (y1_ - y0_) * (kH - 2 * kM); }
  static std::string fmt_short(double v) {
    std::ostringstream o;
    o << std::setprecision(4) << v;
    return o.str();
  }
  static std::string text(double x, double y, const std::string& s) {
    std::ostringstream o;
    o << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"12\" text-anchor=\"middle\">" << s << "</text>\n";
    return o.str();
  }

  std::string title_, xlabel_, ylabel_;
  double x0_, x1_, y0_, y1_;
  std::ostringstream body_;
  std::vector<std::pair<std::string, std::string>> legend_;
};

// ---------------------------------------------------------------- graph-info

Report graph_info(const std::string& spec) {
  Report r;
  r.stem = "graph_info";
  note_input(r, spec);
  const CellGraph g = load_graph(spec);
  const auto parts = bipartition(g);
  const auto reg = is_regular(g);
  const auto dm = is_dm_graph(g);
  const Eigen::VectorXd spectrum = laplacian_spectrum(g);

  Json degrees = Json::array();
  for (int v = 1; v <= g.size(); ++v) degrees.push_back(g.degree(v));
  Json& d = r.document;
  d["n"] = g.size();
  d["edges"] = graph_to_json(g)["edges"];
  d["loops"] = g.loops();
  d["degrees"] = degrees;
  d["regular"] = reg ? Json(*reg) : Json(nullptr);
  d["bipartite"] = parts.has_value();
  d["parts"] = parts ? Json{{"part1", parts->part1}, {"part2", parts->part2}} : Json(nullptr);
  d["dm"] = dm ? Json{{"d", dm->d}, {"m", dm->m}} : Json(nullptr);
  d["complete"] = is_complete(g);
  d["laplacian_spectrum"] = to_json(spectrum);
  d["laplacian_max"] = spectrum.maxCoeff();

  r.table = CsvTable({"vertex", "degree", "part", "inputs", "laplacian_eigenvalue"});
  for (int v = 1; v <= g.size(); ++v) {
    std::string in;
    for (Vertex u : g.inputs(v)) in += (in.empty() ? "" : ";") + std::to_string(u);
    r.table.add({fmt(v), fmt(g.degree(v)), parts ? fmt(parts->side(v)) : "", in, fmt(spectrum[v - 1])});
  }
  return r;
}

// ---------------------------------------------------------------- sync-classify

const std::vector<std::string> kSyncHeader{"x0",      "alpha",  "beta",   "lambda_max", "verdict", "eigen_verdict",
                                           "n_minus", "n_zero", "n_plus", "wedge",      "coupling_minimum"};

void add_sync_row(Report& r, const SyncClassification& c, double lambda, std::optional<double> x0) {
  r.table.add({x0 ? fmt(*x0) : "", fmt(c.alpha), fmt(c.beta), fmt(lambda), to_string(c.verdict),
               to_string(c.eigen_verdict), fmt(c.inertia.n_minus), fmt(c.inertia.n_zero), fmt(c.inertia.n_plus),
               fmt(c.wedge), fmt(c.coupling_minimum)});
  Json row{{"alpha", c.alpha},
           {"beta", c.beta},
           {"verdict", to_string(c.verdict)},
           {"eigen_verdict", to_string(c.eigen_verdict)},
           {"inertia", to_json(c.inertia)},
           {"wedge", c.wedge},
           {"coupling_minimum", c.coupling_minimum},
           {"spectrum", to_json(c.closed_form_spectrum)}};
  row["point"] = x0 ? Json{*x0} : Json(nullptr);
  r.document["rows"].push_back(row);
}

struct SyncArgs {
  std::string graph, coupling, grid, box = "-2:2";
  std::optional<double> alpha, beta;
  bool svg = false;
};

Report sync_classify(const SyncArgs& a) {
  Report r;
  r.stem = "sync_classify";
  note_input(r, a.graph);
  const CellGraph g = load_graph(a.graph);
  if (!is_regular(g))
    throw std::domain_error("graph is not regular; use kmn-spectrum for K_{m,n} or dm-classify for (d,m)-graphs");
  const Wedge w = wedge_region(g);
  r.table = CsvTable(kSyncHeader);
  r.document["rows"] = Json::array();
  r.document["wedge"] = Json{{"d", w.d},         {"lambda_max", w.lambda_max}, {"slope", w.slope},
                             {"angle", w.angle}, {"empty", w.empty},           {"maximal", w.maximal}};

  if (!a.grid.empty()) {
    const Range gr = parse_range(a.grid, "--grid", 41);
    const int steps = std::max(gr.steps, 2);
    r.document["mode"] = "sweep";
    SvgPlot plot("synchronous verdicts", "alpha", "beta", gr.lo, gr.hi, gr.lo, gr.hi);
    plot.legend("network and coupling minimum", "#2b8a3e");
    plot.legend("wedge: network minimum only", "#e8590c");
    plot.legend("not a network minimum", "#adb5bd");
    int wedge_rows = 0;
    for (int i = 0; i < steps; ++i)
      for (int j = 0; j < steps; ++j) {
        const double al = gr.lo + (gr.hi - gr.lo) * i / (steps - 1);
        const double be = gr.lo + (gr.hi - gr.lo) * j / (steps - 1);
        const SyncClassification c = classify_synchronous_params(g, al, be);
        add_sync_row(r, c, w.lambda_max, std::nullopt);
        wedge_rows += c.wedge;
        const bool fmin = c.verdict == Verdict::minimum;
        plot.point(al, be, c.wedge ? "#e8590c" : fmin ? "#2b8a3e" : "#adb5bd");
      }
    r.document["wedge_rows"] = wedge_rows;
    if (a.svg) r.extra.emplace_back("sync_classify.svg", plot.str());
    return r;
  }
  if (a.alpha || a.beta) {
    if (!a.alpha || !a.beta) throw std::invalid_argument("--alpha and --beta go together");
    r.document["mode"] = "parameters";
    add_sync_row(r, classify_synchronous_params(g, *a.alpha, *a.beta), w.lambda_max, std::nullopt);
    return r;
  }
  if (a.coupling.empty()) throw std::invalid_argument("sync-classify needs --coupling, --alpha/--beta or --grid");
  note_input(r, a.coupling);
  const CouplingFunction phi = load_coupling(a.coupling).bivariate;
  const Range box = parse_range(a.box, "--box", 512);
  const SyncCriticalSet crit = find_synchronous_critical(phi, box.lo, box.hi, std::max(box.steps, 2));
  r.document["mode"] = "coupling";
  r.document["continuum"] = crit.continuum;
  std::vector<double> points = crit.roots;
  // Every point of a continuum is critical; one representative suffices.
  if (crit.continuum && points.empty()) points.push_back(0.5 * (box.lo + box.hi));
  for (double x0 : points) add_sync_row(r, classify_synchronous(g, phi, x0), w.lambda_max, x0);
  return r;
}

// ---------------------------------------------------------------- kmn-spectrum

Report kmn_spectrum(int m, int n, double alpha, double beta) {
  Report r;
  r.stem = "kmn_spectrum";
  const CellGraph g = complete_bipartite(m, n);
  // K_{n,n} is regular and goes through the synchronous formula.
  const Eigen::VectorXd closed =
      m == n ? synchronous_hessian_spectrum(g, alpha, beta) : kmn_hessian_spectrum(m, n, alpha, beta);
  const Eigen::VectorXd direct = symmetric_eigenvalues(synchronous_hessian(g, alpha, beta));
  const Inertia in = inertia(direct);
  r.table = CsvTable({"index", "closed_form", "eigensolve", "abs_diff", "n_minus", "n_zero", "n_plus"});
  for (Eigen::Index i = 0; i < closed.size(); ++i)
    r.table.add({fmt(static_cast<int>(i)), fmt(closed[i]), fmt(direct[i]), fmt(std::abs(closed[i] - direct[i])),
                 fmt(in.n_minus), fmt(in.n_zero), fmt(in.n_plus)});
  r.document = Json{{"m", m},
                    {"n", n},
                    {"alpha", alpha},
                    {"beta", beta},
                    {"route", m == n ? "synchronous" : "kmn"},
                    {"closed_form", to_json(closed)},
                    {"eigensolve", to_json(direct)},
                    {"max_abs_diff", (closed - direct).cwiseAbs().maxCoeff()},
                    {"inertia", to_json(in)},
                    {"verdict", to_string(verdict_from_spectrum(closed))},
                    {"coupling_minimum", coupling_minimum(alpha, beta)}};
  return r;
}

// ---------------------------------------------------------------- dm-classify

struct DmArgs {
  std::string graph, coupling, box = "-2:2";
  std::optional<double> alpha, gamma, beta;
};

Report dm_classify(const DmArgs& a) {
  Report r;
  r.stem = "dm_classify";
  note_input(r, a.graph);
  const CellGraph g = load_graph(a.graph);
  const auto dm = is_dm_graph(g);
  if (!dm) throw std::domain_error("graph is not a (d,m)-graph");
  r.table = CsvTable({"x0", "y0", "alpha", "gamma", "beta", "xi_min", "verdict", "eigen_verdict", "n_minus",
                      "n_zero", "n_plus"});
  r.document = Json{{"d", dm->d}, {"m", dm->m}, {"rows", Json::array()}};
  auto add = [&r](const SyncClassification& c) {
    const std::string x0 = c.point.empty() ? "" : fmt(c.point[0]);
    const std::string y0 = c.point.empty() ? "" : fmt(c.point[1]);
    r.table.add({x0, y0, fmt(c.alpha), fmt(*c.gamma), fmt(c.beta), fmt(c.closed_form_spectrum[0]),
                 to_string(c.verdict), to_string(c.eigen_verdict), fmt(c.inertia.n_minus), fmt(c.inertia.n_zero),
                 fmt(c.inertia.n_plus)});
    r.document["rows"].push_back(Json{{"point", c.point.empty() ? Json(nullptr) : Json(c.point)},
                                      {"alpha", c.alpha},
                                      {"gamma", *c.gamma},
                                      {"beta", c.beta},
                                      {"xi_min", c.closed_form_spectrum[0]},
                                      {"verdict", to_string(c.verdict)},
                                      {"eigen_verdict", to_string(c.eigen_verdict)},
                                      {"inertia", to_json(c.inertia)}});
  };
  if (a.alpha || a.gamma || a.beta) {
    if (!a.alpha || !a.gamma || !a.beta) throw std::invalid_argument("--alpha, --gamma and --beta go together");
    add(classify_two_colour_params(g, *a.alpha, *a.gamma, *a.beta));
    return r;
  }
  if (a.coupling.empty()) throw std::invalid_argument("dm-classify needs --coupling or --alpha/--gamma/--beta");
  note_input(r, a.coupling);
  const CouplingFunction phi = load_coupling(a.coupling).bivariate;
  const Range box = parse_range(a.box, "--box", 64);
  const TwoColourSet set = find_two_colour_critical(g, phi, box.lo, box.hi, std::max(box.steps, 2));
  r.document["continuum"] = set.continuum;
  for (const TwoColourPattern& p : set.patterns) add(classify_two_colour(g, phi, p));
  return r;
}

// ---------------------------------------------------------------- ring commands

PhaseCoupling phase_coupling(Report& r, const std::string& spec) {
  note_input(r, spec);
  const CouplingSpec c = load_coupling(spec);
  if (!c.phase) throw std::invalid_argument("ring commands need a phase coupling family (cosine, two_harmonic)");
  return *c.phase;
}

/// Isotropy label with the ring size and shift filled in, e.g. Z4(tau,1/4).
std::string isotropy_label(const RingEquilibrium& e, int n) {
  const std::string N = std::to_string(n);
  switch (e.isotropy) {
    case Isotropy::synchronous:
      return "D" + N;
    case Isotropy::twisted:
    case Isotropy::antiphase: {
      const int g = std::gcd(e.m, n);
      return "Z" + N + "(tau," + std::to_string(e.m / g) + "/" + std::to_string(n / g) + ")";
    }
    case Isotropy::trivial:
      break;
  }
  return "1";
}

Report ring_equilibria(int n, const std::string& coupling, int grid) {
  Report r;
  r.stem = "ring_equilibria";
  const RingFunction rf(n, phase_coupling(r, coupling));
  const auto eqs = enumerate_equilibria(rf, EnumerationOptions{grid});
  r.table = CsvTable({"isotropy", "m", "p", "q", "xi", "eta", "energy", "n_minus", "n_zero", "n_plus", "stable"});
  r.document = Json{{"n", n}, {"coupling", rf.coupling().name()}, {"equilibria", Json::array()}};
  for (const RingEquilibrium& e : eqs) {
    r.table.add({isotropy_label(e, n), fmt(e.m), fmt(e.p), fmt(e.q), e.xi ? fmt(*e.xi) : "", e.eta ? fmt(*e.eta) : "",
                 fmt(e.energy), fmt(e.inertia.n_minus), fmt(e.inertia.n_zero), fmt(e.inertia.n_plus),
                 to_string(e.eigen)});
    r.document["equilibria"].push_back(Json{{"isotropy", isotropy_label(e, n)},
                                            {"m", e.m},
                                            {"p", e.p},
                                            {"q", e.q},
                                            {"xi", e.xi ? Json(*e.xi) : Json(nullptr)},
                                            {"eta", e.eta ? Json(*e.eta) : Json(nullptr)},
                                            {"boundary", e.boundary},
                                            {"continuum", e.continuum},
                                            {"theta", to_json(e.theta)},
                                            {"differences", to_json(e.differences)},
                                            {"energy", e.energy},
                                            {"residual", e.residual},
                                            {"weights", to_json(e.weights)},
                                            {"eigenvalues", to_json(e.eigenvalues)},
                                            {"inertia", to_json(e.inertia)},
                                            {"rule", to_string(e.rule)},
                                            {"stable", to_string(e.eigen)},
                                            {"consistent", e.consistent()}});
  }
  return r;
}

Report ring_ground_state(const std::vector<int>& ns, const std::string& coupling, int starts, const Globals& g,
                         bool svg) {
  Report r;
  r.stem = "ring_ground_state";
  const PhaseCoupling delta = phase_coupling(r, coupling);
  r.table = CsvTable({"n", "formula_energy", "empirical_energy", "abs_diff", "state_distance", "starts", "converged",
                      "basins", "agrees"});
  r.document = Json{{"coupling", delta.name()}, {"rows", Json::array()}};
  std::optional<int> smallest_odd;
  std::vector<std::pair<double, double>> formula_pts, empirical_pts;
  for (int n : ns) {
    const RingFunction rf(n, delta);
    FlowConfig cfg;
    const GroundStateReport gs = ground_state(rf, starts, g.seed, 1e-6, cfg);
    r.table.add({fmt(n), fmt(gs.formula_energy), fmt(gs.empirical_energy),
                 fmt(std::abs(gs.formula_energy - gs.empirical_energy)), fmt(gs.state_distance), fmt(gs.starts),
                 fmt(gs.converged), fmt(gs.basins), fmt(gs.agrees)});
    r.document["rows"].push_back(Json{{"n", n},
                                      {"formula_energy", gs.formula_energy},
                                      {"formula_theta", to_json(gs.formula_theta)},
                                      {"empirical_energy", gs.empirical_energy},
                                      {"empirical_theta", to_json(gs.empirical_theta)},
                                      {"state_distance", gs.state_distance},
                                      {"starts", gs.starts},
                                      {"converged", gs.converged},
                                      {"basins", gs.basins},
                                      {"agrees", gs.agrees}});
    if (n % 2 == 1 && gs.agrees && !smallest_odd) smallest_odd = n;
    formula_pts.emplace_back(n, gs.formula_energy / n);
    empirical_pts.emplace_back(n, gs.empirical_energy / n);
  }
  r.document["smallest_agreeing_odd_n"] = smallest_odd ? Json(*smallest_odd) : Json(nullptr);
  if (svg) {
    double lo = 0, hi = 0;
    for (const auto& p : formula_pts) lo = std::min(lo, p.second), hi = std::max(hi, p.second);
    for (const auto& p : empirical_pts) lo = std::min(lo, p.second), hi = std::max(hi, p.second);
    SvgPlot plot("ground-state energy per cell", "n", "energy / n", ns.front(), ns.back(), lo - 0.05, hi + 0.05);
    plot.line(formula_pts, "#1c7ed6");
    for (const auto& [x, y] : empirical_pts) plot.point(x, y, "#e8590c");
    plot.legend("formula", "#1c7ed6");
    plot.legend("multistart minimum", "#e8590c");
    r.extra.emplace_back("ring_ground_state.svg", plot.str());
  }
  return r;
}

// ---------------------------------------------------------------- flow

struct FlowArgs {
  std::string function, coupling, x0, box = "0:1", integrator = "rk4";
  int ring = 0;
  int starts = 0;
  double h = 1e-2, max_time = 1e4, tol = 1e-10;
  bool torus = false;
  int sample_every = 10;
};

template <GradientSystem F>
Report run_flow(const F& f, int dim, const FlowArgs& a, FlowConfig cfg, const Globals& g,
                std::function<Eigen::VectorXd(const Eigen::VectorXd&)> canon) {
  Report r;
  if (!a.x0.empty()) {
    r.stem = "flow_trajectory";
    const std::vector<double> v = parse_list(a.x0, "--x0");
    if (static_cast<int>(v.size()) != dim)
      throw std::invalid_argument("--x0 has " + std::to_string(v.size()) + " entries, expected " +
                                  std::to_string(dim));
    const Trajectory tr = integrate(f, Eigen::Map<const Eigen::VectorXd>(v.data(), dim), cfg);
    std::vector<std::string> header{"t"};
    for (int i = 1; i <= dim; ++i) header.push_back("x" + std::to_string(i));
    header.push_back("energy");
    header.push_back("grad_norm");
    r.table = CsvTable(header);
    r.document = Json{{"status", to_string(tr.status)}, {"steps", tr.steps}, {"samples", Json::array()}};
    for (const FlowSample& s : tr.samples) {
      std::vector<std::string> row{fmt(s.t)};
      for (double x : s.x) row.push_back(fmt(x));
      row.push_back(fmt(s.value));
      row.push_back(fmt(s.grad_norm));
      r.table.add(row);
      r.document["samples"].push_back(
          Json{{"t", s.t}, {"x", to_json(s.x)}, {"energy", s.value}, {"grad_norm", s.grad_norm}});
    }
    r.document["final"] = Json{{"x", to_json(tr.final().x)}, {"energy", tr.final().value}};
    if (tr.status != FlowStatus::converged) r.exit_code = 3;
    return r;
  }
  if (a.starts < 1) throw std::invalid_argument("flow needs --x0 or --starts");
  r.stem = "flow_basins";
  const Range box = parse_range(a.box, "--box", 1);
  MultistartOptions opt;
  opt.starts = a.starts;
  opt.seed = g.seed;
  opt.threads = g.threads;
  opt.canonicalize = std::move(canon);
  const MultistartResult res = multistart_minimize(
      f,
      [&](Rng& rng) {
        Eigen::VectorXd x(dim);
        for (double& v : x) v = rng.uniform(box.lo, box.hi);
        return x;
      },
      cfg, opt);
  r.table = CsvTable({"basin", "count", "energy", "representative"});
  r.document = Json{{"starts", a.starts},
                    {"converged", res.converged},
                    {"failed", res.failed},
                    {"best_energy", res.best().value},
                    {"basins", Json::array()}};
  for (std::size_t i = 0; i < res.basins.size(); ++i) {
    const Basin& b = res.basins[i];
    r.table.add({fmt(static_cast<int>(i)), fmt(b.count), fmt(b.value), join(b.representative)});
    r.document["basins"].push_back(
        Json{{"count", b.count}, {"energy", b.value}, {"representative", to_json(b.representative)}});
  }
  if (res.failed > 0) r.exit_code = 3;
  return r;
}

Report flow(const FlowArgs& a, const Globals& g) {
  FlowConfig cfg;
  if (a.integrator == "rk4")
    cfg.integrator = Integrator::rk4;
  else if (a.integrator == "adaptive")
    cfg.integrator = Integrator::adaptive;
  else
    throw std::invalid_argument("--integrator must be rk4 or adaptive");
  cfg.h = a.h;
  cfg.max_time = a.max_time;
  cfg.tol = a.tol;
  cfg.torus = a.torus;
  cfg.sample_every = a.sample_every;
  cfg.validate();

  if (!a.function.empty() == (a.ring > 0))
    throw std::invalid_argument("flow needs exactly one of --function or --ring");
  if (!a.function.empty()) {
    const AdmissibleFunction f = load_function(a.function);
    Report r = run_flow(f, f.dimension(), a, cfg, g, {});
    r.inputs.insert(r.inputs.begin(), a.function);
    return r;
  }
  Report tmp;
  const RingFunction rf(a.ring, phase_coupling(tmp, a.coupling.empty() ? "cosine" : a.coupling));
  cfg.torus = true;
  Report r = run_flow(rf, a.ring, a, cfg, g, [](const Eigen::VectorXd& t) { return canonical_differences(t); });
  r.inputs = tmp.inputs;
  return r;
}

// ---------------------------------------------------------------- inertia-bounds

struct BoundsArgs {
  std::string graph, weights, signs;
  int samples = 0;
};

Report inertia_bounds_cmd(const BoundsArgs& a, const Globals& g) {
  Report r;
  r.stem = "inertia_bounds";
  note_input(r, a.graph);
  const CellGraph graph = load_graph(a.graph);
  const std::size_t m = graph.edges().size();
  if (a.weights.empty() == a.signs.empty()) throw std::invalid_argument("give exactly one of --weights or --signs");

  std::vector<int> signs;
  std::vector<std::vector<double>> draws;
  if (!a.weights.empty()) {
    const std::vector<double> w = parse_list(a.weights, "--weights");
    if (w.size() != m)
      throw std::invalid_argument("--weights needs " + std::to_string(m) + " entries (one per edge)");
    for (double v : w) signs.push_back((v > 0) - (v < 0));
    draws.push_back(w);
  } else {
    std::string signs_ascii = a.signs;
    // Accept the typographic minus sign as well.
    for (std::size_t pos; (pos = signs_ascii.find("\u2212")) != std::string::npos;) signs_ascii.replace(pos, 3, "-");
    if (signs_ascii.size() != m) throw std::invalid_argument("--signs needs " + std::to_string(m) + " of +, -, 0");
    for (char c : signs_ascii) {
      if (c != '+' && c != '-' && c != '0') throw std::invalid_argument("--signs accepts only +, - and 0");
      signs.push_back(c == '+' ? 1 : c == '-' ? -1 : 0);
    }
    for (int s = 0; s < a.samples; ++s) {
      Rng rng = Rng::for_index(g.seed, static_cast<std::uint64_t>(s));
      std::vector<double> w(m);
      for (std::size_t i = 0; i < m; ++i) w[i] = signs[i] * rng.uniform(0.1, 10.0);
      draws.push_back(w);
    }
  }
  const InertiaBounds b = inertia_bounds(graph, signs);
  r.table = CsvTable({"sample", "c_plus", "c_minus", "components", "n_minus_lo", "n_minus_hi", "n_zero_lo",
                      "n_zero_hi", "n_plus_lo", "n_plus_hi", "n_minus", "n_zero", "n_plus", "inside"});
  Json edges = Json::array();
  for (const Edge& e : graph.edges()) edges.push_back({e.u, e.v});
  r.document = Json{{"edges", edges},
                    {"signs", signs},
                    {"c_plus", b.c_plus},
                    {"c_minus", b.c_minus},
                    {"components", b.components},
                    {"n_minus", {b.n_minus_lo, b.n_minus_hi}},
                    {"n_zero", {b.n_zero_lo, b.n_zero_hi}},
                    {"n_plus", {b.n_plus_lo, b.n_plus_hi}},
                    {"samples", Json::array()}};
  auto bounds_cells = [&b](int sample) {
    return std::vector<std::string>{fmt(sample),         fmt(b.c_plus),       fmt(b.c_minus),   fmt(b.components),
                                    fmt(b.n_minus_lo),   fmt(b.n_minus_hi),   fmt(b.n_zero_lo), fmt(b.n_zero_hi),
                                    fmt(b.n_plus_lo),    fmt(b.n_plus_hi)};
  };
  int violations = 0;
  if (draws.empty()) {
    auto row = bounds_cells(-1);
    row.insert(row.end(), {"", "", "", ""});
    r.table.add(row);
  }
  for (std::size_t s = 0; s < draws.size(); ++s) {
    const Inertia in = WeightedLaplacian(graph, draws[s]).inertia();
    const bool inside = b.contains(in);
    violations += !inside;
    auto row = bounds_cells(static_cast<int>(s));
    row.insert(row.end(), {fmt(in.n_minus), fmt(in.n_zero), fmt(in.n_plus), fmt(inside)});
    r.table.add(row);
    r.document["samples"].push_back(Json{{"inertia", to_json(in)}, {"inside", inside}});
  }
  r.document["violations"] = violations;
  return r;
}

// ---------------------------------------------------------------- output

std::string render(const Report& r, Format f) {
  return f == Format::csv ? r.table.str() : r.document.dump(2) + "\n";
}

Json collect_parameters(const CLI::App& sub) {
  Json p = Json::object();
  for (const CLI::Option* o : sub.get_options()) {
    if (o->count() == 0 || o->get_name() == "--help") continue;
    std::string name = o->get_name(false, true);
    while (!name.empty() && name.front() == '-') name.erase(name.begin());
    const auto& res = o->results();
    p[name] = res.size() == 1 ? Json(res.front()) : Json(res);
  }
  return p;
}

int emit(const Report& r, const Globals& g, const CLI::App& sub) {
  const std::string ext = g.format == Format::csv ? ".csv" : ".json";
  const std::string main = render(r, g.format);
  if (g.out_dir.empty()) {
    std::cout << main;
    return r.exit_code;
  }
  const std::filesystem::path dir(g.out_dir);
  RunManifest m;
  m.command = sub.get_name();
  m.inputs = r.inputs;
  m.parameters = collect_parameters(sub);
  m.parameters["format"] = g.format == Format::csv ? "csv" : "json";
  m.parameters["threads"] = g.threads;
  m.seed = g.seed;
  m.version = CCN_VERSION;
  write_atomic(dir / (r.stem + ext), main);
  m.outputs.push_back(r.stem + ext);
  for (const auto& [name, content] : r.extra) {
    write_atomic(dir / name, content);
    m.outputs.push_back(name);
  }
  m.outputs.push_back("manifest.json");
  write_atomic(dir / "manifest.json", m.to_json().dump(2) + "\n");
  std::cerr << "wrote " << (dir / (r.stem + ext)).string() << "\n";
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled cell network analysis: synchrony, two-colour patterns, ring equilibria and flows"};
  app.set_version_flag("--version", std::string(CCN_VERSION));
  app.require_subcommand(1);

  Globals g;
  std::string format = "csv";
  app.add_option("--seed", g.seed, "Seed for every random choice")->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "Write outputs and manifest.json here instead of stdout");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads for multistart runs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::function<Report()> run;

  auto* gi = app.add_subcommand("graph-info", "Degrees, regularity, bipartition, (d,m) status, Laplacian spectrum");
  std::string gi_graph;
  gi->add_option("graph", gi_graph, "Graph file or built-in (ring:N, complete:N, kmn:M:N, cube, petersen, ...)")
      ->required();
  gi->callback([&] { run = [&] { return graph_info(gi_graph); }; });

  auto* sc = app.add_subcommand("sync-classify", "Synchronous critical points, verdicts and wedge report");
  SyncArgs sa;
  double sc_alpha = 0, sc_beta = 0;
  sc->add_option("--graph", sa.graph, "Regular graph")->required();
  sc->add_option("--coupling", sa.coupling, "Coupling file, inline JSON or family name");
  sc->add_option("--box", sa.box, "Search interval lo:hi[:grid] for synchronous roots")->capture_default_str();
  auto* sc_a = sc->add_option("--alpha", sc_alpha, "phi_11 at the synchronous point");
  auto* sc_b = sc->add_option("--beta", sc_beta, "phi_12 at the synchronous point");
  sc->add_option("--grid", sa.grid, "Sweep (alpha, beta) over [lo, hi]^2 with steps per axis: lo:hi:steps");
  sc->add_flag("--svg", sa.svg, "Also write a wedge diagram (sweep mode, needs --out-dir)");
  sc->callback([&] {
    if (sc_a->count()) sa.alpha = sc_alpha;
    if (sc_b->count()) sa.beta = sc_beta;
    run = [&] { return sync_classify(sa); };
  });

  auto* km = app.add_subcommand("kmn-spectrum", "Synchronous Hessian spectrum on K_{m,n}: formula vs eigensolver");
  int km_m = 2, km_n = 3;
  double km_alpha = 1, km_beta = 0;
  km->add_option("--m", km_m, "Size of the first part")->required()->check(CLI::Range(2, 1000));
  km->add_option("--n", km_n, "Size of the second part")->required()->check(CLI::Range(2, 1000));
  km->add_option("--alpha", km_alpha, "phi_11")->required();
  km->add_option("--beta", km_beta, "phi_12")->required();
  km->callback([&] { run = [&] { return kmn_spectrum(km_m, km_n, km_alpha, km_beta); }; });

  auto* dc = app.add_subcommand("dm-classify", "Two-colour critical points on a (d,m)-graph");
  DmArgs da;
  double dc_alpha = 0, dc_gamma = 0, dc_beta = 0;
  dc->add_option("--graph", da.graph, "(d,m)-graph")->required();
  dc->add_option("--coupling", da.coupling, "Coupling file, inline JSON or family name");
  dc->add_option("--box", da.box, "Search square lo:hi[:grid]")->capture_default_str();
  auto* dc_a = dc->add_option("--alpha", dc_alpha, "phi_11(x0, y0)");
  auto* dc_g = dc->add_option("--gamma", dc_gamma, "phi_22(x0, y0)");
  auto* dc_b = dc->add_option("--beta", dc_beta, "phi_12(x0, y0)");
  dc->callback([&] {
    if (dc_a->count()) da.alpha = dc_alpha;
    if (dc_g->count()) da.gamma = dc_gamma;
    if (dc_b->count()) da.beta = dc_beta;
    run = [&] { return dm_classify(da); };
  });

  auto* re = app.add_subcommand("ring-equilibria", "Equilibria of a phase ring up to rotation, reflection and shift");
  int re_n = 4, re_grid = 1024;
  std::string re_coupling = "cosine";
  re->add_option("--n", re_n, "Ring size")->required()->check(CLI::Range(3, 64));
  re->add_option("--coupling", re_coupling, "Phase coupling")->capture_default_str();
  re->add_option("--grid", re_grid, "Scan resolution for two-value families")
      ->check(CLI::Range(16, 1 << 20))
      ->capture_default_str();
  re->callback([&] { run = [&] { return ring_equilibria(re_n, re_coupling, re_grid); }; });

  auto* gs = app.add_subcommand("ring-ground-state", "Ground-state formula against multistart gradient flow");
  std::string gs_n, gs_coupling = "cosine";
  int gs_starts = 200;
  bool gs_svg = false;
  gs->add_option("--n", gs_n, "Ring size N or range lo:hi")->required();
  gs->add_option("--coupling", gs_coupling, "Phase coupling")->capture_default_str();
  gs->add_option("--starts", gs_starts, "Multistart runs per n")->check(CLI::PositiveNumber)->capture_default_str();
  gs->add_flag("--svg", gs_svg, "Also write an energy-per-cell curve (needs --out-dir)");
  gs->callback([&] {
    run = [&] {
      std::vector<int> ns;
      if (gs_n.find(':') == std::string::npos) {
        ns.push_back(static_cast<int>(parse_list(gs_n, "--n")[0]));
      } else {
        const Range rg = parse_range(gs_n, "--n", 1);
        for (int n = static_cast<int>(rg.lo); n <= static_cast<int>(rg.hi); ++n) ns.push_back(n);
      }
      for (int n : ns)
        if (n < 3) throw std::invalid_argument("ring sizes start at 3");
      return ring_ground_state(ns, gs_coupling, gs_starts, g, gs_svg);
    };
  });

  auto* fl = app.add_subcommand("flow", "Gradient flow from one start (trajectory) or many (basin histogram)");
  FlowArgs fa;
  fl->add_option("--function", fa.function, "Admissible function JSON");
  fl->add_option("--ring", fa.ring, "Phase ring of this size instead of a function file");
  fl->add_option("--coupling", fa.coupling, "Phase coupling for --ring (default cosine)");
  fl->add_option("--x0", fa.x0, "Start point, comma separated");
  fl->add_option("--starts", fa.starts, "Number of seeded random starts");
  fl->add_option("--box", fa.box, "Sampling interval lo:hi for random starts")->capture_default_str();
  fl->add_option("--integrator", fa.integrator, "rk4 or adaptive")->capture_default_str();
  fl->add_option("--step", fa.h, "Integrator step size (initial step for adaptive)")->capture_default_str();
  fl->add_option("--max-time", fa.max_time, "Integration time limit")->capture_default_str();
  fl->add_option("--tol", fa.tol, "Convergence tolerance on |grad f|_inf")->capture_default_str();
  fl->add_flag("--torus", fa.torus, "Wrap coordinates into [0, 1)");
  fl->add_option("--sample-every", fa.sample_every, "Record every k-th step")->capture_default_str();
  fl->callback([&] { run = [&] { return flow(fa, g); }; });

  auto* ib = app.add_subcommand("inertia-bounds", "Inertia window of a weighted Laplacian from its sign pattern");
  BoundsArgs ba;
  ib->add_option("--graph", ba.graph, "Graph")->required();
  ib->add_option("--weights", ba.weights, "Edge weights in graph-info edge order, comma separated");
  ib->add_option("--signs", ba.signs, "Edge signs as a string of +, - and 0");
  ib->add_option("--samples", ba.samples, "Random magnitudes to test with --signs")->capture_default_str();
  ib->callback([&] { run = [&] { return inertia_bounds_cmd(ba, g); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  g.format = format == "csv" ? Format::csv : Format::json;

  try {
    const Report r = run();
    return emit(r, g, *app.get_subcommands().front());
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return 4;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
