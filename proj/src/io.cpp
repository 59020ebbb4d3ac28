#include "ccn/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ccn {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

int to_int(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw std::invalid_argument("bad integer '" + s + "' in " + what);
  return v;
}

Json parse_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(e.byte > 0 ? e.byte - 1 : 0, text.size()); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw std::invalid_argument(origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                                ": malformed JSON (" + e.what() + ")");
  }
}

template <class T>
T field(const Json& j, const char* key, const std::string& what) {
  if (!j.contains(key)) throw std::invalid_argument(what + " is missing \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw std::invalid_argument(what + ": bad \"" + key + "\" (" + e.what() + ")");
  }
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str(), path);
}

CellGraph graph_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("graph JSON must be an object");
  const int n = field<int>(j, "n", "graph");
  const auto edges = field<std::vector<std::pair<int, int>>>(j, "edges", "graph");
  std::vector<int> loops;
  if (j.contains("loops")) loops = field<std::vector<int>>(j, "loops", "graph");
  return CellGraph::from_edge_list(n, edges, loops);
}

Json graph_to_json(const CellGraph& g) {
  Json edges = Json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
  Json j{{"n", g.size()}, {"edges", edges}};
  if (!g.loops().empty()) j["loops"] = g.loops();
  return j;
}

CellGraph load_graph(const std::string& spec) {
  if (std::filesystem::exists(spec)) return graph_from_json(read_json_file(spec));
  const auto parts = split(spec, ':');
  if (parts.empty()) throw std::invalid_argument("empty graph spec");
  const std::string& kind = parts[0];
  auto arg = [&](std::size_t i) {
    if (i >= parts.size()) throw std::invalid_argument("graph spec '" + spec + "' is missing a size");
    return to_int(parts[i], "graph spec '" + spec + "'");
  };
  if (kind == "ring" && parts.size() == 2) return ring(arg(1));
  if (kind == "complete" && parts.size() == 2) return complete(arg(1));
  if (kind == "star" && parts.size() == 2) return star(arg(1));
  if (kind == "path" && parts.size() == 2) return path(arg(1));
  if (kind == "kmn" && parts.size() == 3) return complete_bipartite(arg(1), arg(2));
  if (kind == "kmm-matching" && parts.size() == 2) return complete_bipartite_minus_matching(arg(1));
  if (kind == "cube" && parts.size() == 1) return cube();
  if (kind == "petersen" && parts.size() == 1) return petersen();
  throw std::invalid_argument("'" + spec + "' is neither a graph file nor a built-in graph");
}

CouplingSpec coupling_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("coupling JSON must be an object");
  const std::string family = field<std::string>(j, "family", "coupling");
  const Json params = j.contains("params") ? j.at("params") : Json::object();
  auto param = [&](const char* key, std::optional<double> fallback) {
    if (params.contains(key)) return field<double>(params, key, "coupling params");
    if (!fallback) throw std::invalid_argument("coupling family " + family + " needs parameter " + key);
    return *fallback;
  };
  if (family == "cosine" || family == "two_harmonic") {
    std::vector<double> p;
    p.push_back(param("a", 1.0));
    if (family == "two_harmonic") p.push_back(param("b", std::nullopt));
    PhaseCoupling delta = builtin_phase_family(family, p);
    if (j.contains("z2") && !field<bool>(j, "z2", "coupling"))
      throw std::invalid_argument("phase families are Z2-invariant; \"z2\": false is contradictory");
    return {family, delta, as_bivariate(delta)};
  }
  if (family == "polynomial") {
    const auto rows = field<std::vector<std::vector<double>>>(params, "coeffs", "polynomial coupling params");
    std::size_t cols = 0;
    for (const auto& r : rows) cols = std::max(cols, r.size());
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t k = 0; k < rows[i].size(); ++k)
        c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    const bool z2 = j.contains("z2") ? field<bool>(j, "z2", "coupling") : false;
    return {family, std::nullopt, polynomial_coupling(c, z2)};
  }
  throw std::invalid_argument("unknown coupling family '" + family + "'");
}

CouplingSpec load_coupling(const std::string& spec) {
  if (std::filesystem::exists(spec)) return coupling_from_json(read_json_file(spec));
  if (!spec.empty() && spec.front() == '{') return coupling_from_json(parse_text(spec, "<coupling>"));
  return coupling_from_json(Json{{"family", spec}});
}

namespace {

std::vector<SelfConnection> self_table(const Json& j, const std::string& what) {
  std::vector<SelfConnection> out;
  if (!j.is_object()) throw std::invalid_argument(what + " must map degrees to coefficient lists");
  for (const auto& [key, value] : j.items()) {
    std::vector<double> coeffs;
    try {
      coeffs = value.get<std::vector<double>>();
    } catch (const Json::exception& e) {
      throw std::invalid_argument(what + "[" + key + "]: " + e.what());
    }
    out.push_back(polynomial_self_connection(to_int(key, what), std::move(coeffs)));
  }
  return out;
}

}  // namespace

AdmissibleFunction function_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("function JSON must be an object");
  if (!j.contains("graph")) throw std::invalid_argument("function is missing \"graph\"");
  const Json& gj = j.at("graph");
  CellGraph g = gj.is_string() ? load_graph(gj.get<std::string>()) : graph_from_json(gj);
  const Form form = form_from_string(field<std::string>(j, "form", "function"));
  if (!j.contains("coupling")) throw std::invalid_argument("function is missing \"coupling\"");
  CouplingFunction beta = coupling_from_json(j.at("coupling")).bivariate;
  const Json self = j.contains("self_connections") ? j.at("self_connections") : Json::object();

  switch (form) {
    case Form::symmetric:
      return AdmissibleFunction::symmetric(std::move(g), std::move(beta), self_table(self, "self_connections"));
    case Form::bipartite_general: {
      std::vector<SelfConnection> a, c;
      if (self.contains("part1")) a = self_table(self.at("part1"), "self_connections.part1");
      if (self.contains("part2")) c = self_table(self.at("part2"), "self_connections.part2");
      return AdmissibleFunction::bipartite_general(std::move(g), std::move(beta), std::move(a), std::move(c));
    }
    case Form::all_to_all: {
      if (!is_complete(g)) throw std::domain_error("all_to_all form needs a complete graph");
      std::vector<double> e;
      if (j.contains("elementary")) e = field<std::vector<double>>(j, "elementary", "function");
      return AdmissibleFunction::all_to_all(g.size(), std::move(beta), self_table(self, "self_connections"),
                                            std::move(e));
    }
  }
  throw std::invalid_argument("unsupported form");
}

AdmissibleFunction load_function(const std::string& path) {
  Json j = read_json_file(path);
  // Graph files named in a function file are resolved next to it first.
  if (j.is_object() && j.contains("graph") && j["graph"].is_string()) {
    const auto local = std::filesystem::path(path).parent_path() / j["graph"].get<std::string>();
    if (std::filesystem::is_regular_file(local)) j["graph"] = local.string();
  }
  return function_from_json(j);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::invalid_argument("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw std::invalid_argument("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw std::logic_error("CSV row width differs from header");
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      const std::string& c = cells[i];
      if (c.find_first_of(",\"\n") == std::string::npos) {
        out += c;
        continue;
      }
      // RFC 4180 quoting: wrap and double embedded quotes.
      out += '"';
      for (char ch : c) {
        if (ch == '"') out += '"';
        out += ch;
      }
      out += '"';
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

Json RunManifest::to_json() const {
  return Json{{"command", command}, {"inputs", inputs},   {"parameters", parameters},
              {"seed", seed},       {"version", version}, {"outputs", outputs}};
}

}  // namespace ccn
