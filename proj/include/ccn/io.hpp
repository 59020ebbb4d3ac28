#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ccn/admissible.hpp"
#include "ccn/coupling.hpp"
#include "ccn/graph.hpp"
#include "json.hpp"

namespace ccn {

using Json = nlohmann::json;

/// {"n": int, "edges": [[u,v],...], "loops": [v,...]}.
CellGraph graph_from_json(const Json& j);
Json graph_to_json(const CellGraph& g);

/// A graph file path, or a built-in: "ring:N", "complete:N", "kmn:M:N",
/// "star:N", "path:N", "cube", "petersen", "kmm-matching:M".
CellGraph load_graph(const std::string& spec);

/// Parsed coupling spec:
///   {"family": "cosine", "params": {"a": 1}}
///   {"family": "two_harmonic", "params": {"a": 1, "b": 0.05}}
///   {"family": "polynomial", "params": {"coeffs": [[c00, c01, ...], [c10, ...]]}, "z2": true}
/// Phase families also yield the bivariate form beta(x, y) = delta(x - y).
struct CouplingSpec {
  std::string family;
  std::optional<PhaseCoupling> phase;
  CouplingFunction bivariate;
};
CouplingSpec coupling_from_json(const Json& j);
/// A JSON file path, an inline JSON object, or a bare family name ("cosine").
CouplingSpec load_coupling(const std::string& spec);

/// {"graph": <graph spec string or inline graph>, "form": "...", "coupling": {...},
///  "self_connections": {"<deg>": [c0, c1, ...]}  (symmetric, all_to_all)
///                   or {"part1": {...}, "part2": {...}}  (bipartite_general),
///  "elementary": [0, 0, 0, c3, ...]}
AdmissibleFunction function_from_json(const Json& j);
AdmissibleFunction load_function(const std::string& path);

Json read_json_file(const std::string& path);

/// Shortest round-trip decimal form ("%.17g").
std::string format_double(double v);

/// Writes via a temporary sibling and rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Minimal CSV writer; fields are emitted verbatim.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row);
  std::string str() const;
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Describes one CLI run; contains no timestamps so reruns are byte-identical.
struct RunManifest {
  std::string command;
  std::vector<std::string> inputs;
  Json parameters = Json::object();
  std::uint64_t seed = 0;
  std::string version;
  std::vector<std::string> outputs;

  Json to_json() const;
};

}  // namespace ccn
