#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hini/hin_graph.hpp"
#include "hini/path_tree.hpp"

namespace hini {

// Text formats (UTF-8, tab-separated, `#` comments, no header):
//   edges      source  relation  target
//   types      entity  type            (repeat a line per extra type)
//   hierarchy  child   parent
//   examples   source  target  [weight [label]]

struct ExampleRow {
  std::string source;
  std::string target;
  double weight = 1.0;
  std::optional<int> label;
};

/// Parsed text, before interning.
struct RawBundle {
  std::vector<Triple> edges;
  std::vector<TypeAssignment> types;
  std::vector<std::pair<std::string, std::string>> hierarchy;
  std::vector<ExampleRow> examples;
};

struct DatasetBundle {
  std::filesystem::path edges;
  std::filesystem::path types;
  std::filesystem::path hierarchy;
  std::filesystem::path examples;  // optional
};

// Readers throw ParseError("<source>:<line>: <problem>: '<text>'").
std::vector<Triple> read_edges(std::istream& in, const std::string& source);
std::vector<TypeAssignment> read_types(std::istream& in,
                                       const std::string& source);
std::vector<std::pair<std::string, std::string>> read_hierarchy(
    std::istream& in, const std::string& source);
std::vector<ExampleRow> read_examples(std::istream& in,
                                      const std::string& source);

void write_edges(std::ostream& out, const std::vector<Triple>& edges);
void write_types(std::ostream& out, const std::vector<TypeAssignment>& types);
void write_hierarchy(
    std::ostream& out,
    const std::vector<std::pair<std::string, std::string>>& hierarchy);
void write_examples(std::ostream& out, const std::vector<ExampleRow>& rows);

/// Reads whichever files the bundle names (empty paths are skipped).
RawBundle read_bundle(const DatasetBundle& bundle);
std::vector<ExampleRow> read_examples_file(const std::filesystem::path& path);

struct LoadedBundle {
  BuiltGraph hin;
  std::vector<ExampleRow> examples;
};

/// read_bundle + build_graph.
LoadedBundle parse_bundle(const DatasetBundle& bundle);
BuiltGraph build_graph(const RawBundle& raw);

/// Resolves example rows against the graph. Throws UnknownEntityError naming
/// the row for entities the graph does not contain.
std::vector<EntityPair> resolve_pairs(const HinGraph& graph,
                                      const std::vector<ExampleRow>& rows);

/// Example set from rows (weights honored). With `positives_only`, rows
/// labelled 0 are skipped. Throws PreconditionError when nothing remains.
ExamplePairSet make_example_set(const HinGraph& graph,
                                const std::vector<ExampleRow>& rows,
                                bool positives_only = false);

/// Writes a bundle as edges.tsv, types.tsv, hierarchy.tsv and, for each
/// named example list, <name>.tsv into `dir`.
void write_bundle_dir(
    const std::filesystem::path& dir, const RawBundle& raw,
    const std::vector<std::pair<std::string, std::vector<ExampleRow>>>&
        example_files);

}  // namespace hini
