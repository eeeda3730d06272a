#include "hini/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "hini/models.hpp"

namespace hini {

namespace {

struct Line {
  std::size_t number;
  std::string text;
  std::vector<std::string> fields;
};

[[noreturn]] void fail(const std::string& source, std::size_t line,
                       const std::string& problem, const std::string& text) {
  throw ParseError(source + ":" + std::to_string(line) + ": " + problem +
                   ": '" + text + "'");
}

// Calls `on_line` for every non-blank, non-comment line, split on tabs.
template <typename F>
void for_each_line(std::istream& in, const std::string& source, F&& on_line) {
  std::string text;
  std::size_t number = 0;
  while (std::getline(in, text)) {
    ++number;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    const auto first = text.find_first_not_of(" \t");
    if (first == std::string::npos || text[first] == '#') continue;
    Line line{number, text, {}};
    std::size_t start = 0;
    while (true) {
      const auto tab = text.find('\t', start);
      line.fields.push_back(text.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    for (const auto& f : line.fields) {
      if (f.empty()) fail(source, number, "empty field", text);
    }
    on_line(line);
  }
  if (in.bad()) throw ParseError(source + ": read error");
}

void expect_fields(const std::string& source, const Line& line,
                   std::size_t count) {
  if (line.fields.size() != count) {
    fail(source, line.number,
         "expected " + std::to_string(count) + " tab-separated fields, got " +
             std::to_string(line.fields.size()),
         line.text);
  }
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  return in;
}

}  // namespace

std::vector<Triple> read_edges(std::istream& in, const std::string& source) {
  std::vector<Triple> out;
  for_each_line(in, source, [&](const Line& line) {
    expect_fields(source, line, 3);
    if (line.fields[1].find('~') != std::string::npos ||
        line.fields[1].find(' ') != std::string::npos) {
      fail(source, line.number, "relation names may not contain '~' or spaces",
           line.text);
    }
    out.push_back({line.fields[0], line.fields[1], line.fields[2]});
  });
  return out;
}

std::vector<TypeAssignment> read_types(std::istream& in,
                                       const std::string& source) {
  std::vector<TypeAssignment> out;
  for_each_line(in, source, [&](const Line& line) {
    expect_fields(source, line, 2);
    out.push_back({line.fields[0], line.fields[1]});
  });
  return out;
}

std::vector<std::pair<std::string, std::string>> read_hierarchy(
    std::istream& in, const std::string& source) {
  std::vector<std::pair<std::string, std::string>> out;
  for_each_line(in, source, [&](const Line& line) {
    expect_fields(source, line, 2);
    out.emplace_back(line.fields[0], line.fields[1]);
  });
  return out;
}

std::vector<ExampleRow> read_examples(std::istream& in,
                                      const std::string& source) {
  std::vector<ExampleRow> out;
  for_each_line(in, source, [&](const Line& line) {
    if (line.fields.size() < 2 || line.fields.size() > 4) {
      fail(source, line.number, "expected source, target, [weight, [label]]",
           line.text);
    }
    ExampleRow row{line.fields[0], line.fields[1], 1.0, std::nullopt};
    if (line.fields.size() >= 3) {
      try {
        row.weight = parse_real(line.fields[2]);
      } catch (const ParseError&) {
        fail(source, line.number, "weight is not a number", line.text);
      }
      if (!(row.weight > 0.0)) {
        fail(source, line.number, "weight must be positive", line.text);
      }
    }
    if (line.fields.size() == 4) {
      if (line.fields[3] == "1") {
        row.label = 1;
      } else if (line.fields[3] == "0") {
        row.label = 0;
      } else {
        fail(source, line.number, "label must be 1 or 0", line.text);
      }
    }
    out.push_back(std::move(row));
  });
  return out;
}

void write_edges(std::ostream& out, const std::vector<Triple>& edges) {
  for (const auto& e : edges) {
    out << e.source << '\t' << e.relation << '\t' << e.target << '\n';
  }
}

void write_types(std::ostream& out, const std::vector<TypeAssignment>& types) {
  for (const auto& t : types) out << t.entity << '\t' << t.type << '\n';
}

void write_hierarchy(
    std::ostream& out,
    const std::vector<std::pair<std::string, std::string>>& hierarchy) {
  for (const auto& [child, parent] : hierarchy) {
    out << child << '\t' << parent << '\n';
  }
}

void write_examples(std::ostream& out, const std::vector<ExampleRow>& rows) {
  for (const auto& r : rows) {
    out << r.source << '\t' << r.target;
    if (r.label || r.weight != 1.0) out << '\t' << format_real(r.weight);
    if (r.label) out << '\t' << *r.label;
    out << '\n';
  }
}

std::vector<ExampleRow> read_examples_file(const std::filesystem::path& path) {
  auto in = open(path);
  return read_examples(in, path.string());
}

RawBundle read_bundle(const DatasetBundle& bundle) {
  RawBundle raw;
  if (!bundle.edges.empty()) {
    auto in = open(bundle.edges);
    raw.edges = read_edges(in, bundle.edges.string());
  }
  if (!bundle.types.empty()) {
    auto in = open(bundle.types);
    raw.types = read_types(in, bundle.types.string());
  }
  if (!bundle.hierarchy.empty()) {
    auto in = open(bundle.hierarchy);
    raw.hierarchy = read_hierarchy(in, bundle.hierarchy.string());
  }
  if (!bundle.examples.empty()) raw.examples = read_examples_file(bundle.examples);
  return raw;
}

BuiltGraph build_graph(const RawBundle& raw) {
  return build_graph(raw.edges, raw.types, raw.hierarchy);
}

LoadedBundle parse_bundle(const DatasetBundle& bundle) {
  RawBundle raw = read_bundle(bundle);
  return {build_graph(raw), std::move(raw.examples)};
}

std::vector<EntityPair> resolve_pairs(const HinGraph& graph,
                                      const std::vector<ExampleRow>& rows) {
  std::vector<EntityPair> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    const auto s = graph.find_entity(r.source);
    const auto t = graph.find_entity(r.target);
    if (!s || !t) {
      throw UnknownEntityError("pair (" + r.source + ", " + r.target +
                               ") references unknown entity '" +
                               (s ? r.target : r.source) + "'");
    }
    out.push_back({*s, *t});
  }
  return out;
}

ExamplePairSet make_example_set(const HinGraph& graph,
                                const std::vector<ExampleRow>& rows,
                                bool positives_only) {
  std::vector<ExampleRow> kept;
  for (const auto& r : rows) {
    if (positives_only && r.label && *r.label == 0) continue;
    kept.push_back(r);
  }
  const auto pairs = resolve_pairs(graph, kept);
  std::vector<double> weights;
  for (const auto& r : kept) weights.push_back(r.weight);
  return ExamplePairSet(pairs, weights);
}

void write_bundle_dir(
    const std::filesystem::path& dir, const RawBundle& raw,
    const std::vector<std::pair<std::string, std::vector<ExampleRow>>>&
        example_files) {
  std::filesystem::create_directories(dir);
  auto open_out = [&](const std::string& name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error((dir / name).string() + ": cannot write file");
    return out;
  };
  {
    auto out = open_out("edges.tsv");
    write_edges(out, raw.edges);
  }
  {
    auto out = open_out("types.tsv");
    write_types(out, raw.types);
  }
  {
    auto out = open_out("hierarchy.tsv");
    write_hierarchy(out, raw.hierarchy);
  }
  for (const auto& [name, rows] : example_files) {
    auto out = open_out(name + ".tsv");
    write_examples(out, rows);
  }
}

}  // namespace hini
