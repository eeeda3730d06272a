#include "hini/bench.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>

#include "hini/models.hpp"
#include "hini/pcrw.hpp"

namespace hini {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// LCA of the most specific types of a set of entities.
TypeId common_type(const HinGraph& graph, const TypeHierarchy& hierarchy,
                   const std::vector<EntityId>& entities) {
  std::vector<TypeId> types;
  for (EntityId e : entities) {
    const auto direct = graph.direct_types(e);
    types.insert(types.end(), direct.begin(), direct.end());
  }
  return lca_of_set(hierarchy, types);
}

template <typename Run>
BenchCell time_cell(BenchCell cell, const BenchConfig& config, Run&& run) {
  std::vector<double> times;
  for (std::size_t r = 0; r < std::max<std::size_t>(config.repeats, 1); ++r) {
    const auto start = std::chrono::steady_clock::now();
    cell.paths = run();
    times.push_back(seconds_since(start));
    if (times.back() > config.timeout_seconds) {
      cell.censored = true;
      break;
    }
  }
  cell.median_seconds = cell.censored ? times.back() : median(times);
  return cell;
}

}  // namespace

BenchReport run_benchmark(const HinGraph& graph, const TypeHierarchy& hierarchy,
                          const std::vector<ExampleRow>& rows,
                          const BenchConfig& config) {
  if (config.lengths.empty()) {
    throw PreconditionError("benchmark: the list of lengths is empty");
  }
  config.search.validate();
  std::vector<ExampleRow> positives;
  for (const auto& r : rows) {
    if (!r.label || *r.label == 1) positives.push_back(r);
  }
  if (positives.empty()) {
    throw PreconditionError("example set must be non-empty");
  }
  const std::vector<EntityPair> all_pairs = resolve_pairs(graph, positives);

  std::vector<EntityId> sources;
  std::vector<EntityId> targets;
  for (const auto& p : all_pairs) {
    sources.push_back(p.source);
    targets.push_back(p.target);
  }
  const TypeId source_type = common_type(graph, hierarchy, sources);
  const TypeId target_type = common_type(graph, hierarchy, targets);

  BenchReport report;
  report.source_type = hierarchy.name(source_type);
  report.target_type = hierarchy.name(target_type);

  std::vector<std::size_t> sizes = config.example_sizes;
  if (sizes.empty()) sizes.push_back(all_pairs.size());
  for (std::size_t size : sizes) {
    const std::size_t n = std::min(size, all_pairs.size());
    const std::vector<EntityPair> pairs(all_pairs.begin(),
                                        all_pairs.begin() + static_cast<std::ptrdiff_t>(n));
    std::vector<double> weights;
    for (std::size_t i = 0; i < n; ++i) weights.push_back(positives[i].weight);
    const ExamplePairSet examples(pairs, weights);

    report.cells.push_back(time_cell({"tree-search", 0, n}, config, [&] {
      return jmpdts(graph, hierarchy, examples, config.search).paths.size();
    }));

    bool censored = false;
    std::vector<std::size_t> lengths = config.lengths;
    std::sort(lengths.begin(), lengths.end());
    for (std::size_t length : lengths) {
      BenchCell cell{"enumerate", length, n};
      if (censored) {
        cell.censored = true;
        report.cells.push_back(cell);
        continue;
      }
      cell = time_cell(cell, config, [&] {
        const auto paths = enumerate_metapaths(graph, hierarchy, source_type,
                                               target_type, length);
        build_features(graph, hierarchy, pairs, paths, config.threads);
        return paths.size();
      });
      censored = cell.censored;
      report.cells.push_back(cell);
    }
  }
  return report;
}

void write_bench_table(std::ostream& out, const BenchReport& report) {
  out << "method\tlength\texamples\tmedian_seconds\tpaths\tcensored\n";
  for (const auto& c : report.cells) {
    out << c.method << '\t' << c.length << '\t' << c.examples << '\t'
        << format_real(c.median_seconds) << '\t' << c.paths << '\t'
        << (c.censored ? 1 : 0) << '\n';
  }
}

}  // namespace hini
