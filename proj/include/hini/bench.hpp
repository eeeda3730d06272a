#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hini/hin_graph.hpp"
#include "hini/io.hpp"
#include "hini/path_tree.hpp"

namespace hini {

struct BenchConfig {
  /// Fixed-length enumeration baselines to time.
  std::vector<std::size_t> lengths{1, 2, 3, 4};
  /// Example-set sizes to sweep; empty means "all positive examples".
  std::vector<std::size_t> example_sizes;
  SearchConfig search{0.6, 4, 10, 1'000'000};
  std::size_t repeats = 3;
  double timeout_seconds = 300.0;
  std::size_t threads = 1;
};

struct BenchCell {
  std::string method;  // "tree-search" or "enumerate"
  std::size_t length = 0;  // max length for "enumerate", 0 for tree search
  std::size_t examples = 0;
  double median_seconds = 0.0;
  std::size_t paths = 0;
  /// The first run exceeded the timeout; median_seconds is that run alone.
  bool censored = false;
};

struct BenchReport {
  std::string source_type;
  std::string target_type;
  std::vector<BenchCell> cells;
};

/// Times tree-search path generation (jmpdts) against fixed-length
/// enumeration plus feature scoring over the same example pairs, taking the
/// median wall time of `repeats` runs per cell. Rows labelled 0 are ignored.
/// Once a cell is censored, longer lengths for that example size are
/// recorded as censored without running. Throws PreconditionError for an
/// empty length list or example set.
BenchReport run_benchmark(const HinGraph& graph, const TypeHierarchy& hierarchy,
                          const std::vector<ExampleRow>& rows,
                          const BenchConfig& config);

/// Plot-ready TSV: method, length, examples, median_seconds, paths, censored.
void write_bench_table(std::ostream& out, const BenchReport& report);

}  // namespace hini
