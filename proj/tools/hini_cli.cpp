// hini: command-line front end over the library.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "hini/hini.hpp"

namespace {

using namespace hini;

enum ExitCode : int {
  kOk = 0,
  kOther = 1,
  kParse = 2,
  kPrecondition = 3,
  kBudget = 4,
};

struct GraphOptions {
  std::string edges;
  std::string types;
  std::string hierarchy;
};

struct SearchOptions {
  double beta = 0.6;
  std::size_t max_paths = 20;
  std::size_t max_depth = 6;
  std::size_t node_budget = 1'000'000;

  SearchConfig config() const { return {beta, max_depth, max_paths, node_budget}; }
};

struct Common {
  GraphOptions graph;
  std::string output;
  std::size_t threads = 1;
};

void add_graph_options(CLI::App* cmd, Common& c) {
  cmd->add_option("--edges", c.graph.edges, "edges file (source, relation, target)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--types", c.graph.types, "types file (entity, type)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--hierarchy", c.graph.hierarchy, "hierarchy file (child, parent)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--output", c.output, "write a line-delimited JSON report here");
  cmd->add_option("--threads", c.threads, "worker thread cap")->check(CLI::PositiveNumber);
}

void add_search_options(CLI::App* cmd, SearchOptions& s) {
  cmd->add_option("--beta", s.beta, "priority decay per depth")->capture_default_str();
  cmd->add_option("--max-paths", s.max_paths, "paths to emit")->capture_default_str();
  cmd->add_option("--max-depth", s.max_depth, "maximum path length")->capture_default_str();
  cmd->add_option("--node-budget", s.node_budget, "maximum tree nodes")
      ->capture_default_str();
}

BuiltGraph load_graph(const GraphOptions& g) {
  DatasetBundle bundle{g.edges, g.types, g.hierarchy, {}};
  return build_graph(read_bundle(bundle));
}

// Report sink: a file when --output is given, otherwise nothing.
class Report {
 public:
  Report(const std::string& path, const std::string& kind) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw Error(path + ": cannot write report");
    writer_.emplace(*file_, kind);
  }
  void record(const nlohmann::json& row) {
    if (writer_) writer_->record(row);
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::optional<ReportWriter> writer_;
};

std::vector<MetaPath> read_paths_file(const std::string& path, const BuiltGraph& hin) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::vector<MetaPath> out;
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      out.push_back(parse_metapath(line, hin.graph, hin.hierarchy));
    } catch (const ParseError& e) {
      throw ParseError(path + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  if (out.empty()) throw PreconditionError(path + ": no meta-paths");
  return out;
}

void write_paths_file(const std::string& path, const std::vector<MetaPath>& paths,
                      const BuiltGraph& hin) {
  std::ofstream out(path);
  if (!out) throw Error(path + ": cannot write file");
  for (const auto& p : paths) out << format_metapath(p, hin.graph, hin.hierarchy) << '\n';
}

nlohmann::json pair_json(const HinGraph& g, EntityPair p) {
  return {{"source", g.entity_name(p.source)}, {"target", g.entity_name(p.target)}};
}

// Runs jmpdts; returns the exit code implied by the generation status.
int generate(const BuiltGraph& hin, const std::vector<ExampleRow>& rows,
             const SearchOptions& search, std::vector<MetaPath>& paths,
             GenerationResult* keep = nullptr) {
  const auto examples = make_example_set(hin.graph, rows, true);
  auto result = jmpdts(hin.graph, hin.hierarchy, examples, search.config());
  for (const auto& p : result.paths) paths.push_back(p.path);
  int code = kOk;
  if (result.status == GenerationStatus::kBudgetExceeded) {
    std::cerr << "warning: node budget of " << search.node_budget
              << " exhausted after " << result.paths.size() << " paths\n";
    code = kBudget;
  }
  if (keep) *keep = std::move(result);
  return code;
}

Eigen::VectorXd labels_of(const std::vector<ExampleRow>& rows, const std::string& source) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].label) {
      throw PreconditionError(source + ": row " + std::to_string(i + 1) +
                              " has no label column");
    }
    y(static_cast<Eigen::Index>(i)) = *rows[i].label;
  }
  return y;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_real(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Meta-path mining and inference over typed graphs"};
  app.require_subcommand(1);
  Common common;
  SearchOptions search;
  int status = kOk;

  // generate-paths ----------------------------------------------------------
  std::string examples_path;
  std::string paths_out;
  auto* gen = app.add_subcommand("generate-paths", "best-first meta-path generation");
  add_graph_options(gen, common);
  add_search_options(gen, search);
  gen->add_option("--examples", examples_path, "example pairs")->required();
  gen->add_option("--save-paths", paths_out, "write the meta-paths, one per line");
  gen->callback([&] {
    const auto hin = load_graph(common.graph);
    const auto rows = read_examples_file(examples_path);
    std::vector<MetaPath> paths;
    GenerationResult result;
    status = generate(hin, rows, search, paths, &result);
    Report report(common.output, "generate-paths");
    for (std::size_t j = 0; j < result.paths.size(); ++j) {
      const auto text = format_metapath(result.paths[j].path, hin.graph, hin.hierarchy);
      std::cout << j + 1 << '\t' << text << '\n';
      nlohmann::json scores = nlohmann::json::array();
      for (const auto& [pair, y] : result.paths[j].scores) {
        auto row = pair_json(hin.graph, pair);
        row["score"] = y;
        scores.push_back(row);
      }
      report.record({{"rank", j + 1}, {"path", text}, {"scores", scores}});
    }
    if (result.empty()) std::cout << "no meta-paths found\n";
    report.record({{"summary", true},
                   {"paths", result.paths.size()},
                   {"tree_nodes", result.tree_size},
                   {"status", result.status == GenerationStatus::kReachedMaxPaths ? "max-paths"
                              : result.status == GenerationStatus::kTreeExhausted
                                  ? "exhausted"
                                  : "budget"}});
    if (!paths_out.empty() && !paths.empty()) write_paths_file(paths_out, paths, hin);
  });

  // score -------------------------------------------------------------------
  std::string paths_in;
  auto* score = app.add_subcommand("score", "walk-score features for pairs and meta-paths");
  add_graph_options(score, common);
  score->add_option("--examples", examples_path, "pairs to score")->required();
  score->add_option("--paths", paths_in, "meta-path file")->required();
  score->callback([&] {
    const auto hin = load_graph(common.graph);
    const auto rows = read_examples_file(examples_path);
    const auto paths = read_paths_file(paths_in, hin);
    const auto x = build_features(hin.graph, hin.hierarchy, resolve_pairs(hin.graph, rows),
                                  paths, common.threads);
    Report report(common.output, "score");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::cout << rows[i].source << '\t' << rows[i].target;
      std::vector<double> values;
      for (Eigen::Index j = 0; j < x.values.cols(); ++j) {
        const double v = x.values(static_cast<Eigen::Index>(i), j);
        std::cout << '\t' << format_real(v);
        values.push_back(v);
      }
      std::cout << '\n';
      report.record({{"source", rows[i].source}, {"target", rows[i].target}, {"scores", values}});
    }
  });

  // train-lp ----------------------------------------------------------------
  std::string model_path;
  LogRegConfig logreg;
  bool no_bias = false;
  auto* train = app.add_subcommand("train-lp", "train a link-prediction model");
  add_graph_options(train, common);
  add_search_options(train, search);
  train->add_option("--examples", examples_path, "labelled pairs (label column 1/0)")
      ->required();
  train->add_option("--paths", paths_in, "meta-path file; generated from positives if absent");
  train->add_option("--model", model_path, "model file to write")->required();
  train->add_option("--l2", logreg.l2, "L2 strength on weights")->capture_default_str();
  train->add_flag("--no-bias", no_bias, "fit without a bias term");
  train->callback([&] {
    const auto hin = load_graph(common.graph);
    const auto rows = read_examples_file(examples_path);
    const auto y = labels_of(rows, examples_path);
    std::vector<MetaPath> paths;
    if (paths_in.empty()) {
      status = generate(hin, rows, search, paths);
      if (paths.empty()) throw PreconditionError("no meta-paths found for the positive pairs");
    } else {
      paths = read_paths_file(paths_in, hin);
    }
    logreg.fit_bias = !no_bias;
    const auto x = build_features(hin.graph, hin.hierarchy, resolve_pairs(hin.graph, rows),
                                  paths, common.threads);
    const auto fit = train_logreg(x.values, y, logreg);
    std::ofstream out(model_path);
    if (!out) throw Error(model_path + ": cannot write file");
    write_model(out, {fit.model, paths}, hin.graph, hin.hierarchy);
    std::cout << "trained on " << rows.size() << " pairs, " << paths.size() << " paths, "
              << fit.iterations << " iterations" << (fit.converged ? "" : " (not converged)")
              << '\n';
    Report report(common.output, "train-lp");
    for (std::size_t j = 0; j < paths.size(); ++j) {
      report.record({{"path", format_metapath(paths[j], hin.graph, hin.hierarchy)},
                     {"weight", fit.model.weights(static_cast<Eigen::Index>(j))}});
    }
    report.record({{"bias", fit.model.bias},
                   {"iterations", fit.iterations},
                   {"converged", fit.converged}});
  });

  // predict-lp --------------------------------------------------------------
  auto* pred = app.add_subcommand("predict-lp", "link probabilities from a model");
  add_graph_options(pred, common);
  pred->add_option("--examples", examples_path, "pairs to predict")->required();
  pred->add_option("--model", model_path, "model file")->required()->check(CLI::ExistingFile);
  auto predictions = [&](const BuiltGraph& hin, const std::vector<ExampleRow>& rows) {
    std::ifstream in(model_path);
    const auto saved = read_model(in, hin.graph, hin.hierarchy);
    const auto x = build_features(hin.graph, hin.hierarchy, resolve_pairs(hin.graph, rows),
                                  saved.paths, common.threads);
    return Eigen::VectorXd(predict(saved.model, x.values));
  };
  pred->callback([&] {
    const auto hin = load_graph(common.graph);
    const auto rows = read_examples_file(examples_path);
    const auto p = predictions(hin, rows);
    Report report(common.output, "predict-lp");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double v = p(static_cast<Eigen::Index>(i));
      std::cout << rows[i].source << '\t' << rows[i].target << '\t' << format_real(v) << '\n';
      report.record({{"source", rows[i].source}, {"target", rows[i].target}, {"probability", v}});
    }
  });

  // eval-auc ----------------------------------------------------------------
  auto* eval = app.add_subcommand("eval-auc", "AUC of a model on labelled pairs");
  add_graph_options(eval, common);
  eval->add_option("--examples", examples_path, "labelled pairs")->required();
  eval->add_option("--model", model_path, "model file")->required()->check(CLI::ExistingFile);
  eval->callback([&] {
    const auto hin = load_graph(common.graph);
    const auto rows = read_examples_file(examples_path);
    const auto y = labels_of(rows, examples_path);
    const auto p = predictions(hin, rows);
    std::vector<int> labels(y.data(), y.data() + y.size());
    const double value =
        auc(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())), labels);
    std::cout << "auc\t" << format_real(value) << '\n';
    Report report(common.output, "eval-auc");
    report.record({{"auc", value}, {"pairs", rows.size()}});
  });

  // simsearch ---------------------------------------------------------------
  std::vector<std::string> queries;
  std::size_t k = 10;
  std::string theta_text;
  auto* sim = app.add_subcommand("simsearch", "top-k similar entities over generated paths");
  add_graph_options(sim, common);
  add_search_options(sim, search);
  sim->add_option("--examples", examples_path, "example pairs used to generate paths");
  sim->add_option("--paths", paths_in, "meta-path file instead of generation");
  sim->add_option("--query", queries, "query entity (repeatable)")->required();
  sim->add_option("--k", k, "results per query")->capture_default_str();
  sim->add_option("--theta", theta_text, "comma-separated path weights (default uniform)");
  sim->callback([&] {
    const auto hin = load_graph(common.graph);
    std::vector<MetaPath> paths;
    if (!paths_in.empty()) {
      paths = read_paths_file(paths_in, hin);
    } else if (!examples_path.empty()) {
      status = generate(hin, read_examples_file(examples_path), search, paths);
      if (paths.empty()) throw PreconditionError("no meta-paths found for the example pairs");
    } else {
      throw PreconditionError("simsearch needs --examples or --paths");
    }
    Eigen::VectorXd theta = uniform_theta(paths.size());
    if (!theta_text.empty()) {
      const auto values = parse_list(theta_text);
      theta = Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                static_cast<Eigen::Index>(values.size()));
    }
    const auto index = build_index(hin.graph, hin.hierarchy, paths, theta, common.threads);
    Report report(common.output, "simsearch");
    for (std::size_t j = 0; j < paths.size(); ++j) {
      report.record({{"path", format_metapath(paths[j], hin.graph, hin.hierarchy)},
                     {"theta", theta(static_cast<Eigen::Index>(j))}});
    }
    for (const auto& q : queries) {
      const auto ranked = top_k(index, hin.graph.entity(q), k);
      std::cout << "# " << q << '\n';
      for (std::size_t r = 0; r < ranked.size(); ++r) {
        const auto& name = hin.graph.entity_name(ranked[r].entity);
        std::cout << r + 1 << '\t' << name << '\t' << format_real(ranked[r].score) << '\n';
        report.record({{"query", q}, {"rank", r + 1}, {"entity", name}, {"score", ranked[r].score}});
      }
    }
  });

  // synth -------------------------------------------------------------------
  std::string kind = "planted";
  std::string out_dir;
  std::uint64_t seed = 42;
  double noise = 0.1;
  std::size_t train_per_class = 100;
  std::size_t test_per_class = 100;
  std::size_t synth_depth = 4;
  auto* synth = app.add_subcommand("synth", "write a synthetic dataset");
  synth->add_option("--kind", kind, "planted | biblio")
      ->check(CLI::IsMember({"planted", "biblio"}))
      ->capture_default_str();
  synth->add_option("--out-dir", out_dir, "directory for the TSV files")->required();
  synth->add_option("--seed", seed, "random seed")->capture_default_str();
  synth->add_option("--noise", noise, "noise edges as a fraction of base edges")
      ->capture_default_str();
  synth->add_option("--train-per-class", train_per_class)->capture_default_str();
  synth->add_option("--test-per-class", test_per_class)->capture_default_str();
  synth->add_option("--max-depth", synth_depth, "search depth the data targets")
      ->capture_default_str();
  synth->add_option("--output", common.output, "write a line-delimited JSON report here");
  synth->callback([&] {
    std::filesystem::create_directories(out_dir);
    Report report(common.output, "synth");
    if (kind == "planted") {
      auto spec = SyntheticSpec::planted_rule(seed);
      spec.noise_rate = noise;
      spec.train_per_class = train_per_class;
      spec.test_per_class = test_per_class;
      spec.max_depth = synth_depth;
      const auto bundle = generate_synthetic(spec);
      for (const auto& w : bundle.warnings) std::cerr << "warning: " << w << '\n';
      write_bundle_dir(out_dir, bundle.raw, {{"train", bundle.train}, {"test", bundle.test}});
      std::cout << "planted path\t" << bundle.planted_path << '\n';
      report.record({{"planted_path", bundle.planted_path},
                     {"edges", bundle.raw.edges.size()},
                     {"train", bundle.train.size()},
                     {"test", bundle.test.size()},
                     {"warnings", bundle.warnings}});
    } else {
      BiblioSpec spec;
      spec.seed = seed;
      spec.cross_area_rate = noise;
      const auto bundle = generate_biblio(spec);
      write_bundle_dir(out_dir, bundle.raw, {{"examples", bundle.examples}});
      std::ofstream areas(std::filesystem::path(out_dir) / "venues.tsv");
      for (const auto& [v, a] : bundle.venue_area) areas << v << '\t' << a << '\n';
      std::cout << "venues\t" << bundle.venue_area.size() << '\n';
      report.record({{"venues", bundle.venue_area.size()},
                     {"edges", bundle.raw.edges.size()},
                     {"examples", bundle.examples.size()}});
    }
  });

  // bench -------------------------------------------------------------------
  std::vector<std::size_t> lengths{1, 2, 3, 4};
  std::vector<std::size_t> sizes;
  BenchConfig bench_cfg;
  std::string table_path;
  auto* bench = app.add_subcommand("bench", "tree search vs fixed-length enumeration");
  add_graph_options(bench, common);
  add_search_options(bench, search);
  bench->add_option("--examples", examples_path, "example pairs")->required();
  bench->add_option("--lengths", lengths, "enumeration lengths")->delimiter(',');
  bench->add_option("--sizes", sizes, "example-set sizes")->delimiter(',');
  bench->add_option("--repeats", bench_cfg.repeats, "runs per cell")->capture_default_str();
  bench->add_option("--timeout", bench_cfg.timeout_seconds, "censor cells slower than this")
      ->capture_default_str();
  bench->add_option("--table", table_path, "write the TSV table here instead of stdout");
  bench->callback([&] {
    const auto hin = load_graph(common.graph);
    const auto rows = read_examples_file(examples_path);
    bench_cfg.lengths = lengths;
    bench_cfg.example_sizes = sizes;
    bench_cfg.search = search.config();
    bench_cfg.threads = common.threads;
    const auto rep = run_benchmark(hin.graph, hin.hierarchy, rows, bench_cfg);
    if (table_path.empty()) {
      write_bench_table(std::cout, rep);
    } else {
      std::ofstream out(table_path);
      if (!out) throw Error(table_path + ": cannot write file");
      write_bench_table(out, rep);
    }
    Report report(common.output, "bench");
    for (const auto& c : rep.cells) {
      report.record({{"method", c.method},
                     {"length", c.length},
                     {"examples", c.examples},
                     {"median_seconds", c.median_seconds},
                     {"paths", c.paths},
                     {"censored", c.censored}});
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kPrecondition;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
  return status;
}
