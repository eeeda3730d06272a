// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "support.hpp"

namespace hini {
namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) detail = why;
    pass = pass && ok;
  }
};

int failures = 0;

void report(int id, const char* title, const std::function<Outcome()>& body) {
  Outcome o;
  const auto start = Clock::now();
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  if (!o.pass) ++failures;
  std::printf("[%s] criterion %2d: %s (%.2fs)%s%s\n", o.pass ? "PASS" : "FAIL", id,
              title, since(start), o.detail.empty() ? "" : " -- ", o.detail.c_str());
  std::fflush(stdout);
}

// Shared random corpus for the first two criteria: every relation sequence
// of length 0..4 on each graph, node types drawn per sequence (about half
// left at the root).
constexpr int kCorpus = 200;

template <typename Visit>
void for_each_corpus_path(Visit&& visit) {
  for (int seed = 0; seed < kCorpus; ++seed) {
    const auto b = build_graph(test::random_raw(static_cast<std::uint64_t>(seed)));
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed) + 1000);
    auto type = [&] {
      if (std::bernoulli_distribution(0.5)(rng)) return b.hierarchy.root();
      return TypeId{static_cast<std::uint32_t>(
          std::uniform_int_distribution<std::size_t>(0, b.hierarchy.size() - 1)(rng))};
    };
    const auto slots = static_cast<std::uint32_t>(2 * b.graph.relation_count());
    std::vector<DirectedRelation> seq;
    std::function<void()> rec = [&] {
      MetaPath p;
      p.edge_relations = seq;
      for (std::size_t i = 0; i <= seq.size(); ++i) p.node_types.push_back(type());
      visit(b, p);
      if (seq.size() == 4) return;
      for (std::uint32_t s = 0; s < slots; ++s) {
        seq.push_back(DirectedRelation::from_slot(s));
        rec();
        seq.pop_back();
      }
    };
    rec();
  }
}

Outcome walk_oracle() {
  Outcome o;
  const auto start = Clock::now();
  double worst = 0.0;
  std::size_t paths = 0;
  for_each_corpus_path([&](const BuiltGraph& b, const MetaPath& p) {
    ++paths;
    for (std::uint32_t si = 0; si < b.graph.entity_count(); ++si) {
      const EntityId s{si};
      if (!test::holds_type(b.graph, s, p.source_type())) continue;
      std::map<EntityId, double> expected;
      for (const auto& inst : enumerate_path_instances(b.graph, b.hierarchy, s, p)) {
        expected[inst.back()] += test::instance_probability(b.graph, p, inst);
      }
      const auto dist = walk_distribution(b.graph, b.hierarchy, s, p);
      for (std::uint32_t ti = 0; ti < b.graph.entity_count(); ++ti) {
        const EntityId t{ti};
        const double want = expected.contains(t) ? expected[t] : 0.0;
        worst = std::max(worst, std::abs(dist.at(t) - want));
      }
      for (const auto& [t, want] : expected) {
        worst = std::max(worst, std::abs(pcrw_score(b.graph, b.hierarchy, s, t, p) - want));
      }
    }
  });
  const double secs = since(start);
  o.require(worst <= 1e-12, "max abs error " + format_real(worst));
  o.require(secs < 60.0, "took " + std::to_string(secs) + "s");
  if (o.pass) {
    o.detail = std::to_string(paths) + " meta-paths, max abs error " + format_real(worst);
  }
  return o;
}

Outcome commuting_oracle() {
  Outcome o;
  const auto start = Clock::now();
  std::size_t mismatches = 0;
  std::size_t entries = 0;
  for_each_corpus_path([&](const BuiltGraph& b, const MetaPath& p) {
    const auto m = commuting_matrix(b.graph, b.hierarchy, p);
    for (std::uint32_t si = 0; si < b.graph.entity_count(); ++si) {
      const EntityId s{si};
      std::map<EntityId, std::int64_t> count;
      if (test::holds_type(b.graph, s, p.source_type())) {
        for (const auto& inst : enumerate_path_instances(b.graph, b.hierarchy, s, p)) {
          ++count[inst.back()];
        }
      }
      for (std::uint32_t ti = 0; ti < b.graph.entity_count(); ++ti) {
        const EntityId t{ti};
        ++entries;
        mismatches += m.at(s, t) != (count.contains(t) ? count[t] : 0);
      }
    }
  });
  const double secs = since(start);
  o.require(mismatches == 0, std::to_string(mismatches) + " mismatched entries");
  o.require(secs < 60.0, "took " + std::to_string(secs) + "s");
  if (o.pass) o.detail = std::to_string(entries) + " entries exact";
  return o;
}

Outcome fixtures() {
  Outcome o;
  const auto g1 = parse_bundle(test::fixture_bundle("g1"));
  const auto& a = g1.hin.graph;
  o.require(pcrw_score(a, g1.hin.hierarchy, a.entity("p1"), a.entity("p2"),
                       test::path_of(g1.hin, "Person -found-> Organization -found~-> Person")) ==
                0.5,
            "G1 score");
  const auto g2 = parse_bundle(test::fixture_bundle("g2"));
  const auto& g = g2.hin.graph;
  o.require(pcrw_score(g, g2.hin.hierarchy, g.entity("v1"), g.entity("v2"),
                       test::path_of(g2.hin, test::kPStar)) == 0.25,
            "G2 score");
  const auto set = make_example_set(g, g2.examples);
  const auto r = jmpdts(g, g2.hin.hierarchy, set, SearchConfig{0.6, 6, 3, 1'000'000});
  o.require(!r.empty() && r.paths[0].path.edge_relations == test::pstar_relations(g),
            "first G2 path is not the venue-author-venue sequence");
  if (!r.empty()) {
    const auto text = format_metapath(r.paths[0].path, g, g2.hin.hierarchy);
    o.require(text == test::kPStar, "rendered as " + text);
    o.require(r.scores(0, 0) == 0.25, "y = " + format_real(r.scores(0, 0)));
  }
  return o;
}

// Planted-rule bundle shared by criteria 4-6.
struct Planted {
  SyntheticBundle bundle;
  BuiltGraph hin;
  double planted_auc = 0.0;
  double search_seconds = 0.0;
  bool found = false;
};

Planted& planted() {
  static Planted p = [] {
    Planted out{generate_synthetic(SyntheticSpec::planted_rule(42)), {}, 0, 0, false};
    out.hin = build_graph(out.bundle.raw);
    return out;
  }();
  return p;
}

std::vector<int> labels_of(const std::vector<ExampleRow>& rows) {
  std::vector<int> out;
  for (const auto& r : rows) out.push_back(*r.label);
  return out;
}

Eigen::VectorXd label_vector(const std::vector<ExampleRow>& rows) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) y(static_cast<Eigen::Index>(i)) = *rows[i].label;
  return y;
}

double held_out_auc(const BuiltGraph& hin, const std::vector<MetaPath>& paths,
                    const std::vector<ExampleRow>& train, const std::vector<ExampleRow>& test) {
  const auto xtr = build_features(hin.graph, hin.hierarchy, resolve_pairs(hin.graph, train), paths);
  const auto xte = build_features(hin.graph, hin.hierarchy, resolve_pairs(hin.graph, test), paths);
  const auto fit = train_logreg(xtr.values, label_vector(train));
  const Eigen::VectorXd p = predict(fit.model, xte.values);
  return auc(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())),
             labels_of(test));
}

Outcome planted_rule() {
  Outcome o;
  const auto start = Clock::now();
  auto& pl = planted();
  const auto& g = pl.hin.graph;
  const auto t0 = Clock::now();
  const auto set = make_example_set(g, pl.bundle.train, true);
  const auto r = jmpdts(g, pl.hin.hierarchy, set, SearchConfig{0.6, 4, 10, 1'000'000});
  pl.search_seconds = since(t0);
  const auto planted_path = parse_metapath(pl.bundle.planted_path, g, pl.hin.hierarchy);
  std::vector<MetaPath> paths;
  for (const auto& p : r.paths) {
    paths.push_back(p.path);
    pl.found |= p.path.edge_relations == planted_path.edge_relations;
  }
  o.require(pl.found, "planted sequence not among " + std::to_string(paths.size()) + " paths");
  pl.planted_auc = held_out_auc(pl.hin, paths, pl.bundle.train, pl.bundle.test);
  o.require(pl.planted_auc >= 0.95, "held-out AUC " + format_real(pl.planted_auc));
  const double secs = since(start);
  o.require(secs < 120.0, "took " + std::to_string(secs) + "s");
  if (o.pass) {
    o.detail = std::to_string(paths.size()) + " paths, held-out AUC " +
               std::to_string(pl.planted_auc);
  }
  return o;
}

Outcome length_one_baseline() {
  Outcome o;
  auto& pl = planted();
  const auto& h = pl.hin.hierarchy;
  const auto paths = enumerate_metapaths(pl.hin.graph, h, h.id(pl.bundle.source_type),
                                         h.id(pl.bundle.target_type), 1);
  o.require(!paths.empty(), "no length-1 path between the endpoint types");
  const double base = held_out_auc(pl.hin, paths, pl.bundle.train, pl.bundle.test);
  o.require(pl.planted_auc > 0.0, "planted model unavailable");
  o.require(base <= pl.planted_auc - 0.2,
            "length-1 AUC " + format_real(base) + " vs " + format_real(pl.planted_auc));
  if (o.pass) {
    o.detail = "length-1 AUC " + std::to_string(base) + " vs " + std::to_string(pl.planted_auc);
  }
  return o;
}

Outcome efficiency() {
  Outcome o;
  auto& pl = planted();
  BenchConfig cfg;
  cfg.lengths = {4};
  cfg.repeats = 3;
  cfg.search = SearchConfig{0.6, 4, 10, 1'000'000};
  const auto rep = run_benchmark(pl.hin.graph, pl.hin.hierarchy, pl.bundle.train, cfg);
  double tree = 0, enumerate = 0;
  for (const auto& c : rep.cells) {
    (c.method == "tree-search" ? tree : enumerate) = c.median_seconds;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "tree %.3fs, length-4 enumeration %.3fs, ratio %.1fx", tree,
                enumerate, enumerate / tree);
  o.require(tree * 5.0 <= enumerate, buf);
  if (o.pass) o.detail = buf;
  return o;
}

Outcome gradient_check() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> n;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int rows = std::uniform_int_distribution<int>(5, 60)(rng);
    const int cols = std::uniform_int_distribution<int>(1, 8)(rng);
    const Eigen::MatrixXd x = Eigen::MatrixXd::NullaryExpr(rows, cols, [&] { return n(rng); });
    Eigen::VectorXd y(rows);
    for (int i = 0; i < rows; ++i) y(i) = std::bernoulli_distribution(0.5)(rng) ? 1 : 0;
    const Eigen::VectorXd w = Eigen::VectorXd::NullaryExpr(cols, [&] { return n(rng); });
    const double bias = n(rng);
    const double l2 = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
    const Eigen::VectorXd analytic = logreg_gradient(x, y, w, bias, l2);
    Eigen::VectorXd numeric(cols + 1);
    const double h = 1e-5;
    for (int j = 0; j <= cols; ++j) {
      auto f = [&](double d) {
        Eigen::VectorXd ww = w;
        double bb = bias;
        if (j < cols) ww(j) += d; else bb += d;
        return logreg_objective(x, y, ww, bb, l2);
      };
      numeric(j) = (f(h) - f(-h)) / (2 * h);
    }
    const double scale = std::max(analytic.norm(), numeric.norm());
    worst = std::max(worst, (analytic - numeric).norm() / scale);
  }
  o.require(worst <= 1e-6, "relative error " + format_real(worst));
  if (o.pass) o.detail = "max relative error " + format_real(worst);
  return o;
}

Outcome auc_oracle() {
  Outcome o;
  std::mt19937_64 rng(77);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 1000)(rng);
    const int levels = std::uniform_int_distribution<int>(1, 200)(rng);
    std::vector<double> s(n);
    std::vector<int> l(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = std::uniform_int_distribution<int>(0, levels)(rng) * 0.01;
      l[i] = std::bernoulli_distribution(0.4)(rng) ? 1 : 0;
    }
    l[0] = 1;
    l[1] = 0;
    mismatches += auc_rank_sum(s, l) != auc_exhaustive(s, l);
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " of 100 differ");
  return o;
}

Outcome search_order() {
  Outcome o;
  std::size_t pops = 0;
  std::size_t violations = 0;
  std::size_t nondeterministic = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto b = build_graph(test::random_raw(seed + 500));
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> pick(
        0, static_cast<std::uint32_t>(b.graph.entity_count() - 1));
    std::vector<EntityPair> ps;
    for (int i = 0; i < 3; ++i) ps.push_back({EntityId{pick(rng)}, EntityId{pick(rng)}});
    const ExamplePairSet set(ps);
    const SearchConfig cfg{0.6, 3, 8, 20'000};
    auto observer = [&](const DependencyTree& tree, NodeId id) {
      ++pops;
      const FrontierEntry* top = nullptr;
      for (const auto& e : tree.frontier()) if (e.node == id) top = &e;
      if (top == nullptr) {
        ++violations;
        return;
      }
      for (const auto& e : tree.frontier()) {
        if (&e == top) continue;
        const double kt = priority_key(top->priority), ke = priority_key(e.priority);
        const bool ok = kt > ke || (kt == ke && (top->depth < e.depth ||
                                                 (top->depth == e.depth &&
                                                  top->relations < e.relations)));
        violations += !ok;
      }
    };
    const auto first = jmpdts(b.graph, b.hierarchy, set, cfg, observer);
    const auto second = jmpdts(b.graph, b.hierarchy, set, cfg);
    bool same = first.paths.size() == second.paths.size() && first.scores == second.scores;
    for (std::size_t i = 0; same && i < first.paths.size(); ++i) {
      same = first.paths[i].path == second.paths[i].path;
    }
    nondeterministic += !same;
  }
  o.require(violations == 0, std::to_string(violations) + " out-of-order pops");
  o.require(nondeterministic == 0, std::to_string(nondeterministic) + " runs differ");
  o.require(pops > 0, "no pops observed");
  if (o.pass) o.detail = std::to_string(pops) + " pops checked";
  return o;
}

Outcome venue_search() {
  Outcome o;
  const auto bib = generate_biblio(BiblioSpec{});
  const auto hin = build_graph(bib.raw);
  const auto& g = hin.graph;
  const auto set = make_example_set(g, bib.examples);
  const auto gen = jmpdts(g, hin.hierarchy, set, SearchConfig{0.6, 4, 10, 1'000'000});
  std::vector<MetaPath> paths;
  for (const auto& p : gen.paths) paths.push_back(p.path);
  o.require(!paths.empty(), "no paths generated");
  if (paths.empty()) return o;
  const auto index = build_index(g, hin.hierarchy, paths, uniform_theta(paths.size()));
  std::size_t wrong = 0;
  std::string example;
  for (const auto& [venue, area] : bib.venue_area) {
    const auto top = top_k(index, g.entity(venue), 5);
    if (top.size() < 5 && example.empty()) example = venue + " has fewer than 5 results";
    for (const auto& r : top) {
      if (bib.venue_area.at(g.entity_name(r.entity)) != area) {
        ++wrong;
        if (example.empty()) example = venue + " -> " + g.entity_name(r.entity);
      }
    }
  }
  o.require(wrong == 0, std::to_string(wrong) + " cross-area hits, e.g. " + example);

  // Model over the same paths: same-area example pairs vs cross-area pairs.
  std::vector<EntityPair> pairs(set.pairs().begin(), set.pairs().end());
  std::vector<double> labels(pairs.size(), 1.0);
  for (const auto& [a, aa] : bib.venue_area) {
    for (const auto& [c, ca] : bib.venue_area) {
      if (aa != ca && pairs.size() < 2 * set.size()) {
        pairs.push_back({g.entity(a), g.entity(c)});
        labels.push_back(0.0);
      }
    }
  }
  const auto x = build_features(g, hin.hierarchy, pairs, paths);
  const auto fit = train_logreg(x.values, Eigen::Map<Eigen::VectorXd>(labels.data(),
                                                                      static_cast<Eigen::Index>(labels.size())));
  SavedModel saved{fit.model, paths};
  std::stringstream text;
  write_model(text, saved, g, hin.hierarchy);
  const auto back = read_model(text, g, hin.hierarchy);
  bool exact = back.paths == saved.paths &&
               std::bit_cast<std::uint64_t>(back.model.bias) ==
                   std::bit_cast<std::uint64_t>(saved.model.bias) &&
               back.model.weights.size() == saved.model.weights.size();
  for (Eigen::Index j = 0; exact && j < saved.model.weights.size(); ++j) {
    exact = std::bit_cast<std::uint64_t>(back.model.weights(j)) ==
            std::bit_cast<std::uint64_t>(saved.model.weights(j));
  }
  o.require(exact, "model round-trip changed bits");
  if (o.pass) {
    o.detail = std::to_string(bib.venue_area.size()) + " venues, " +
               std::to_string(paths.size()) + " paths";
  }
  return o;
}

}  // namespace
}  // namespace hini

int main() {
  using namespace hini;
  report(1, "walk scores match path-instance enumeration", walk_oracle);
  report(2, "commuting matrix matches path counts", commuting_oracle);
  report(3, "fixture regression", fixtures);
  report(4, "planted rule recovered, held-out AUC >= 0.95", planted_rule);
  report(5, "length-1 baseline AUC at least 0.2 lower", length_one_baseline);
  report(6, "tree search at least 5x faster than length-4 enumeration", efficiency);
  report(7, "logistic-regression gradient check", gradient_check);
  report(8, "rank-sum AUC equals pairwise AUC", auc_oracle);
  report(9, "best-first pop order and determinism", search_order);
  report(10, "venue similarity search and model round-trip", venue_search);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
