#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "hini/hini.hpp"

namespace hini::test {

inline std::filesystem::path data_dir() { return HINI_TEST_DATA_DIR; }

inline DatasetBundle fixture_bundle(const std::string& name,
                                    const std::string& examples = "examples.tsv") {
  const auto dir = data_dir() / name;
  return {dir / "edges.tsv", dir / "types.tsv", dir / "hierarchy.tsv",
          dir / examples};
}

inline RawBundle g1_raw() {
  RawBundle raw;
  raw.edges = {{"p1", "found", "g"}, {"p2", "found", "g"}};
  raw.types = {{"p1", "Person"},
               {"p2", "Person"},
               {"g", "Organization"},
               {"g", "Company"}};
  raw.hierarchy = {{"Company", "Organization"},
                   {"Organization", "Object"},
                   {"Person", "Object"}};
  return raw;
}

inline RawBundle g2_raw() {
  RawBundle raw;
  raw.edges = {{"a1", "publishIn", "v1"}, {"a2", "publishIn", "v1"},
               {"b1", "publishIn", "v2"}, {"c1", "publishIn", "v3"},
               {"x", "authorOf", "a1"},   {"x", "authorOf", "b1"},
               {"y", "authorOf", "a2"},   {"y", "authorOf", "c1"}};
  for (auto v : {"v1", "v2", "v3"}) raw.types.push_back({v, "Venue"});
  for (auto p : {"a1", "a2", "b1", "c1"}) raw.types.push_back({p, "Paper"});
  for (auto a : {"x", "y"}) raw.types.push_back({a, "Author"});
  raw.hierarchy = {{"Venue", "Object"}, {"Paper", "Object"}, {"Author", "Object"}};
  return raw;
}

inline BuiltGraph g1() { return build_graph(g1_raw()); }
inline BuiltGraph g2() { return build_graph(g2_raw()); }

inline DirectedRelation fwd(const HinGraph& g, std::string_view name) {
  return {g.relation(name), false};
}
inline DirectedRelation inv(const HinGraph& g, std::string_view name) {
  return {g.relation(name), true};
}

inline MetaPath path_of(const BuiltGraph& b, std::string_view text) {
  return parse_metapath(text, b.graph, b.hierarchy);
}

inline const char* kPStar =
    "Venue -publishIn~-> Paper -authorOf~-> Author -authorOf-> Paper "
    "-publishIn-> Venue";

inline std::vector<DirectedRelation> pstar_relations(const HinGraph& g) {
  return {inv(g, "publishIn"), inv(g, "authorOf"), fwd(g, "authorOf"),
          fwd(g, "publishIn")};
}

// Random typed graphs: up to 40 entities, up to 4 relations, a small DAG of
// types (E has two parents) and 0-2 types per entity.
inline RawBundle random_raw(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  RawBundle raw;
  raw.hierarchy = {{"A", "Object"}, {"B", "Object"}, {"C", "Object"},
                   {"D", "A"},      {"E", "A"},      {"E", "B"}};
  const std::vector<std::string> type_names{"A", "B", "C", "D", "E"};
  const int n = uniform(2, 40);
  const int rels = uniform(1, 4);
  auto name = [](int i) {
    return std::string(i < 10 ? "e0" : "e") + std::to_string(i);
  };
  for (int i = 0; i < n; ++i) {
    const int k = uniform(0, 2);
    for (int j = 0; j < k; ++j) {
      raw.types.push_back({name(i), type_names[uniform(0, 4)]});
    }
    if (k == 0) raw.types.push_back({name(i), "Object"});
  }
  const int m = uniform(n / 2, 3 * n);
  for (int e = 0; e < m; ++e) {
    raw.edges.push_back({name(uniform(0, n - 1)), "r" + std::to_string(uniform(0, rels - 1)),
                         name(uniform(0, n - 1))});
  }
  return raw;
}

// Random meta-path of length 0..max_len; about half of the node types are the
// root so that walks are not always empty.
inline MetaPath random_path(const BuiltGraph& b, std::mt19937_64& rng,
                            std::size_t max_len) {
  const auto& g = b.graph;
  const auto& h = b.hierarchy;
  const std::size_t len =
      std::uniform_int_distribution<std::size_t>(0, max_len)(rng);
  MetaPath p;
  auto type = [&] {
    if (std::bernoulli_distribution(0.5)(rng)) return h.root();
    return TypeId{static_cast<std::uint32_t>(
        std::uniform_int_distribution<std::size_t>(0, h.size() - 1)(rng))};
  };
  p.node_types.push_back(type());
  for (std::size_t i = 0; i < len; ++i) {
    const auto slot = std::uniform_int_distribution<std::uint32_t>(
        0, static_cast<std::uint32_t>(2 * g.relation_count() - 1))(rng);
    p.edge_relations.push_back(DirectedRelation::from_slot(slot));
    p.node_types.push_back(type());
  }
  return p;
}

inline bool holds_type(const HinGraph& g, EntityId e, TypeId t) {
  const auto ts = entity_types(g, e);
  return std::find(ts.begin(), ts.end(), t) != ts.end();
}

// Qualifying neighbors, recomputed from the raw adjacency and type closure.
inline std::vector<EntityId> qualifying(const HinGraph& g, EntityId e,
                                        DirectedRelation r, TypeId next) {
  std::vector<EntityId> out;
  for (EntityId w : out_neighbors(g, e, r)) {
    if (holds_type(g, w, next)) out.push_back(w);
  }
  return out;
}

// Probability of one concrete instance: product of 1/|qualifying| per step.
inline double instance_probability(const HinGraph& g, const MetaPath& p,
                                   const std::vector<EntityId>& inst) {
  double prob = 1.0;
  for (std::size_t i = 0; i < p.length(); ++i) {
    prob /= static_cast<double>(
        qualifying(g, inst[i], p.edge_relations[i], p.node_types[i + 1]).size());
  }
  return prob;
}

// Naive recursive instance walk, independent of the library's enumerator.
inline void naive_instances(const HinGraph& g, const MetaPath& p,
                            std::vector<EntityId>& prefix,
                            std::vector<std::vector<EntityId>>& out) {
  const std::size_t i = prefix.size() - 1;
  if (i == p.length()) {
    out.push_back(prefix);
    return;
  }
  for (EntityId w : qualifying(g, prefix.back(), p.edge_relations[i],
                               p.node_types[i + 1])) {
    prefix.push_back(w);
    naive_instances(g, p, prefix, out);
    prefix.pop_back();
  }
}

inline std::vector<std::vector<EntityId>> naive_instances(const HinGraph& g,
                                                          const MetaPath& p,
                                                          EntityId s) {
  std::vector<std::vector<EntityId>> out;
  if (!holds_type(g, s, p.source_type())) return out;
  std::vector<EntityId> prefix{s};
  naive_instances(g, p, prefix, out);
  return out;
}

// Oracle walk distribution: sum of instance probabilities per endpoint.
inline std::map<EntityId, double> oracle_walk(const HinGraph& g,
                                              const MetaPath& p, EntityId s) {
  std::map<EntityId, double> mass;
  for (const auto& inst : naive_instances(g, p, s)) {
    mass[inst.back()] += instance_probability(g, p, inst);
  }
  return mass;
}

}  // namespace hini::test
