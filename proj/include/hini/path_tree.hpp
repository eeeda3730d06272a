#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

#include "hini/hin_graph.hpp"
#include "hini/metapath.hpp"

namespace hini {

/// Weighted example pairs Λ. Pairs are deduplicated (keeping the larger
/// weight) and kept in first-seen order; that order indexes score rows.
class ExamplePairSet {
 public:
  /// `weights` may be empty (all 1.0) or match `pairs` in length. Throws
  /// PreconditionError on an empty set or a non-positive weight.
  ExamplePairSet(std::span<const EntityPair> pairs,
                 std::span<const double> weights = {});

  std::span<const EntityPair> pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  double weight(EntityPair p) const;
  bool contains(EntityPair p) const noexcept {
    return row_.contains(pack(p));
  }
  std::optional<std::size_t> row_of(EntityPair p) const;

  /// c(u): number of example pairs starting at `u` (0 if none).
  std::size_t count_from(EntityId u) const noexcept;
  /// max(r_u): largest weight among pairs starting at `u`.
  double max_weight_from(EntityId u) const noexcept;
  /// Targets of the pairs starting at `u`, ascending.
  std::span<const EntityId> targets_from(EntityId u) const noexcept;
  /// Distinct sources, ascending.
  const std::vector<EntityId>& sources() const noexcept { return sources_; }

 private:
  std::vector<EntityPair> pairs_;
  std::vector<double> weights_;
  std::unordered_map<std::uint64_t, std::size_t> row_;
  struct SourceStats {
    double max_weight = 0.0;
    std::vector<EntityId> targets;
  };
  std::unordered_map<std::uint32_t, SourceStats> by_source_;
  std::vector<EntityId> sources_;
};

struct SearchConfig {
  double beta = 0.6;
  std::size_t max_depth = 6;
  std::size_t max_paths = 20;
  std::size_t node_budget = 1'000'000;

  /// Throws PreconditionError when a field is out of range.
  void validate() const;
};

using NodeId = std::uint32_t;

/// <(s, current), f(s, current | P)>
struct WalkTuple {
  EntityPair pair;
  double probability = 0.0;
};

/// Children are created from a summary (walk mass per source plus the
/// example-pair tuples), which fixes their priority and emission scores.
/// The full tuple set is built on demand by DependencyTree::materialize and
/// always before a node is expanded or emitted.
struct TreeNode {
  std::optional<DirectedRelation> incoming;  // empty at the root
  std::optional<NodeId> parent;
  std::uint32_t depth = 0;
  std::vector<WalkTuple> tuples;  // sorted by pair; empty until materialized
  bool materialized = false;
  std::vector<WalkTuple> example_tuples;  // tuples that are example pairs
  double priority = 0.0;
  bool holds_example = false;
  std::vector<std::pair<DirectedRelation, NodeId>> children;  // by relation
  bool expanded = false;
  bool emitted = false;
};

/// Priority S of a node: weighted mean walk mass per example source, decayed
/// by beta^depth, plus one when any tuple is an example pair. Throws on a
/// node without tuples.
double priority_score(const TreeNode& node, const ExamplePairSet& examples,
                      double beta);

/// Frontier ordering: larger priority first, then shallower, then the
/// lexicographically smaller relation sequence.
struct FrontierEntry {
  double priority = 0.0;
  std::uint32_t depth = 0;
  std::vector<DirectedRelation> relations;
  NodeId node = 0;
};

/// Priorities are compared on a 2^-36 grid so that rounding noise in
/// accumulated walk mass cannot override the depth/sequence tie-break.
inline double priority_key(double priority) noexcept {
  return std::round(std::ldexp(priority, 36));
}

struct FrontierOrder {
  bool operator()(const FrontierEntry& a, const FrontierEntry& b) const {
    const double ka = priority_key(a.priority);
    const double kb = priority_key(b.priority);
    if (ka != kb) return ka > kb;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.relations < b.relations;
  }
};

/// Persistent search tree. Nodes live in an arena and are never removed;
/// the frontier holds the nodes still eligible to be popped.
class DependencyTree {
 public:
  using Frontier = std::set<FrontierEntry, FrontierOrder>;

  /// Root tuples are {(s, s): 1} for every distinct example source.
  DependencyTree(const ExamplePairSet& examples, double beta);

  const TreeNode& node(NodeId id) const { return nodes_.at(id); }
  TreeNode& node(NodeId id) { return nodes_.at(id); }
  std::size_t size() const noexcept { return nodes_.size(); }
  static constexpr NodeId root() noexcept { return 0; }

  const Frontier& frontier() const noexcept { return frontier_; }

  /// Relation sequence from the root to `id`.
  std::vector<DirectedRelation> relations(NodeId id) const;
  /// Entities (tuple currents) per depth along the root path of `id`.
  /// Throws PreconditionError if a node on the path is not materialized.
  std::vector<std::vector<EntityId>> trace(NodeId id) const;

  /// Builds the full tuple set of `id` (and of its ancestors if needed).
  const std::vector<WalkTuple>& materialize(const HinGraph& graph, NodeId id);

  /// Materializes `id`, creates its children (see expand) and enqueues them.
  std::vector<NodeId> expand(const HinGraph& graph, NodeId id);

  /// Enqueues `id` at its own priority, or at `priority` when given.
  void push(NodeId id, std::optional<double> priority = std::nullopt);
  NodeId pop();

  const ExamplePairSet& examples() const noexcept { return *examples_; }
  double beta() const noexcept { return beta_; }

 private:
  const ExamplePairSet* examples_;
  double beta_;
  std::vector<TreeNode> nodes_;
  Frontier frontier_;
};

/// Expands one node: for every tuple (u, v) and every directed relation R
/// with neighbors at v, the child reached by R accumulates
/// (u, w) += f(u, v) / |N(v, R)| for each neighbor w. Returns the new
/// children (in relation order) with priorities set; empty at a dead end.
/// Children start unmaterialized.
std::vector<NodeId> expand(const HinGraph& graph, DependencyTree& tree,
                           NodeId id);

enum class SearchStatus {
  kEmitted,
  kFrontierEmpty,
  kBudgetExceeded,
};

/// A relations-only path popped from the tree with the walk scores y of the
/// example pairs it contains.
struct Emission {
  NodeId node = 0;
  MetaPath path;
  std::vector<std::pair<EntityPair, double>> scores;
};

struct MpdtsResult {
  SearchStatus status = SearchStatus::kFrontierEmpty;
  std::optional<Emission> emission;
};

/// Called with the tree just before the front of the frontier is removed.
using PopObserver = std::function<void(const DependencyTree&, NodeId)>;

/// Best-first search until the next unemitted node holding an example pair
/// is popped. Nodes at max_depth without example pairs are discarded. An
/// emitted node below max_depth is queued once more, without the example
/// bonus, so its subtree stays reachable in later calls.
MpdtsResult mpdts(const HinGraph& graph, DependencyTree& tree,
                  const SearchConfig& config,
                  const PopObserver& observer = {});

/// Assigns each path position the LCA of the directly assigned types of
/// the entities observed at that depth. Throws if any depth is empty.
MetaPath fill_types(std::span<const DirectedRelation> relations,
                    std::span<const std::vector<EntityId>> trace,
                    const HinGraph& graph, const TypeHierarchy& hierarchy);

struct GeneratedPath {
  MetaPath path;  // types filled
  std::vector<std::pair<EntityPair, double>> scores;
};

enum class GenerationStatus {
  kReachedMaxPaths,
  kTreeExhausted,
  kBudgetExceeded,
};

struct GenerationResult {
  GenerationStatus status = GenerationStatus::kTreeExhausted;
  std::vector<GeneratedPath> paths;
  /// Rows: example pairs in ExamplePairSet order. Columns: paths.
  Eigen::MatrixXd scores;
  std::size_t tree_size = 0;

  bool empty() const noexcept { return paths.empty(); }
};

/// Repeated MPDTS over one persistent tree until max_paths paths are
/// emitted or the tree is exhausted.
GenerationResult jmpdts(const HinGraph& graph, const TypeHierarchy& hierarchy,
                        const ExamplePairSet& examples,
                        const SearchConfig& config,
                        const PopObserver& observer = {});

}  // namespace hini
