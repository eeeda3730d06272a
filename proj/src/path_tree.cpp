#include "hini/path_tree.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hini {

// ---------------------------------------------------------------------------
// ExamplePairSet

ExamplePairSet::ExamplePairSet(std::span<const EntityPair> pairs,
                               std::span<const double> weights) {
  if (pairs.empty()) {
    throw PreconditionError("example set must be non-empty");
  }
  if (!weights.empty() && weights.size() != pairs.size()) {
    throw PreconditionError("example weights must match example pairs");
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw PreconditionError("example weights must be positive and finite");
    }
    auto [it, inserted] = row_.try_emplace(pack(pairs[i]), pairs_.size());
    if (inserted) {
      pairs_.push_back(pairs[i]);
      weights_.push_back(w);
    } else {
      weights_[it->second] = std::max(weights_[it->second], w);
    }
  }
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    auto& stats = by_source_[index(pairs_[i].source)];
    stats.targets.push_back(pairs_[i].target);
    stats.max_weight = std::max(stats.max_weight, weights_[i]);
  }
  for (auto& [u, stats] : by_source_) {
    std::sort(stats.targets.begin(), stats.targets.end());
    sources_.push_back(EntityId{u});
  }
  std::sort(sources_.begin(), sources_.end());
}

double ExamplePairSet::weight(EntityPair p) const {
  auto it = row_.find(pack(p));
  if (it == row_.end()) throw PreconditionError("pair is not an example");
  return weights_[it->second];
}

std::optional<std::size_t> ExamplePairSet::row_of(EntityPair p) const {
  auto it = row_.find(pack(p));
  if (it == row_.end()) return std::nullopt;
  return it->second;
}

std::size_t ExamplePairSet::count_from(EntityId u) const noexcept {
  auto it = by_source_.find(index(u));
  return it == by_source_.end() ? 0 : it->second.targets.size();
}

double ExamplePairSet::max_weight_from(EntityId u) const noexcept {
  auto it = by_source_.find(index(u));
  return it == by_source_.end() ? 0.0 : it->second.max_weight;
}

std::span<const EntityId> ExamplePairSet::targets_from(EntityId u) const noexcept {
  auto it = by_source_.find(index(u));
  if (it == by_source_.end()) return {};
  return it->second.targets;
}

void SearchConfig::validate() const {
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw PreconditionError("beta must lie in (0, 1]");
  }
  if (max_depth < 1) throw PreconditionError("max_depth must be >= 1");
  if (max_paths < 1) throw PreconditionError("max_paths must be >= 1");
  if (node_budget < 1) throw PreconditionError("node_budget must be >= 1");
}

// ---------------------------------------------------------------------------
// Priority

namespace {

// Shared by the full-tuple and the summary paths: `mass` lists the walk mass
// per source, ascending by source.
double priority_from(std::span<const std::pair<EntityId, double>> mass,
                     bool holds_example, std::uint32_t depth,
                     const ExamplePairSet& examples, double beta) {
  double numerator = 0.0;
  double denominator = 0.0;
  for (const auto& [u, m] : mass) {
    const auto c = examples.count_from(u);
    if (c == 0) continue;  // not an example source
    const double max_r = examples.max_weight_from(u);
    numerator += max_r * m / static_cast<double>(c);
    denominator += max_r;
  }
  const double base = denominator > 0.0 ? numerator / denominator : 0.0;
  const double decayed = base * std::pow(beta, static_cast<double>(depth));
  return holds_example ? decayed + 1.0 : decayed;
}

std::vector<WalkTuple> example_tuples_of(std::span<const WalkTuple> tuples,
                                         const ExamplePairSet& examples) {
  std::vector<WalkTuple> out;
  for (const WalkTuple& t : tuples) {
    const auto targets = examples.targets_from(t.pair.source);
    if (std::binary_search(targets.begin(), targets.end(), t.pair.target)) {
      out.push_back(t);
    }
  }
  return out;
}

// Dense per-entity accumulator, kept zero between uses.
std::vector<double>& scratch_row(std::size_t n) {
  thread_local std::vector<double> row;
  if (row.size() < n) row.assign(n, 0.0);
  return row;
}

}  // namespace

double priority_score(const TreeNode& node, const ExamplePairSet& examples,
                      double beta) {
  if (node.tuples.empty()) {
    throw PreconditionError("priority_score: node has no tuples");
  }
  std::vector<std::pair<EntityId, double>> mass;
  for (const WalkTuple& t : node.tuples) {
    if (mass.empty() || mass.back().first != t.pair.source) {
      mass.emplace_back(t.pair.source, 0.0);
    }
    mass.back().second += t.probability;
  }
  return priority_from(mass, !example_tuples_of(node.tuples, examples).empty(),
                       node.depth, examples, beta);
}

// ---------------------------------------------------------------------------
// DependencyTree

DependencyTree::DependencyTree(const ExamplePairSet& examples, double beta)
    : examples_(&examples), beta_(beta) {
  TreeNode top;
  for (EntityId s : examples.sources()) {
    top.tuples.push_back({{s, s}, 1.0});
  }
  top.materialized = true;
  top.example_tuples = example_tuples_of(top.tuples, examples);
  top.holds_example = !top.example_tuples.empty();
  top.priority = priority_score(top, examples, beta);
  nodes_.push_back(std::move(top));
  push(root());
}

std::vector<DirectedRelation> DependencyTree::relations(NodeId id) const {
  std::vector<DirectedRelation> out;
  for (std::optional<NodeId> cur = id; cur; cur = nodes_.at(*cur).parent) {
    if (const auto& rel = nodes_.at(*cur).incoming) out.push_back(*rel);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<std::vector<EntityId>> DependencyTree::trace(NodeId id) const {
  std::vector<std::vector<EntityId>> out;
  for (std::optional<NodeId> cur = id; cur; cur = nodes_.at(*cur).parent) {
    const TreeNode& n = nodes_.at(*cur);
    if (!n.materialized) {
      throw PreconditionError("trace: node " + std::to_string(*cur) +
                              " is not materialized");
    }
    std::vector<EntityId> entities;
    for (const auto& t : n.tuples) entities.push_back(t.pair.target);
    std::sort(entities.begin(), entities.end());
    entities.erase(std::unique(entities.begin(), entities.end()),
                   entities.end());
    out.push_back(std::move(entities));
  }
  std::reverse(out.begin(), out.end());
  return out;
}

void DependencyTree::push(NodeId id, std::optional<double> priority) {
  const TreeNode& n = nodes_.at(id);
  frontier_.insert({priority.value_or(n.priority), n.depth, relations(id), id});
}

NodeId DependencyTree::pop() {
  auto it = frontier_.begin();
  const NodeId id = it->node;
  frontier_.erase(it);
  return id;
}

const std::vector<WalkTuple>& DependencyTree::materialize(const HinGraph& graph,
                                                          NodeId id) {
  if (nodes_.at(id).materialized) return nodes_[id].tuples;
  const NodeId parent = *nodes_[id].parent;
  materialize(graph, parent);
  const DirectedRelation rel = *nodes_[id].incoming;
  auto& row = scratch_row(graph.entity_count());
  std::vector<EntityId> touched;
  std::vector<WalkTuple> out;
  const auto& tuples = nodes_[parent].tuples;
  // Sources arrive in runs; each run is accumulated densely and only the
  // touched targets are sorted.
  for (std::size_t i = 0; i < tuples.size();) {
    const EntityId u = tuples[i].pair.source;
    for (; i < tuples.size() && tuples[i].pair.source == u; ++i) {
      const auto next = graph.neighbors(tuples[i].pair.target, rel);
      if (next.empty()) continue;
      const double share = tuples[i].probability / static_cast<double>(next.size());
      for (EntityId w : next) {
        if (row[index(w)] == 0.0) touched.push_back(w);
        row[index(w)] += share;
      }
    }
    std::sort(touched.begin(), touched.end());
    for (EntityId w : touched) {
      out.push_back({{u, w}, row[index(w)]});
      row[index(w)] = 0.0;
    }
    touched.clear();
  }
  nodes_[id].tuples = std::move(out);
  nodes_[id].materialized = true;
  return nodes_[id].tuples;
}

std::vector<NodeId> DependencyTree::expand(const HinGraph& graph, NodeId id) {
  if (nodes_.at(id).expanded) {
    throw PreconditionError("node already expanded");
  }
  materialize(graph, id);
  const std::size_t slots = 2 * graph.relation_count();

  // Per child slot: walk mass per source and the example-pair scores,
  // accumulated in the same order materialize() would use.
  struct Summary {
    std::vector<std::pair<EntityId, double>> mass;
    std::vector<WalkTuple> examples;
  };
  std::vector<Summary> summary(slots);
  std::vector<double> run_mass(slots);
  std::vector<char> run_seen(slots);
  std::vector<double> run_y;
  std::vector<char> run_hit;

  const auto& tuples = nodes_[id].tuples;
  for (std::size_t i = 0; i < tuples.size();) {
    const EntityId u = tuples[i].pair.source;
    const auto targets = examples_->targets_from(u);
    std::fill(run_mass.begin(), run_mass.end(), 0.0);
    std::fill(run_seen.begin(), run_seen.end(), 0);
    run_y.assign(slots * targets.size(), 0.0);
    run_hit.assign(slots * targets.size(), 0);
    for (; i < tuples.size() && tuples[i].pair.source == u; ++i) {
      const EntityId v = tuples[i].pair.target;
      const double f = tuples[i].probability;
      for (std::uint32_t slot = 0; slot < slots; ++slot) {
        const auto next = graph.neighbors(v, DirectedRelation::from_slot(slot));
        if (next.empty()) continue;
        run_seen[slot] = 1;
        run_mass[slot] += f;
        const double share = f / static_cast<double>(next.size());
        for (std::size_t k = 0; k < targets.size(); ++k) {
          if (std::binary_search(next.begin(), next.end(), targets[k])) {
            run_y[slot * targets.size() + k] += share;
            run_hit[slot * targets.size() + k] = 1;
          }
        }
      }
    }
    for (std::uint32_t slot = 0; slot < slots; ++slot) {
      if (!run_seen[slot]) continue;
      summary[slot].mass.emplace_back(u, run_mass[slot]);
      for (std::size_t k = 0; k < targets.size(); ++k) {
        if (run_hit[slot * targets.size() + k]) {
          summary[slot].examples.push_back(
              {{u, targets[k]}, run_y[slot * targets.size() + k]});
        }
      }
    }
  }

  std::vector<NodeId> created;
  for (std::uint32_t slot = 0; slot < slots; ++slot) {
    if (summary[slot].mass.empty()) continue;
    TreeNode child;
    child.incoming = DirectedRelation::from_slot(slot);
    child.parent = id;
    child.depth = nodes_[id].depth + 1;
    child.example_tuples = std::move(summary[slot].examples);
    child.holds_example = !child.example_tuples.empty();
    child.priority = priority_from(summary[slot].mass, child.holds_example,
                                   child.depth, *examples_, beta_);
    const auto child_id = static_cast<NodeId>(nodes_.size());
    nodes_[id].children.emplace_back(*child.incoming, child_id);
    nodes_.push_back(std::move(child));
    created.push_back(child_id);
  }
  nodes_[id].expanded = true;
  for (NodeId c : created) push(c);
  return created;
}

std::vector<NodeId> expand(const HinGraph& graph, DependencyTree& tree,
                           NodeId id) {
  return tree.expand(graph, id);
}

// ---------------------------------------------------------------------------
// Search

MpdtsResult mpdts(const HinGraph& graph, DependencyTree& tree,
                  const SearchConfig& config, const PopObserver& observer) {
  config.validate();
  while (!tree.frontier().empty()) {
    const NodeId id = tree.frontier().begin()->node;
    const TreeNode& top = tree.node(id);
    const bool can_expand = !top.expanded && top.depth < config.max_depth;
    const bool emit = top.holds_example && !top.emitted;
    if (!emit && can_expand && tree.size() >= config.node_budget) {
      return {SearchStatus::kBudgetExceeded, std::nullopt};
    }
    if (observer) observer(tree, id);
    tree.pop();

    if (emit) {
      tree.materialize(graph, id);
      TreeNode& node = tree.node(id);
      node.emitted = true;
      Emission out;
      out.node = id;
      out.path = MetaPath::relations_only(tree.relations(id),
                                          graph.root_type());
      for (const WalkTuple& t : node.example_tuples) {
        out.scores.emplace_back(t.pair, t.probability);
      }
      if (can_expand) tree.push(id, node.priority - 1.0);
      return {SearchStatus::kEmitted, std::move(out)};
    }
    if (can_expand) tree.expand(graph, id);
  }
  return {SearchStatus::kFrontierEmpty, std::nullopt};
}

MetaPath fill_types(std::span<const DirectedRelation> relations,
                    std::span<const std::vector<EntityId>> trace,
                    const HinGraph& graph, const TypeHierarchy& hierarchy) {
  if (trace.size() != relations.size() + 1) {
    throw PreconditionError("fill_types: trace must cover every path node");
  }
  MetaPath path;
  path.edge_relations.assign(relations.begin(), relations.end());
  for (const auto& entities : trace) {
    if (entities.empty()) {
      throw PreconditionError("fill_types: empty entity set at a path node");
    }
    // Directly assigned types only: closures always meet at the root.
    std::vector<TypeId> types;
    for (EntityId e : entities) {
      const auto direct = graph.direct_types(e);
      types.insert(types.end(), direct.begin(), direct.end());
    }
    path.node_types.push_back(lca_of_set(hierarchy, types));
  }
  return path;
}

GenerationResult jmpdts(const HinGraph& graph, const TypeHierarchy& hierarchy,
                        const ExamplePairSet& examples,
                        const SearchConfig& config,
                        const PopObserver& observer) {
  config.validate();
  DependencyTree tree(examples, config.beta);
  GenerationResult result;
  std::set<std::vector<DirectedRelation>> seen;
  while (result.paths.size() < config.max_paths) {
    MpdtsResult step = mpdts(graph, tree, config, observer);
    if (step.status == SearchStatus::kFrontierEmpty) {
      result.status = GenerationStatus::kTreeExhausted;
      break;
    }
    if (step.status == SearchStatus::kBudgetExceeded) {
      result.status = GenerationStatus::kBudgetExceeded;
      break;
    }
    Emission& e = *step.emission;
    if (!seen.insert(e.path.edge_relations).second) continue;
    const auto trace = tree.trace(e.node);
    result.paths.push_back(
        {fill_types(e.path.edge_relations, trace, graph, hierarchy),
         std::move(e.scores)});
  }
  if (result.paths.size() == config.max_paths) {
    result.status = GenerationStatus::kReachedMaxPaths;
  }

  result.scores = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(examples.size()),
      static_cast<Eigen::Index>(result.paths.size()));
  for (std::size_t j = 0; j < result.paths.size(); ++j) {
    for (const auto& [pair, score] : result.paths[j].scores) {
      result.scores(static_cast<Eigen::Index>(*examples.row_of(pair)),
                    static_cast<Eigen::Index>(j)) = score;
    }
  }
  result.tree_size = tree.size();
  return result;
}

}  // namespace hini
