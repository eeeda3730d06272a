#include "hini/hin_graph.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace hini {

namespace {

template <typename Id>
std::unordered_map<std::string, Id> intern_sorted(
    std::vector<std::string>& names) {
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  std::unordered_map<std::string, Id> ids;
  ids.reserve(names.size());
  for (std::uint32_t i = 0; i < names.size(); ++i) ids.emplace(names[i], Id{i});
  return ids;
}

void sort_unique(std::vector<TypeId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

// ---------------------------------------------------------------------------
// TypeHierarchy

TypeHierarchy TypeHierarchy::build(
    std::span<const std::pair<std::string, std::string>> child_parent) {
  TypeHierarchy h;
  h.names_.emplace_back(kRootTypeName);
  for (const auto& [child, parent] : child_parent) {
    h.names_.push_back(child);
    h.names_.push_back(parent);
  }
  h.by_name_ = intern_sorted<TypeId>(h.names_);
  h.root_ = h.by_name_.at(std::string(kRootTypeName));

  const std::size_t n = h.names_.size();
  h.parents_.assign(n, {});
  for (const auto& [child, parent] : child_parent) {
    const TypeId c = h.by_name_.at(child);
    const TypeId p = h.by_name_.at(parent);
    if (c == h.root_) {
      throw PreconditionError("type hierarchy: root type '" +
                              std::string(kRootTypeName) +
                              "' cannot have parent '" + parent + "'");
    }
    if (c == p) {
      throw PreconditionError("type hierarchy: cycle through edge '" + child +
                              "' -> '" + parent + "'");
    }
    h.parents_[index(c)].push_back(p);
  }
  for (std::uint32_t t = 0; t < n; ++t) {
    auto& ps = h.parents_[t];
    sort_unique(ps);
    for (TypeId p : ps) h.explicit_edges_.emplace_back(TypeId{t}, p);
    if (ps.empty() && TypeId{t} != h.root_) ps.push_back(h.root_);
  }

  // Cycle check: three-colour DFS along parent edges.
  enum class Mark : std::uint8_t { kWhite, kGrey, kBlack };
  std::vector<Mark> mark(n, Mark::kWhite);
  std::function<void(std::uint32_t)> visit = [&](std::uint32_t t) {
    mark[t] = Mark::kGrey;
    for (TypeId p : h.parents_[t]) {
      if (mark[index(p)] == Mark::kGrey) {
        throw PreconditionError("type hierarchy: cycle through edge '" +
                                h.names_[t] + "' -> '" + h.names_[index(p)] +
                                "'");
      }
      if (mark[index(p)] == Mark::kWhite) visit(index(p));
    }
    mark[t] = Mark::kBlack;
  };
  for (std::uint32_t t = 0; t < n; ++t) {
    if (mark[t] == Mark::kWhite) visit(t);
  }

  // Depth (longest path from root) and ancestor closure, memoized.
  h.depth_.assign(n, 0);
  h.ancestors_.assign(n, {});
  std::vector<bool> done(n, false);
  std::function<void(std::uint32_t)> close = [&](std::uint32_t t) {
    if (done[t]) return;
    std::uint32_t depth = 0;
    std::vector<TypeId> anc{TypeId{t}};
    for (TypeId p : h.parents_[t]) {
      close(index(p));
      depth = std::max(depth, h.depth_[index(p)] + 1);
      const auto& pa = h.ancestors_[index(p)];
      anc.insert(anc.end(), pa.begin(), pa.end());
    }
    sort_unique(anc);
    h.depth_[t] = depth;
    h.ancestors_[t] = std::move(anc);
    done[t] = true;
  };
  for (std::uint32_t t = 0; t < n; ++t) close(t);
  return h;
}

std::optional<TypeId> TypeHierarchy::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

TypeId TypeHierarchy::id(std::string_view name) const {
  if (auto t = find(name)) return *t;
  throw PreconditionError("unknown type '" + std::string(name) + "'");
}

bool TypeHierarchy::is_ancestor_or_self(TypeId ancestor, TypeId t) const {
  const auto anc = ancestors(t);
  return std::binary_search(anc.begin(), anc.end(), ancestor);
}

std::vector<std::pair<TypeId, TypeId>> TypeHierarchy::edges() const {
  return explicit_edges_;
}

TypeId lca(const TypeHierarchy& hierarchy, TypeId a, TypeId b) {
  if (!hierarchy.contains(a) || !hierarchy.contains(b)) {
    throw PreconditionError("lca: unknown type id");
  }
  const auto aa = hierarchy.ancestors(a);
  const auto bb = hierarchy.ancestors(b);
  std::vector<TypeId> common;
  std::set_intersection(aa.begin(), aa.end(), bb.begin(), bb.end(),
                        std::back_inserter(common));
  // Root is always common. Ascending ids, so strict > keeps the smallest id.
  TypeId best = common.front();
  for (TypeId t : common) {
    if (hierarchy.depth(t) > hierarchy.depth(best)) best = t;
  }
  return best;
}

TypeId lca_of_set(const TypeHierarchy& hierarchy,
                  std::span<const TypeId> types) {
  if (types.empty()) throw PreconditionError("lca_of_set: empty type set");
  std::vector<TypeId> sorted(types.begin(), types.end());
  sort_unique(sorted);
  TypeId acc = sorted.front();
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    acc = lca(hierarchy, acc, sorted[i]);
  }
  if (sorted.size() == 1 && !hierarchy.contains(acc)) {
    throw PreconditionError("lca_of_set: unknown type id");
  }
  return acc;
}

// ---------------------------------------------------------------------------
// HinGraph

std::optional<EntityId> HinGraph::find_entity(std::string_view name) const {
  auto it = entity_by_name_.find(std::string(name));
  if (it == entity_by_name_.end()) return std::nullopt;
  return it->second;
}

EntityId HinGraph::entity(std::string_view name) const {
  if (auto e = find_entity(name)) return *e;
  throw UnknownEntityError("unknown entity '" + std::string(name) + "'");
}

std::optional<RelationId> HinGraph::find_relation(
    std::string_view name) const {
  auto it = relation_by_name_.find(std::string(name));
  if (it == relation_by_name_.end()) return std::nullopt;
  return it->second;
}

RelationId HinGraph::relation(std::string_view name) const {
  if (auto r = find_relation(name)) return *r;
  throw PreconditionError("unknown relation '" + std::string(name) + "'");
}

std::size_t HinGraph::edge_count() const noexcept {
  std::size_t total = 0;
  for (std::size_t slot = 0; slot < adjacency_.size(); slot += 2) {
    total += adjacency_[slot].targets.size();
  }
  return total;
}

bool HinGraph::has_type(EntityId e, TypeId t) const noexcept {
  if (t == root_) return true;
  const auto& ts = closed_types_[index(e)];
  return std::binary_search(ts.begin(), ts.end(), t);
}

std::vector<EntityId> HinGraph::entities_of_type(TypeId t) const {
  std::vector<EntityId> out;
  for (std::uint32_t e = 0; e < entity_count(); ++e) {
    if (has_type(EntityId{e}, t)) out.push_back(EntityId{e});
  }
  return out;
}

struct GraphBuilder {
  static BuiltGraph build(
      std::span<const Triple> triples,
      std::span<const TypeAssignment> assignments,
      std::span<const std::pair<std::string, std::string>> hierarchy_edges) {
    BuiltGraph out{HinGraph{}, TypeHierarchy::build(hierarchy_edges)};
    HinGraph& g = out.graph;
    const TypeHierarchy& h = out.hierarchy;
    g.root_ = h.root();

    for (const auto& t : triples) {
      g.entity_names_.push_back(t.source);
      g.entity_names_.push_back(t.target);
      g.relation_names_.push_back(t.relation);
    }
    for (const auto& a : assignments) g.entity_names_.push_back(a.entity);
    g.entity_by_name_ = intern_sorted<EntityId>(g.entity_names_);
    g.relation_by_name_ = intern_sorted<RelationId>(g.relation_names_);

    const std::size_t n = g.entity_names_.size();
    g.direct_types_.assign(n, {});
    for (const auto& a : assignments) {
      auto t = h.find(a.type);
      if (!t) {
        throw PreconditionError("type assignment for entity '" + a.entity +
                                "' references type '" + a.type +
                                "' absent from the hierarchy");
      }
      g.direct_types_[index(g.entity_by_name_.at(a.entity))].push_back(*t);
    }
    g.closed_types_.assign(n, {});
    for (std::size_t e = 0; e < n; ++e) {
      auto& direct = g.direct_types_[e];
      if (direct.empty()) direct.push_back(h.root());
      sort_unique(direct);
      auto& closed = g.closed_types_[e];
      for (TypeId t : direct) {
        const auto anc = h.ancestors(t);
        closed.insert(closed.end(), anc.begin(), anc.end());
      }
      sort_unique(closed);
    }

    // Edge list per directed slot, sorted + deduplicated, then CSR.
    const std::size_t slots = 2 * g.relation_names_.size();
    std::vector<std::vector<std::pair<EntityId, EntityId>>> edges(slots);
    for (const auto& t : triples) {
      const EntityId u = g.entity_by_name_.at(t.source);
      const EntityId v = g.entity_by_name_.at(t.target);
      const DirectedRelation fwd{g.relation_by_name_.at(t.relation), false};
      edges[fwd.slot()].emplace_back(u, v);
      edges[fwd.inverse().slot()].emplace_back(v, u);
    }
    g.adjacency_.resize(slots);
    for (std::size_t s = 0; s < slots; ++s) {
      auto& list = edges[s];
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
      auto& csr = g.adjacency_[s];
      csr.offsets.assign(n + 1, 0);
      csr.targets.reserve(list.size());
      for (const auto& [u, v] : list) {
        ++csr.offsets[index(u) + 1];
        csr.targets.push_back(v);
      }
      for (std::size_t i = 0; i < n; ++i) csr.offsets[i + 1] += csr.offsets[i];
    }
    return out;
  }
};

BuiltGraph build_graph(
    std::span<const Triple> triples,
    std::span<const TypeAssignment> type_assignments,
    std::span<const std::pair<std::string, std::string>> hierarchy_edges) {
  return GraphBuilder::build(triples, type_assignments, hierarchy_edges);
}

std::span<const EntityId> out_neighbors(const HinGraph& graph, EntityId entity,
                                        DirectedRelation rel) {
  if (!graph.contains(entity)) {
    throw UnknownEntityError("unknown entity id " +
                             std::to_string(index(entity)));
  }
  if (index(rel.relation) >= graph.relation_count()) {
    throw PreconditionError("unknown relation id " +
                            std::to_string(index(rel.relation)));
  }
  return graph.neighbors(entity, rel);
}

std::vector<TypeId> entity_types(const HinGraph& graph, EntityId entity) {
  if (!graph.contains(entity)) {
    throw UnknownEntityError("unknown entity id " +
                             std::to_string(index(entity)));
  }
  const auto ts = graph.types(entity);
  return {ts.begin(), ts.end()};
}

}  // namespace hini
