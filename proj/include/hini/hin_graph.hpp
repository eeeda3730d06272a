#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hini/types.hpp"

namespace hini {

inline constexpr std::string_view kRootTypeName = "Object";

/// Entity-type DAG rooted at Object. Multiple parents are allowed.
class TypeHierarchy {
 public:
  /// Builds from (child, parent) name edges. Types that never appear as a
  /// child are attached under the root. Throws PreconditionError naming one
  /// edge of a cycle, or if the root is given a parent.
  static TypeHierarchy build(
      std::span<const std::pair<std::string, std::string>> child_parent);

  TypeId root() const noexcept { return root_; }
  std::size_t size() const noexcept { return names_.size(); }

  const std::string& name(TypeId t) const { return names_.at(index(t)); }
  std::optional<TypeId> find(std::string_view name) const;
  /// Throws PreconditionError for an unknown name.
  TypeId id(std::string_view name) const;
  bool contains(TypeId t) const noexcept { return index(t) < names_.size(); }

  std::span<const TypeId> parents(TypeId t) const {
    return parents_.at(index(t));
  }
  /// Ancestors including `t` itself, sorted by id.
  std::span<const TypeId> ancestors(TypeId t) const {
    return ancestors_.at(index(t));
  }
  /// Longest path length from the root.
  std::uint32_t depth(TypeId t) const { return depth_.at(index(t)); }
  bool is_ancestor_or_self(TypeId ancestor, TypeId t) const;

  /// The (child, parent) edges in canonical order, excluding implicit root
  /// attachments that were not given explicitly.
  std::vector<std::pair<TypeId, TypeId>> edges() const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, TypeId> by_name_;
  std::vector<std::vector<TypeId>> parents_;
  std::vector<std::vector<TypeId>> ancestors_;
  std::vector<std::uint32_t> depth_;
  std::vector<std::pair<TypeId, TypeId>> explicit_edges_;
  TypeId root_{};
};

/// Common ancestor of `a` and `b` with maximal depth; ties go to the smaller
/// type id.
TypeId lca(const TypeHierarchy& hierarchy, TypeId a, TypeId b);

/// Left fold of `lca` over the id-sorted set. Throws on an empty set.
TypeId lca_of_set(const TypeHierarchy& hierarchy, std::span<const TypeId> types);

struct Triple {
  std::string source;
  std::string relation;
  std::string target;
};

struct TypeAssignment {
  std::string entity;
  std::string type;
};

/// Immutable typed multigraph. Every edge is stored in both directions, one
/// CSR table per directed relation, neighbor lists sorted and deduplicated.
class HinGraph {
 public:
  std::size_t entity_count() const noexcept { return entity_names_.size(); }
  std::size_t relation_count() const noexcept {
    return relation_names_.size();
  }

  const std::string& entity_name(EntityId e) const {
    return entity_names_.at(index(e));
  }
  std::optional<EntityId> find_entity(std::string_view name) const;
  /// Throws UnknownEntityError.
  EntityId entity(std::string_view name) const;
  bool contains(EntityId e) const noexcept {
    return index(e) < entity_names_.size();
  }

  const std::string& relation_name(RelationId r) const {
    return relation_names_.at(index(r));
  }
  std::optional<RelationId> find_relation(std::string_view name) const;
  /// Throws PreconditionError.
  RelationId relation(std::string_view name) const;

  /// Neighbors without the existence check; `e` must be valid.
  std::span<const EntityId> neighbors(EntityId e,
                                      DirectedRelation rel) const noexcept {
    const auto& table = adjacency_[rel.slot()];
    const auto begin = table.offsets[index(e)];
    const auto end = table.offsets[index(e) + 1];
    return {table.targets.data() + begin, end - begin};
  }
  std::size_t edge_count(DirectedRelation rel) const {
    return adjacency_.at(rel.slot()).targets.size();
  }
  std::size_t edge_count() const noexcept;

  /// Directly assigned types, sorted.
  std::span<const TypeId> direct_types(EntityId e) const {
    return direct_types_.at(index(e));
  }
  /// Assigned types closed under hierarchy ancestors, sorted.
  std::span<const TypeId> types(EntityId e) const {
    return closed_types_.at(index(e));
  }
  bool has_type(EntityId e, TypeId t) const noexcept;

  /// Entities whose type closure contains `t`, ascending.
  std::vector<EntityId> entities_of_type(TypeId t) const;

  TypeId root_type() const noexcept { return root_; }

 private:
  friend struct GraphBuilder;

  struct Csr {
    std::vector<std::uint32_t> offsets;
    std::vector<EntityId> targets;
  };

  std::vector<std::string> entity_names_;
  std::unordered_map<std::string, EntityId> entity_by_name_;
  std::vector<std::string> relation_names_;
  std::unordered_map<std::string, RelationId> relation_by_name_;
  std::vector<Csr> adjacency_;  // indexed by DirectedRelation::slot()
  std::vector<std::vector<TypeId>> direct_types_;
  std::vector<std::vector<TypeId>> closed_types_;
  TypeId root_{};
};

struct BuiltGraph {
  HinGraph graph;
  TypeHierarchy hierarchy;
};

/// Interns names (sorted, so ids follow name order), deduplicates edges,
/// materializes inverse adjacency and closes type sets over the hierarchy.
/// Entities without an assignment get {Object}. Throws PreconditionError on a
/// hierarchy cycle or an assignment to a type missing from the hierarchy.
BuiltGraph build_graph(
    std::span<const Triple> triples,
    std::span<const TypeAssignment> type_assignments,
    std::span<const std::pair<std::string, std::string>> hierarchy_edges);

/// χ(·|entity; rel). Throws UnknownEntityError if `entity` is not in the
/// graph; an empty span means the entity has no such neighbors.
std::span<const EntityId> out_neighbors(const HinGraph& graph, EntityId entity,
                                        DirectedRelation rel);

/// Type closure of `entity` (always contains the root).
std::vector<TypeId> entity_types(const HinGraph& graph, EntityId entity);

}  // namespace hini
