#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hini/hin_graph.hpp"
#include "hini/types.hpp"

namespace hini {

/// A_1 -R_1-> A_2 ... -R_L-> A_{L+1}. node_types has one more entry than
/// edge_relations. Relations-only paths carry the root type at every node.
struct MetaPath {
  std::vector<TypeId> node_types;
  std::vector<DirectedRelation> edge_relations;

  std::size_t length() const noexcept { return edge_relations.size(); }
  TypeId source_type() const { return node_types.front(); }
  TypeId target_type() const { return node_types.back(); }

  static MetaPath relations_only(std::span<const DirectedRelation> relations,
                                 TypeId root);
  /// Zero-length path at a single type.
  static MetaPath at(TypeId type) { return MetaPath{{type}, {}}; }

  /// Throws PreconditionError if the shape invariant is broken or an id is
  /// out of range for the given graph/hierarchy.
  void validate(const HinGraph& graph, const TypeHierarchy& hierarchy) const;

  /// The reversed path (A_{L+1} -R_L~-> ... -R_1~-> A_1).
  MetaPath reversed() const;

  friend bool operator==(const MetaPath&, const MetaPath&) = default;
};

// String form: `TypeA -rel-> TypeB -rel~-> TypeC`, `~` marking traversal
// against the stored edge direction. Tokens are whitespace-separated.

std::string format_metapath(const MetaPath& path, const HinGraph& graph,
                            const TypeHierarchy& hierarchy);

/// Throws ParseError on malformed text and PreconditionError when a type or
/// relation name is not known to the graph/hierarchy.
MetaPath parse_metapath(std::string_view text, const HinGraph& graph,
                        const TypeHierarchy& hierarchy);

/// `rel1~ rel2` style rendering of a bare relation sequence.
std::string format_relations(std::span<const DirectedRelation> relations,
                             const HinGraph& graph);

}  // namespace hini
