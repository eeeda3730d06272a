#include "hini/metapath.hpp"

#include <sstream>

namespace hini {

MetaPath MetaPath::relations_only(std::span<const DirectedRelation> relations,
                                  TypeId root) {
  MetaPath p;
  p.edge_relations.assign(relations.begin(), relations.end());
  p.node_types.assign(relations.size() + 1, root);
  return p;
}

void MetaPath::validate(const HinGraph& graph,
                        const TypeHierarchy& hierarchy) const {
  if (node_types.size() != edge_relations.size() + 1) {
    throw PreconditionError("meta-path must have exactly one more node type "
                            "than relations");
  }
  for (TypeId t : node_types) {
    if (!hierarchy.contains(t)) {
      throw PreconditionError("meta-path references unknown type id " +
                              std::to_string(index(t)));
    }
  }
  for (const auto& r : edge_relations) {
    if (index(r.relation) >= graph.relation_count()) {
      throw PreconditionError("meta-path references unknown relation id " +
                              std::to_string(index(r.relation)));
    }
  }
}

MetaPath MetaPath::reversed() const {
  MetaPath out;
  out.node_types.assign(node_types.rbegin(), node_types.rend());
  for (auto it = edge_relations.rbegin(); it != edge_relations.rend(); ++it) {
    out.edge_relations.push_back(it->inverse());
  }
  return out;
}

std::string format_metapath(const MetaPath& path, const HinGraph& graph,
                            const TypeHierarchy& hierarchy) {
  std::string out = hierarchy.name(path.node_types.at(0));
  for (std::size_t i = 0; i < path.length(); ++i) {
    const auto& r = path.edge_relations[i];
    out += " -";
    out += graph.relation_name(r.relation);
    if (r.inverted) out += '~';
    out += "-> ";
    out += hierarchy.name(path.node_types.at(i + 1));
  }
  return out;
}

MetaPath parse_metapath(std::string_view text, const HinGraph& graph,
                        const TypeHierarchy& hierarchy) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> tokens;
  for (std::string tok; in >> tok;) tokens.push_back(std::move(tok));
  if (tokens.empty() || tokens.size() % 2 == 0) {
    throw ParseError("meta-path '" + std::string(text) +
                     "': expected `Type (-rel-> Type)*`");
  }
  MetaPath path;
  path.node_types.push_back(hierarchy.id(tokens[0]));
  for (std::size_t i = 1; i < tokens.size(); i += 2) {
    std::string_view arrow = tokens[i];
    if (arrow.size() < 4 || arrow.front() != '-' || !arrow.ends_with("->")) {
      throw ParseError("meta-path '" + std::string(text) +
                       "': malformed relation token '" + tokens[i] + "'");
    }
    arrow.remove_prefix(1);
    arrow.remove_suffix(2);
    bool inverted = false;
    if (arrow.ends_with('~')) {
      inverted = true;
      arrow.remove_suffix(1);
    }
    if (arrow.empty()) {
      throw ParseError("meta-path '" + std::string(text) +
                       "': empty relation name");
    }
    path.edge_relations.push_back({graph.relation(arrow), inverted});
    path.node_types.push_back(hierarchy.id(tokens[i + 1]));
  }
  return path;
}

std::string format_relations(std::span<const DirectedRelation> relations,
                             const HinGraph& graph) {
  std::string out;
  for (const auto& r : relations) {
    if (!out.empty()) out += ' ';
    out += graph.relation_name(r.relation);
    if (r.inverted) out += '~';
  }
  return out;
}

}  // namespace hini
