#include "hini/pcrw.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace hini {

namespace {

void check_source(const HinGraph& graph, const TypeHierarchy& hierarchy,
                  EntityId source, const MetaPath& path) {
  path.validate(graph, hierarchy);
  if (!graph.contains(source)) {
    throw UnknownEntityError("unknown entity id " +
                             std::to_string(index(source)));
  }
  if (!graph.has_type(source, path.source_type())) {
    throw PreconditionError("entity '" + graph.entity_name(source) +
                            "' does not have type '" +
                            hierarchy.name(path.source_type()) + "'");
  }
}

}  // namespace

double WalkDistribution::at(EntityId e) const noexcept {
  auto it = std::lower_bound(
      mass.begin(), mass.end(), e,
      [](const auto& entry, EntityId key) { return entry.first < key; });
  return (it != mass.end() && it->first == e) ? it->second : 0.0;
}

double WalkDistribution::total() const noexcept {
  double sum = 0.0;
  for (const auto& [e, m] : mass) sum += m;
  return sum;
}

std::vector<std::pair<EntityId, double>> walk_step(
    const HinGraph& graph, std::span<const std::pair<EntityId, double>> mass,
    DirectedRelation relation, TypeId next_type) {
  thread_local std::vector<double> acc;
  thread_local std::vector<EntityId> touched;
  thread_local std::vector<EntityId> qualifying;
  acc.resize(graph.entity_count(), 0.0);
  touched.clear();

  for (const auto& [e, m] : mass) {
    qualifying.clear();
    for (EntityId w : graph.neighbors(e, relation)) {
      if (graph.has_type(w, next_type)) qualifying.push_back(w);
    }
    if (qualifying.empty()) continue;  // dead end: mass dropped
    const double share = m / static_cast<double>(qualifying.size());
    for (EntityId w : qualifying) {
      if (acc[index(w)] == 0.0) touched.push_back(w);
      acc[index(w)] += share;
    }
  }

  std::sort(touched.begin(), touched.end());
  std::vector<std::pair<EntityId, double>> out;
  out.reserve(touched.size());
  for (EntityId w : touched) {
    out.emplace_back(w, acc[index(w)]);
    acc[index(w)] = 0.0;
  }
  return out;
}

WalkDistribution walk_distribution(const HinGraph& graph,
                                   const TypeHierarchy& hierarchy,
                                   EntityId source, const MetaPath& path) {
  check_source(graph, hierarchy, source, path);
  WalkDistribution dist{source, {{source, 1.0}}};
  for (std::size_t i = 0; i < path.length() && !dist.mass.empty(); ++i) {
    dist.mass = walk_step(graph, dist.mass, path.edge_relations[i],
                          path.node_types[i + 1]);
  }
  return dist;
}

double pcrw_score(const HinGraph& graph, const TypeHierarchy& hierarchy,
                  EntityId source, EntityId target, const MetaPath& path) {
  if (!graph.contains(target)) {
    throw UnknownEntityError("unknown entity id " +
                             std::to_string(index(target)));
  }
  return walk_distribution(graph, hierarchy, source, path).at(target);
}

// ---------------------------------------------------------------------------
// Commuting matrices

std::int64_t CommutingMatrix::at(EntityId row, EntityId col) const {
  return counts.coeff(index(row), index(col));
}

template <typename Scalar>
Eigen::SparseMatrix<Scalar, Eigen::RowMajor> path_product(
    const HinGraph& graph, const MetaPath& path, std::size_t nnz_budget) {
  using Matrix = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;
  const auto n = static_cast<Eigen::Index>(graph.entity_count());

  auto step_matrix = [&](std::size_t i) {
    const DirectedRelation rel = path.edge_relations[i];
    const TypeId from = path.node_types[i];
    const TypeId to = path.node_types[i + 1];
    std::vector<Eigen::Triplet<Scalar>> entries;
    for (std::uint32_t u = 0; u < graph.entity_count(); ++u) {
      if (!graph.has_type(EntityId{u}, from)) continue;
      for (EntityId v : graph.neighbors(EntityId{u}, rel)) {
        if (graph.has_type(v, to)) {
          entries.emplace_back(u, index(v), Scalar{1});
        }
      }
    }
    Matrix w(n, n);
    w.setFromTriplets(entries.begin(), entries.end());
    return w;
  };

  if (path.length() == 0) {
    std::vector<Eigen::Triplet<Scalar>> diag;
    for (EntityId e : graph.entities_of_type(path.source_type())) {
      diag.emplace_back(index(e), index(e), Scalar{1});
    }
    Matrix id(n, n);
    id.setFromTriplets(diag.begin(), diag.end());
    return id;
  }

  Matrix product = step_matrix(0);
  for (std::size_t i = 1; i < path.length(); ++i) {
    Matrix next = product * step_matrix(i);
    product = std::move(next);
    if (static_cast<std::size_t>(product.nonZeros()) > nnz_budget) {
      throw BudgetError("commuting matrix exceeds nnz budget of " +
                        std::to_string(nnz_budget) + " after step " +
                        std::to_string(i + 1));
    }
  }
  product.makeCompressed();
  return product;
}

template Eigen::SparseMatrix<std::int64_t, Eigen::RowMajor>
path_product<std::int64_t>(const HinGraph&, const MetaPath&, std::size_t);
template Eigen::SparseMatrix<double, Eigen::RowMajor> path_product<double>(
    const HinGraph&, const MetaPath&, std::size_t);

CommutingMatrix commuting_matrix(const HinGraph& graph,
                                 const TypeHierarchy& hierarchy,
                                 const MetaPath& path,
                                 std::size_t nnz_budget) {
  path.validate(graph, hierarchy);
  CommutingMatrix m;
  m.path = path;
  m.rows = graph.entities_of_type(path.source_type());
  m.cols = graph.entities_of_type(path.target_type());
  m.counts = path_product<std::int64_t>(graph, path, nnz_budget);
  return m;
}

// ---------------------------------------------------------------------------
// Brute-force enumeration

std::vector<std::vector<EntityId>> enumerate_path_instances(
    const HinGraph& graph, const TypeHierarchy& hierarchy, EntityId source,
    const MetaPath& path, std::size_t cap) {
  path.validate(graph, hierarchy);
  if (!graph.contains(source)) {
    throw UnknownEntityError("unknown entity id " +
                             std::to_string(index(source)));
  }
  std::vector<std::vector<EntityId>> out;
  if (!graph.has_type(source, path.source_type())) return out;

  std::vector<EntityId> prefix{source};
  auto dfs = [&](auto&& self, std::size_t step) -> void {
    if (step == path.length()) {
      if (out.size() == cap) {
        throw BudgetError("path instance enumeration exceeded cap of " +
                          std::to_string(cap));
      }
      out.push_back(prefix);
      return;
    }
    for (EntityId w : graph.neighbors(prefix.back(), path.edge_relations[step])) {
      if (!graph.has_type(w, path.node_types[step + 1])) continue;
      prefix.push_back(w);
      self(self, step + 1);
      prefix.pop_back();
    }
  };
  dfs(dfs, 0);
  return out;
}

std::vector<MetaPath> enumerate_metapaths(const HinGraph& graph,
                                          const TypeHierarchy& hierarchy,
                                          TypeId source_type,
                                          TypeId target_type,
                                          std::size_t max_len) {
  if (!hierarchy.contains(source_type) || !hierarchy.contains(target_type)) {
    throw PreconditionError("enumerate_metapaths: unknown type id");
  }
  std::vector<MetaPath> out;
  if (max_len == 0) return out;

  const std::size_t slots = 2 * graph.relation_count();
  std::vector<std::uint32_t> stamp(graph.entity_count(), 0);
  std::uint32_t epoch = 0;
  std::vector<DirectedRelation> sequence;

  // Depth-first over relation sequences; each level holds the set of
  // entities reachable from any source-type entity along the sequence.
  auto descend = [&](auto&& self, const std::vector<EntityId>& frontier) -> void {
    for (std::uint32_t slot = 0; slot < slots; ++slot) {
      const auto rel = DirectedRelation::from_slot(slot);
      ++epoch;
      std::vector<EntityId> next;
      for (EntityId e : frontier) {
        for (EntityId w : graph.neighbors(e, rel)) {
          if (stamp[index(w)] != epoch) {
            stamp[index(w)] = epoch;
            next.push_back(w);
          }
        }
      }
      if (next.empty()) continue;
      sequence.push_back(rel);
      if (std::any_of(next.begin(), next.end(), [&](EntityId w) {
            return graph.has_type(w, target_type);
          })) {
        out.push_back(MetaPath::relations_only(sequence, hierarchy.root()));
      }
      if (sequence.size() < max_len) self(self, next);
      sequence.pop_back();
    }
  };
  descend(descend, graph.entities_of_type(source_type));

  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.length() != b.length()) return a.length() < b.length();
    return a.edge_relations < b.edge_relations;
  });
  return out;
}

}  // namespace hini
