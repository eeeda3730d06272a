#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "hini/hin_graph.hpp"
#include "hini/metapath.hpp"

namespace hini {

/// Sparse probability mass over entities, sorted by entity id. Entries are
/// strictly positive; the total is below one when the walk hits dead ends.
struct WalkDistribution {
  EntityId source{};
  std::vector<std::pair<EntityId, double>> mass;

  double at(EntityId e) const noexcept;
  double total() const noexcept;
};

/// Forward pass of the meta-path constrained random walk. At each step the
/// mass on an entity is split uniformly over its neighbors under the step's
/// relation that carry the next node type; mass on entities with no such
/// neighbor is dropped.
///
/// Throws UnknownEntityError for a missing source and PreconditionError when
/// the source lacks the path's first node type.
WalkDistribution walk_distribution(const HinGraph& graph,
                                   const TypeHierarchy& hierarchy,
                                   EntityId source, const MetaPath& path);

/// f(s, t | path): probability of the constrained walk from s ending at t.
double pcrw_score(const HinGraph& graph, const TypeHierarchy& hierarchy,
                  EntityId source, EntityId target, const MetaPath& path);

/// Advances a distribution by one constrained step. Exposed so callers can
/// chain forward passes (composition) without rebuilding paths.
std::vector<std::pair<EntityId, double>> walk_step(
    const HinGraph& graph, std::span<const std::pair<EntityId, double>> mass,
    DirectedRelation relation, TypeId next_type);

inline constexpr std::size_t kDefaultNnzBudget = 50'000'000;

using CountMatrix = Eigen::SparseMatrix<std::int64_t, Eigen::RowMajor>;

/// Path-instance counts between entities of the first and last node type.
/// Indexed over the whole entity id space; rows/cols list the entities that
/// carry the endpoint types.
struct CommutingMatrix {
  MetaPath path;
  std::vector<EntityId> rows;
  std::vector<EntityId> cols;
  CountMatrix counts;

  std::int64_t at(EntityId row, EntityId col) const;
};

/// Chain product of per-step type-filtered adjacency matrices, generic over
/// the scalar so counts and weighted sums share one implementation. Throws
/// BudgetError when an intermediate product exceeds `nnz_budget` nonzeros.
template <typename Scalar>
Eigen::SparseMatrix<Scalar, Eigen::RowMajor> path_product(
    const HinGraph& graph, const MetaPath& path,
    std::size_t nnz_budget = kDefaultNnzBudget);

CommutingMatrix commuting_matrix(const HinGraph& graph,
                                 const TypeHierarchy& hierarchy,
                                 const MetaPath& path,
                                 std::size_t nnz_budget = kDefaultNnzBudget);

/// Every concrete entity sequence from `source` following the path's
/// relations and node types, in DFS order. Throws BudgetError once more than
/// `cap` instances are found.
std::vector<std::vector<EntityId>> enumerate_path_instances(
    const HinGraph& graph, const TypeHierarchy& hierarchy, EntityId source,
    const MetaPath& path, std::size_t cap = 1'000'000);

/// All relation sequences of length 1..max_len that connect at least one
/// `source_type` entity to at least one `target_type` entity in the graph.
/// Node types are left at the root. Ordered by length, then relation
/// sequence.
std::vector<MetaPath> enumerate_metapaths(const HinGraph& graph,
                                          const TypeHierarchy& hierarchy,
                                          TypeId source_type,
                                          TypeId target_type,
                                          std::size_t max_len);

}  // namespace hini
