#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "hini/hin_graph.hpp"
#include "hini/metapath.hpp"
#include "hini/pcrw.hpp"

namespace hini {

using SimilarityMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// M = Σ_i θ_i M_{P_i} over the whole entity id space.
struct SimilarityIndex {
  std::vector<MetaPath> paths;
  Eigen::VectorXd theta;
  std::vector<EntityId> rows;  // union of the components' row entities
  std::vector<EntityId> cols;
  SimilarityMatrix combined;
};

Eigen::VectorXd uniform_theta(std::size_t count);

/// Throws PreconditionError on an empty path list, a θ size mismatch, or
/// endpoint types that are not ancestor-comparable across paths.
SimilarityIndex build_index(const HinGraph& graph,
                            const TypeHierarchy& hierarchy,
                            std::span<const MetaPath> paths,
                            const Eigen::VectorXd& theta,
                            std::size_t threads = 1,
                            std::size_t nnz_budget = kDefaultNnzBudget);

struct RankedEntity {
  EntityId entity{};
  double score = 0.0;

  friend bool operator==(const RankedEntity&, const RankedEntity&) = default;
};

/// Nonzero entries of the query's row, query excluded, by descending score
/// then ascending id, truncated to k. Throws PreconditionError if the query
/// is not a row entity.
std::vector<RankedEntity> top_k(const SimilarityIndex& index, EntityId query,
                                std::size_t k);

}  // namespace hini
