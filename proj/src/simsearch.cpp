#include "hini/simsearch.hpp"

#include <algorithm>
#include <string>

#include "hini/parallel.hpp"

namespace hini {

namespace {

void check_comparable(const TypeHierarchy& hierarchy, TypeId a, TypeId b,
                      const char* end) {
  if (hierarchy.is_ancestor_or_self(a, b) ||
      hierarchy.is_ancestor_or_self(b, a)) {
    return;
  }
  throw PreconditionError(std::string("build_index: meta-path ") + end +
                          " types '" + hierarchy.name(a) + "' and '" +
                          hierarchy.name(b) + "' are incompatible");
}

std::vector<EntityId> merge_sorted(std::vector<EntityId> a,
                                   const std::vector<EntityId>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

}  // namespace

Eigen::VectorXd uniform_theta(std::size_t count) {
  if (count == 0) return {};
  return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(count),
                                   1.0 / static_cast<double>(count));
}

SimilarityIndex build_index(const HinGraph& graph,
                            const TypeHierarchy& hierarchy,
                            std::span<const MetaPath> paths,
                            const Eigen::VectorXd& theta, std::size_t threads,
                            std::size_t nnz_budget) {
  if (paths.empty()) throw PreconditionError("build_index: no meta-paths");
  if (static_cast<std::size_t>(theta.size()) != paths.size()) {
    throw PreconditionError("build_index: " + std::to_string(theta.size()) +
                            " weights for " + std::to_string(paths.size()) +
                            " meta-paths");
  }
  for (const auto& p : paths) {
    p.validate(graph, hierarchy);
    check_comparable(hierarchy, paths.front().source_type(), p.source_type(),
                     "source");
    check_comparable(hierarchy, paths.front().target_type(), p.target_type(),
                     "target");
  }

  std::vector<CommutingMatrix> parts(paths.size());
  parallel_for(paths.size(), threads, [&](std::size_t i) {
    parts[i] = commuting_matrix(graph, hierarchy, paths[i], nnz_budget);
  });

  SimilarityIndex index;
  index.paths.assign(paths.begin(), paths.end());
  index.theta = theta;
  const auto n = static_cast<Eigen::Index>(graph.entity_count());
  index.combined = SimilarityMatrix(n, n);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    index.combined += theta(static_cast<Eigen::Index>(i)) *
                      parts[i].counts.cast<double>();
    index.rows = merge_sorted(std::move(index.rows), parts[i].rows);
    index.cols = merge_sorted(std::move(index.cols), parts[i].cols);
  }
  index.combined.prune(0.0);
  index.combined.makeCompressed();
  return index;
}

std::vector<RankedEntity> top_k(const SimilarityIndex& index, EntityId query,
                                std::size_t k) {
  if (!std::binary_search(index.rows.begin(), index.rows.end(), query)) {
    throw PreconditionError("top_k: query entity " +
                            std::to_string(hini::index(query)) +
                            " is not a row of the index");
  }
  std::vector<RankedEntity> ranked;
  for (SimilarityMatrix::InnerIterator it(index.combined, hini::index(query));
       it; ++it) {
    const EntityId e{static_cast<std::uint32_t>(it.col())};
    if (e == query || it.value() == 0.0) continue;
    ranked.push_back({e, it.value()});
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.entity < b.entity;
  });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

}  // namespace hini
