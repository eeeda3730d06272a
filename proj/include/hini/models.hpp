#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hini/hin_graph.hpp"
#include "hini/metapath.hpp"

namespace hini {

/// Pairs x meta-paths matrix of walk scores f(s_i, t_i | P_j).
struct ScoreMatrix {
  std::vector<EntityPair> rows;
  std::vector<MetaPath> cols;
  Eigen::MatrixXd values;
};

/// Σ_i θ_i · scores_i. Throws PreconditionError on a size mismatch.
double jrw_score(const Eigen::Ref<const Eigen::VectorXd>& scores,
                 const Eigen::Ref<const Eigen::VectorXd>& theta);

/// x_ij = f(s_i, t_i | P_j). One walk is run per (distinct source, path) and
/// shared by all pairs with that source. A source lacking the path's first
/// type scores 0. Throws UnknownEntityError naming the offending pair.
ScoreMatrix build_features(const HinGraph& graph,
                           const TypeHierarchy& hierarchy,
                           std::span<const EntityPair> pairs,
                           std::span<const MetaPath> paths,
                           std::size_t threads = 1);

struct LogRegConfig {
  double l2 = 0.01;
  bool fit_bias = true;
  double gradient_tolerance = 1e-8;
  std::size_t max_iterations = 10'000;
};

struct LogRegModel {
  Eigen::VectorXd weights;
  double bias = 0.0;
  double l2 = 0.01;
};

struct LogRegFit {
  LogRegModel model;
  std::size_t iterations = 0;
  bool converged = false;
  /// Objective after each accepted step, starting with the initial point.
  std::vector<double> objective_trace;
};

/// Σ_i [r_i log p_i + (1 - r_i) log(1 - p_i)] - l2 ‖w‖², bias unpenalized.
double logreg_objective(const Eigen::MatrixXd& features,
                        const Eigen::VectorXd& labels,
                        const Eigen::VectorXd& weights, double bias,
                        double l2);

/// Gradient of logreg_objective; the last entry is d/d(bias).
Eigen::VectorXd logreg_gradient(const Eigen::MatrixXd& features,
                                const Eigen::VectorXd& labels,
                                const Eigen::VectorXd& weights, double bias,
                                double l2);

/// Full-batch gradient ascent with backtracking (Armijo) line search from
/// zero. Deterministic. Throws PreconditionError on single-class labels,
/// non-finite features, negative l2 or a size mismatch.
LogRegFit train_logreg(const Eigen::MatrixXd& features,
                       const Eigen::VectorXd& labels,
                       const LogRegConfig& config = {});

/// Numerically stable logistic function.
double sigmoid(double z) noexcept;

Eigen::VectorXd predict(const LogRegModel& model,
                        const Eigen::MatrixXd& features);

/// Probability that a random positive outranks a random negative, ties
/// counting one half. Exhaustive pair counting up to 10^4 points, rank sums
/// above. Throws PreconditionError unless both classes are present.
double auc(std::span<const double> scores, std::span<const int> labels);
double auc_rank_sum(std::span<const double> scores,
                    std::span<const int> labels);
double auc_exhaustive(std::span<const double> scores,
                      std::span<const int> labels);

// Model file:
//   # hini-logreg v1
//   bias<TAB>value
//   l2<TAB>value
//   path<TAB>weight<TAB>meta-path string
// Reals are written with 17 significant digits, so a read-back is
// bit-identical.

struct SavedModel {
  LogRegModel model;
  std::vector<MetaPath> paths;
};

void write_model(std::ostream& out, const SavedModel& saved,
                 const HinGraph& graph, const TypeHierarchy& hierarchy);
SavedModel read_model(std::istream& in, const HinGraph& graph,
                      const TypeHierarchy& hierarchy);

/// %.17g rendering used by every text output.
std::string format_real(double value);
/// Strict parse of a real; throws ParseError.
double parse_real(std::string_view text);

}  // namespace hini
