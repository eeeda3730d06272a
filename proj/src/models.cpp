#include "hini/models.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <string>

#include "hini/parallel.hpp"
#include "hini/pcrw.hpp"

namespace hini {

namespace {

// log(1 + e^x) without overflow.
double softplus(double x) noexcept {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

void check_labels(std::span<const int> labels, std::size_t expected) {
  if (labels.size() != expected) {
    throw PreconditionError("label count does not match score count");
  }
  bool pos = false;
  bool neg = false;
  for (int l : labels) {
    if (l == 1) {
      pos = true;
    } else if (l == 0) {
      neg = true;
    } else {
      throw PreconditionError("labels must be 0 or 1");
    }
  }
  if (!pos || !neg) {
    throw PreconditionError("both positive and negative labels are required");
  }
}

}  // namespace

double jrw_score(const Eigen::Ref<const Eigen::VectorXd>& scores,
                 const Eigen::Ref<const Eigen::VectorXd>& theta) {
  if (scores.size() != theta.size()) {
    throw PreconditionError("jrw_score: " + std::to_string(scores.size()) +
                            " scores vs " + std::to_string(theta.size()) +
                            " weights");
  }
  return scores.dot(theta);
}

ScoreMatrix build_features(const HinGraph& graph,
                           const TypeHierarchy& hierarchy,
                           std::span<const EntityPair> pairs,
                           std::span<const MetaPath> paths,
                           std::size_t threads) {
  for (const auto& p : pairs) {
    if (!graph.contains(p.source) || !graph.contains(p.target)) {
      throw UnknownEntityError("unknown entity in pair (" +
                               std::to_string(index(p.source)) + ", " +
                               std::to_string(index(p.target)) + ")");
    }
  }
  for (const auto& path : paths) path.validate(graph, hierarchy);

  ScoreMatrix out;
  out.rows.assign(pairs.begin(), pairs.end());
  out.cols.assign(paths.begin(), paths.end());
  out.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(pairs.size()),
                                     static_cast<Eigen::Index>(paths.size()));

  // Row indices grouped by source so each walk is run once.
  std::map<EntityId, std::vector<Eigen::Index>> by_source;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    by_source[pairs[i].source].push_back(static_cast<Eigen::Index>(i));
  }

  // Columns are disjoint across workers.
  parallel_for(paths.size(), threads, [&](std::size_t j) {
    const MetaPath& path = paths[j];
    const auto col = static_cast<Eigen::Index>(j);
    for (const auto& [source, rows] : by_source) {
      if (!graph.has_type(source, path.source_type())) continue;
      const WalkDistribution dist =
          walk_distribution(graph, hierarchy, source, path);
      for (Eigen::Index r : rows) {
        out.values(r, col) = dist.at(pairs[static_cast<std::size_t>(r)].target);
      }
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Logistic regression

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double logreg_objective(const Eigen::MatrixXd& features,
                        const Eigen::VectorXd& labels,
                        const Eigen::VectorXd& weights, double bias,
                        double l2) {
  const Eigen::VectorXd z = (features * weights).array() + bias;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    // r log σ(z) + (1 - r) log(1 - σ(z)) = -r softplus(-z) - (1 - r) softplus(z)
    ll -= labels(i) * softplus(-z(i)) + (1.0 - labels(i)) * softplus(z(i));
  }
  return ll - l2 * weights.squaredNorm();
}

Eigen::VectorXd logreg_gradient(const Eigen::MatrixXd& features,
                                const Eigen::VectorXd& labels,
                                const Eigen::VectorXd& weights, double bias,
                                double l2) {
  const Eigen::VectorXd z = (features * weights).array() + bias;
  const Eigen::VectorXd residual =
      labels - z.unaryExpr([](double v) { return sigmoid(v); });
  Eigen::VectorXd grad(weights.size() + 1);
  grad.head(weights.size()) =
      features.transpose() * residual - 2.0 * l2 * weights;
  grad(weights.size()) = residual.sum();
  return grad;
}

LogRegFit train_logreg(const Eigen::MatrixXd& features,
                       const Eigen::VectorXd& labels,
                       const LogRegConfig& config) {
  if (features.rows() != labels.size()) {
    throw PreconditionError("train_logreg: feature rows do not match labels");
  }
  if (!(config.l2 >= 0.0)) {
    throw PreconditionError("train_logreg: l2 strength must be >= 0");
  }
  if (!features.allFinite()) {
    throw PreconditionError("train_logreg: non-finite feature value");
  }
  std::vector<int> as_int(static_cast<std::size_t>(labels.size()));
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    as_int[static_cast<std::size_t>(i)] =
        labels(i) == 1.0 ? 1 : (labels(i) == 0.0 ? 0 : -1);
  }
  check_labels(as_int, as_int.size());

  const Eigen::Index d = features.cols();
  LogRegFit fit;
  fit.model.l2 = config.l2;
  fit.model.weights = Eigen::VectorXd::Zero(d);
  double objective = logreg_objective(features, labels, fit.model.weights,
                                      fit.model.bias, config.l2);
  fit.objective_trace.push_back(objective);

  constexpr double kArmijo = 1e-4;
  double step = 1.0;
  for (; fit.iterations < config.max_iterations; ++fit.iterations) {
    Eigen::VectorXd grad = logreg_gradient(features, labels, fit.model.weights,
                                           fit.model.bias, config.l2);
    if (!config.fit_bias) grad(d) = 0.0;
    if (grad.lpNorm<Eigen::Infinity>() < config.gradient_tolerance) {
      fit.converged = true;
      break;
    }
    const double slope = grad.squaredNorm();
    step = std::min(step * 2.0, 1e6);
    bool accepted = false;
    while (step > 1e-30) {
      const Eigen::VectorXd w = fit.model.weights + step * grad.head(d);
      const double b = fit.model.bias + step * grad(d);
      const double candidate = logreg_objective(features, labels, w, b, config.l2);
      if (candidate >= objective + kArmijo * step * slope) {
        fit.model.weights = w;
        fit.model.bias = b;
        objective = candidate;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no ascent direction left at double precision
    fit.objective_trace.push_back(objective);
  }
  return fit;
}

Eigen::VectorXd predict(const LogRegModel& model,
                        const Eigen::MatrixXd& features) {
  if (features.cols() != model.weights.size()) {
    throw PreconditionError("predict: " + std::to_string(features.cols()) +
                            " features vs " +
                            std::to_string(model.weights.size()) + " weights");
  }
  const Eigen::VectorXd z = (features * model.weights).array() + model.bias;
  return z.unaryExpr([](double v) { return sigmoid(v); });
}

// ---------------------------------------------------------------------------
// AUC

double auc_exhaustive(std::span<const double> scores,
                      std::span<const int> labels) {
  check_labels(labels, scores.size());
  std::uint64_t wins = 0;
  std::uint64_t ties = 0;
  std::uint64_t n_pos = 0;
  std::uint64_t n_neg = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] == 1) {
      ++n_pos;
    } else {
      ++n_neg;
    }
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      if (scores[i] > scores[j]) {
        ++wins;
      } else if (scores[i] == scores[j]) {
        ++ties;
      }
    }
  }
  return (static_cast<double>(wins) + 0.5 * static_cast<double>(ties)) /
         (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double auc_rank_sum(std::span<const double> scores,
                    std::span<const int> labels) {
  check_labels(labels, scores.size());
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  double n_pos = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    // 1-based ranks i+1..j share their mean.
    const double mean_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) {
        rank_sum += mean_rank;
        n_pos += 1.0;
      }
    }
    i = j;
  }
  const double n_neg = static_cast<double>(scores.size()) - n_pos;
  return (rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

double auc(std::span<const double> scores, std::span<const int> labels) {
  return scores.size() <= 10'000 ? auc_exhaustive(scores, labels)
                                 : auc_rank_sum(scores, labels);
}

// ---------------------------------------------------------------------------
// Model file

std::string format_real(double value) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", value);
  return {buf, static_cast<std::size_t>(n)};
}

double parse_real(std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

void write_model(std::ostream& out, const SavedModel& saved,
                 const HinGraph& graph, const TypeHierarchy& hierarchy) {
  if (static_cast<std::size_t>(saved.model.weights.size()) !=
      saved.paths.size()) {
    throw PreconditionError("model weights do not match its meta-paths");
  }
  out << "# hini-logreg v1\n";
  out << "bias\t" << format_real(saved.model.bias) << '\n';
  out << "l2\t" << format_real(saved.model.l2) << '\n';
  for (std::size_t j = 0; j < saved.paths.size(); ++j) {
    out << "path\t"
        << format_real(saved.model.weights(static_cast<Eigen::Index>(j)))
        << '\t' << format_metapath(saved.paths[j], graph, hierarchy) << '\n';
  }
}

SavedModel read_model(std::istream& in, const HinGraph& graph,
                      const TypeHierarchy& hierarchy) {
  SavedModel saved;
  std::vector<double> weights;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.starts_with('#')) {
      if (line == "# hini-logreg v1") header = true;
      continue;
    }
    const auto where = "model line " + std::to_string(line_no) + ": ";
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(where + "missing field");
    const std::string_view key(line.data(), tab);
    const std::string_view rest(line.data() + tab + 1, line.size() - tab - 1);
    try {
      if (key == "bias") {
        saved.model.bias = parse_real(rest);
      } else if (key == "l2") {
        saved.model.l2 = parse_real(rest);
      } else if (key == "path") {
        const auto tab2 = rest.find('\t');
        if (tab2 == std::string_view::npos) {
          throw ParseError("path line needs a weight and a meta-path");
        }
        weights.push_back(parse_real(rest.substr(0, tab2)));
        saved.paths.push_back(
            parse_metapath(rest.substr(tab2 + 1), graph, hierarchy));
      } else {
        throw ParseError("unknown key '" + std::string(key) + "'");
      }
    } catch (const ParseError& e) {
      throw ParseError(where + e.what());
    }
  }
  if (!header) throw ParseError("model file lacks the '# hini-logreg v1' header");
  saved.model.weights = Eigen::Map<const Eigen::VectorXd>(
      weights.data(), static_cast<Eigen::Index>(weights.size()));
  return saved;
}

}  // namespace hini
