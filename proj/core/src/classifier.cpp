#include "subalign/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "subalign/errors.hpp"

namespace subalign {

namespace {

struct LinearOvr {
  Matrix weights;
  Vector biases;
};

// Pegasos stochastic subgradient descent on the L2-regularized hinge loss,
// one binary problem per class, sharing the sample order. The bias is an
// extra (regularized) coordinate with constant input 1.
LinearOvr fit_pegasos(const Matrix& x, const std::vector<std::size_t>& y,
                      std::size_t num_classes, const ClassifierConfig& config) {
  if (!(config.lambda > 0.0)) throw Error("classifier lambda must be > 0");
  const Eigen::Index c = static_cast<Eigen::Index>(num_classes);
  LinearOvr fit{Matrix::Zero(c, x.cols()), Vector::Zero(c)};
  const double radius = 1.0 / std::sqrt(config.lambda);

  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(static_cast<std::size_t>(x.rows()));
  std::iota(order.begin(), order.end(), 0);

  double t = 0.0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i : order) {
      t += 1.0;
      const double eta = 1.0 / (config.lambda * t);
      const double shrink = 1.0 - eta * config.lambda;
      const auto row = x.row(static_cast<Eigen::Index>(i));
      const Vector raw = fit.weights * row.transpose() + fit.biases;
      for (Eigen::Index k = 0; k < c; ++k) {
        const double sign =
            y[i] == static_cast<std::size_t>(k) ? 1.0 : -1.0;
        fit.weights.row(k) *= shrink;
        fit.biases(k) *= shrink;
        if (sign * raw(k) < 1.0) {
          fit.weights.row(k) += eta * sign * row;
          fit.biases(k) += eta * sign;
        }
        const double norm = std::sqrt(fit.weights.row(k).squaredNorm() +
                                      fit.biases(k) * fit.biases(k));
        if (norm > radius) {
          fit.weights.row(k) *= radius / norm;
          fit.biases(k) *= radius / norm;
        }
      }
    }
  }
  return fit;
}

}  // namespace

AdaptedClassifier::AdaptedClassifier(AlignedModel model,
                                     std::vector<CategoryId> classes,
                                     Matrix weights, Vector biases,
                                     ColumnStats source_stats,
                                     ColumnStats target_stats,
                                     std::map<CategoryId, std::string> names)
    : model_(std::move(model)),
      classes_(std::move(classes)),
      weights_(std::move(weights)),
      biases_(std::move(biases)),
      source_stats_(std::move(source_stats)),
      target_stats_(std::move(target_stats)),
      names_(std::move(names)) {
  const auto n = static_cast<Eigen::Index>(classes_.size());
  if (n < 1 || weights_.rows() != n || biases_.size() != n ||
      weights_.cols() != model_.u_s().cols()) {
    throw DimensionError("classifier weights do not match its class list");
  }
  if (!std::is_sorted(classes_.begin(), classes_.end())) {
    throw Error("classifier classes must be ascending");
  }
  const Eigen::Index d = feature_dim();
  if (source_stats_.mean.size() != d || source_stats_.stddev.size() != d ||
      target_stats_.mean.size() != d || target_stats_.stddev.size() != d) {
    throw DimensionError("classifier standardization stats do not match D");
  }
}

std::vector<CategoryId> AdaptedClassifier::predict_aligned(
    const Matrix& coords) const {
  if (coords.cols() != dim()) {
    throw DimensionError("predict: expected " + std::to_string(dim()) +
                         "-dimensional coordinates");
  }
  const Matrix scores =
      (coords * weights_.transpose()).rowwise() + biases_.transpose();
  std::vector<CategoryId> out;
  out.reserve(static_cast<std::size_t>(coords.rows()));
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < scores.cols(); ++k) {
      if (scores(i, k) > scores(i, best)) best = k;
    }
    out.push_back(classes_[static_cast<std::size_t>(best)]);
  }
  return out;
}

Matrix AdaptedClassifier::align_source(const Matrix& features) const {
  if (features.cols() != feature_dim()) {
    throw DimensionError("source features have " +
                         std::to_string(features.cols()) + " columns, model expects " +
                         std::to_string(feature_dim()));
  }
  return project_source(standardize(features, source_stats_).first, model_);
}

Matrix AdaptedClassifier::align_target(const Matrix& features) const {
  if (features.cols() != feature_dim()) {
    throw DimensionError("target features have " +
                         std::to_string(features.cols()) + " columns, model expects " +
                         std::to_string(feature_dim()));
  }
  return project_target(standardize(features, target_stats_).first,
                        model_.target_subspace());
}

AdaptedClassifier train(const Dataset& source, const CategorySubset& c_train,
                        const Dataset& target, Eigen::Index dim,
                        const ClassifierConfig& config) {
  if (c_train.empty()) throw Error("train: C_train is empty");
  if (source.dim() != target.dim()) {
    throw DimensionError("train: source and target feature dimensions differ");
  }
  const Dataset restricted = restrict_to(source, c_train);
  if (restricted.size() < dim) {
    throw InsufficientSamples("train: C_train has " +
                              std::to_string(restricted.size()) +
                              " source samples, subspace dimension is " +
                              std::to_string(dim));
  }
  if (target.size() < dim) {
    throw InsufficientSamples("train: target has " +
                              std::to_string(target.size()) +
                              " samples, subspace dimension is " +
                              std::to_string(dim));
  }

  auto [source_std, source_stats] = standardize(restricted.features());
  auto [target_std, target_stats] = standardize(target.features());
  AlignedModel model(pca(source_std, dim), pca(target_std, dim));
  const Matrix coords = project_source(source_std, model);

  const std::vector<CategoryId> classes = c_train.sorted();
  std::vector<std::size_t> class_index;
  class_index.reserve(restricted.labels().size());
  for (CategoryId label : restricted.labels()) {
    class_index.push_back(static_cast<std::size_t>(
        std::lower_bound(classes.begin(), classes.end(), label) -
        classes.begin()));
  }
  LinearOvr fit = fit_pegasos(coords, class_index, classes.size(), config);

  std::map<CategoryId, std::string> names;
  for (CategoryId id : classes) names.emplace(id, source.name_of(id));
  return AdaptedClassifier(std::move(model), classes, std::move(fit.weights),
                           std::move(fit.biases), std::move(source_stats),
                           std::move(target_stats), std::move(names));
}

std::vector<CategoryId> predict(const AdaptedClassifier& clf,
                                const Matrix& target_features) {
  if (target_features.rows() == 0) {
    if (target_features.cols() != 0 &&
        target_features.cols() != clf.feature_dim()) {
      throw DimensionError("predict: feature dimension mismatch");
    }
    return {};
  }
  return clf.predict_aligned(clf.align_target(target_features));
}

std::vector<CategoryId> predict(const AdaptedClassifier& clf,
                                const Dataset& target) {
  return predict(clf, target.features());
}

double evaluate(const std::vector<CategoryId>& predictions,
                const std::vector<CategoryId>& ground_truth) {
  if (predictions.size() != ground_truth.size()) {
    throw LengthMismatch("evaluate: " + std::to_string(predictions.size()) +
                         " predictions for " +
                         std::to_string(ground_truth.size()) + " labels");
  }
  if (predictions.empty()) return 1.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i] == ground_truth[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

}  // namespace subalign
