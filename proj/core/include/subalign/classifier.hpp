#ifndef SUBALIGN_CLASSIFIER_HPP
#define SUBALIGN_CLASSIFIER_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "subalign/alignment.hpp"
#include "subalign/dataset.hpp"
#include "subalign/linear.hpp"

namespace subalign {

/// Pegasos hyperparameters for the one-vs-rest linear SVM.
struct ClassifierConfig {
  double lambda = 1e-4;
  std::size_t epochs = 50;
  std::uint64_t seed = 42;
};

/// One-vs-rest linear classifier living in the target-aligned subspace.
///
/// Source rows are mapped with Us after z-scoring with the training-source
/// stats; target rows are mapped with Xt after z-scoring with the target
/// stats. Both stats are stored so a loaded model predicts identically.
class AdaptedClassifier {
 public:
  AdaptedClassifier(AlignedModel model, std::vector<CategoryId> classes,
                    Matrix weights, Vector biases, ColumnStats source_stats,
                    ColumnStats target_stats,
                    std::map<CategoryId, std::string> names);

  const AlignedModel& model() const noexcept { return model_; }
  /// C_train, ascending.
  const std::vector<CategoryId>& classes() const noexcept { return classes_; }
  /// classes x d.
  const Matrix& weights() const noexcept { return weights_; }
  const Vector& biases() const noexcept { return biases_; }
  const ColumnStats& source_stats() const noexcept { return source_stats_; }
  const ColumnStats& target_stats() const noexcept { return target_stats_; }
  const std::map<CategoryId, std::string>& names() const noexcept {
    return names_;
  }
  Eigen::Index dim() const noexcept { return weights_.cols(); }
  Eigen::Index feature_dim() const noexcept {
    return model_.u_s().rows();
  }

  /// Argmax class for each row of already-projected (N x d) coordinates.
  /// Ties go to the smaller identifier.
  std::vector<CategoryId> predict_aligned(const Matrix& coords) const;

  /// Source rows mapped into the aligned space the weights were fit in.
  Matrix align_source(const Matrix& features) const;
  /// Target rows mapped into Xt coordinates.
  Matrix align_target(const Matrix& features) const;

 private:
  AlignedModel model_;
  std::vector<CategoryId> classes_;
  Matrix weights_;
  Vector biases_;
  ColumnStats source_stats_;
  ColumnStats target_stats_;
  std::map<CategoryId, std::string> names_;
};

/// Fits the classifier on the source rows labeled in `c_train`.
/// Throws UnknownCategory / InsufficientSamples.
AdaptedClassifier train(const Dataset& source, const CategorySubset& c_train,
                        const Dataset& target, Eigen::Index dim,
                        const ClassifierConfig& config = {});

/// Throws DimensionError if the feature dimension does not match.
std::vector<CategoryId> predict(const AdaptedClassifier& clf,
                                const Matrix& target_features);
std::vector<CategoryId> predict(const AdaptedClassifier& clf,
                                const Dataset& target);

/// Fraction of positions where the two lists agree. Throws LengthMismatch.
/// An empty pair of lists has accuracy 1.
double evaluate(const std::vector<CategoryId>& predictions,
                const std::vector<CategoryId>& ground_truth);

}  // namespace subalign

#endif  // SUBALIGN_CLASSIFIER_HPP
