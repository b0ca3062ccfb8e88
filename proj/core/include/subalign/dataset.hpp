#ifndef SUBALIGN_DATASET_HPP
#define SUBALIGN_DATASET_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "subalign/linear.hpp"

namespace subalign {

using CategoryId = std::uint32_t;

/// Labeled feature matrix: one row per sample, one label per row, and a
/// display name for every label that occurs.
class Dataset {
 public:
  Dataset() = default;

  /// Throws LengthMismatch if labels.size() != features.rows(), UnknownCategory
  /// if a label has no entry in `names`, FiniteCheck on NaN/Inf features.
  Dataset(Matrix features, std::vector<CategoryId> labels,
          std::map<CategoryId, std::string> names);

  const Matrix& features() const noexcept { return features_; }
  const std::vector<CategoryId>& labels() const noexcept { return labels_; }
  const std::map<CategoryId, std::string>& names() const noexcept {
    return names_;
  }

  Eigen::Index size() const noexcept { return features_.rows(); }
  Eigen::Index dim() const noexcept { return features_.cols(); }
  bool empty() const noexcept { return features_.rows() == 0; }

  /// Distinct labels present in the rows, ascending.
  std::vector<CategoryId> label_set() const;

  /// Display name for `id`, or its decimal form when unnamed.
  std::string name_of(CategoryId id) const;

 private:
  Matrix features_;
  std::vector<CategoryId> labels_;
  std::map<CategoryId, std::string> names_;
};

/// Ordered set of category identifiers. Order is kept for reporting (the
/// order categories were selected in); scoring uses set semantics.
class CategorySubset {
 public:
  CategorySubset() = default;
  /// Throws Error on duplicate identifiers.
  explicit CategorySubset(std::vector<CategoryId> labels);

  const std::vector<CategoryId>& labels() const noexcept { return labels_; }
  std::vector<CategoryId> sorted() const;
  bool contains(CategoryId id) const;
  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }

  friend bool operator==(const CategorySubset&, const CategorySubset&) = default;

 private:
  std::vector<CategoryId> labels_;
};

/// Row indices of `data` whose label is in `subset`, in original row order.
/// Throws UnknownCategory when a subset label does not occur in `data`.
std::vector<Eigen::Index> rows_in(const Dataset& data,
                                  const CategorySubset& subset);

/// The rows of `data` whose label is in `subset`.
Dataset restrict_to(const Dataset& data, const CategorySubset& subset);

/// Renumbers `other`'s labels so that names shared with `reference` get the
/// reference identifier; names unknown to `reference` get fresh identifiers
/// above the reference's largest one, in first-appearance order.
Dataset align_label_ids(const Dataset& reference, const Dataset& other);
Dataset align_label_ids(const std::map<CategoryId, std::string>& reference,
                        const Dataset& other);

}  // namespace subalign

#endif  // SUBALIGN_DATASET_HPP
