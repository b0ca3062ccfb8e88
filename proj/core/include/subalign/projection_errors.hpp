#ifndef SUBALIGN_PROJECTION_ERRORS_HPP
#define SUBALIGN_PROJECTION_ERRORS_HPP

#include <string>
#include <string_view>

#include "subalign/dataset.hpp"
#include "subalign/linear.hpp"

namespace subalign {

/// How a candidate set of source categories is scored against the target.
enum class ErrorKind {
  SubspaceAlignment,  ///< ||Us - Xt||_F
  Reprojection,       ///< ||T - T Us Us'||_F
};

std::string_view to_string(ErrorKind kind);
/// Accepts "sa" / "reproj" (and the long names); throws Error otherwise.
ErrorKind parse_error_kind(std::string_view text);

/// Scores category subsets of one source dataset against a fixed target.
///
/// Every data matrix that feeds a PCA (the whole target, and the source rows
/// restricted to the subset being scored) is z-scored with its own column
/// stats first. The standardized target and its subspace Xt are computed once
/// at construction. score() is const and safe to call concurrently.
class SubsetScorer {
 public:
  /// Throws InsufficientSamples if the target has fewer than `dim` rows,
  /// DimensionError if `dim` is not in [1, D] or the feature dimensions differ.
  SubsetScorer(Dataset source, const Dataset& target, ErrorKind kind,
               Eigen::Index dim);

  /// Throws UnknownCategory / InsufficientSamples / DegenerateData.
  double score(const CategorySubset& subset) const;

  /// As score(), but subsets with too few samples (or degenerate data) score
  /// +infinity instead of throwing. UnknownCategory still throws.
  double score_or_infinity(const CategorySubset& subset) const;

  /// Source subspace of the subset, after per-subset standardization.
  Subspace source_subspace(const CategorySubset& subset) const;

  const Dataset& source() const noexcept { return source_; }
  const Subspace& target_subspace() const noexcept { return target_subspace_; }
  const Matrix& standardized_target() const noexcept { return target_std_; }
  ErrorKind kind() const noexcept { return kind_; }
  Eigen::Index dim() const noexcept { return dim_; }

 private:
  Dataset source_;
  Matrix target_std_;
  Subspace target_subspace_;
  ErrorKind kind_;
  Eigen::Index dim_;
};

/// ||Us - Xt||_F for the source rows labeled in `subset`.
double subspace_alignment_error(const CategorySubset& subset,
                                const Dataset& source, const Dataset& target,
                                Eigen::Index dim);

/// ||T - (T Us) Us'||_F with T the standardized target data.
double reprojection_error(const CategorySubset& subset, const Dataset& source,
                          const Dataset& target, Eigen::Index dim);

}  // namespace subalign

#endif  // SUBALIGN_PROJECTION_ERRORS_HPP
