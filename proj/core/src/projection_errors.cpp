#include "subalign/projection_errors.hpp"

#include <limits>

#include "subalign/errors.hpp"

namespace subalign {

namespace {

Subspace target_basis(const Matrix& target_std, Eigen::Index dim) {
  if (target_std.rows() < dim) {
    throw InsufficientSamples("target has " + std::to_string(target_std.rows()) +
                              " samples, subspace dimension is " +
                              std::to_string(dim));
  }
  return pca(target_std, dim);
}

}  // namespace

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SubspaceAlignment:
      return "sa";
    case ErrorKind::Reprojection:
      return "reproj";
  }
  return "unknown";
}

ErrorKind parse_error_kind(std::string_view text) {
  if (text == "sa" || text == "subspace-alignment") {
    return ErrorKind::SubspaceAlignment;
  }
  if (text == "reproj" || text == "reprojection") return ErrorKind::Reprojection;
  throw Error("unknown error kind '" + std::string(text) +
              "' (expected reproj or sa)");
}

SubsetScorer::SubsetScorer(Dataset source, const Dataset& target,
                           ErrorKind kind, Eigen::Index dim)
    : source_(std::move(source)),
      target_std_(standardize(target.features()).first),
      target_subspace_(target_basis(target_std_, dim)),
      kind_(kind),
      dim_(dim) {
  if (source_.dim() != target.dim()) {
    throw DimensionError("source has " + std::to_string(source_.dim()) +
                         " features, target has " +
                         std::to_string(target.dim()));
  }
}

Subspace SubsetScorer::source_subspace(const CategorySubset& subset) const {
  if (subset.empty()) throw Error("cannot score an empty category subset");
  const std::vector<Eigen::Index> rows = rows_in(source_, subset);
  if (static_cast<Eigen::Index>(rows.size()) < dim_) {
    throw InsufficientSamples("category subset has " +
                              std::to_string(rows.size()) +
                              " source samples, subspace dimension is " +
                              std::to_string(dim_));
  }
  const Matrix restricted = source_.features()(rows, Eigen::all);
  return pca(standardize(restricted).first, dim_);
}

double SubsetScorer::score(const CategorySubset& subset) const {
  const Subspace xs = source_subspace(subset);
  const Matrix& xt = target_subspace_.basis();
  const Matrix us = xs.basis() * (xs.basis().transpose() * xt);
  switch (kind_) {
    case ErrorKind::SubspaceAlignment:
      return frobenius_norm(us - xt);
    case ErrorKind::Reprojection:
      return frobenius_norm(target_std_ - (target_std_ * us) * us.transpose());
  }
  return std::numeric_limits<double>::infinity();
}

double SubsetScorer::score_or_infinity(const CategorySubset& subset) const {
  try {
    return score(subset);
  } catch (const InsufficientSamples&) {
    return std::numeric_limits<double>::infinity();
  } catch (const DegenerateData&) {
    return std::numeric_limits<double>::infinity();
  }
}

double subspace_alignment_error(const CategorySubset& subset,
                                const Dataset& source, const Dataset& target,
                                Eigen::Index dim) {
  return SubsetScorer(source, target, ErrorKind::SubspaceAlignment, dim)
      .score(subset);
}

double reprojection_error(const CategorySubset& subset, const Dataset& source,
                          const Dataset& target, Eigen::Index dim) {
  return SubsetScorer(source, target, ErrorKind::Reprojection, dim)
      .score(subset);
}

}  // namespace subalign
