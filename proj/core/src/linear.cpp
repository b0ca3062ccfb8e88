#include "subalign/linear.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "subalign/errors.hpp"

namespace subalign {

namespace {

bool is_constant_column(double mean, double stddev) {
  return stddev <= 1e-12 * std::max(1.0, std::abs(mean));
}

// Flip each column so that its largest-magnitude entry is positive.
void canonicalize_signs(Matrix& basis) {
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < basis.rows(); ++i) {
      const double a = std::abs(basis(i, j));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (basis(arg, j) < 0.0) basis.col(j) *= -1.0;
  }
}

}  // namespace

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw FiniteCheck(std::string(what) + " contains NaN or Inf values");
  }
}

Subspace::Subspace(Matrix basis, double tolerance) : basis_(std::move(basis)) {
  if (basis_.cols() < 1 || basis_.rows() < basis_.cols()) {
    throw DimensionError("subspace basis must be D x d with 1 <= d <= D, got " +
                         std::to_string(basis_.rows()) + " x " +
                         std::to_string(basis_.cols()));
  }
  const Matrix gram = basis_.transpose() * basis_;
  const double defect =
      (gram - Matrix::Identity(basis_.cols(), basis_.cols())).norm();
  if (!(defect <= tolerance)) {
    throw DimensionError("subspace basis is not orthonormal (defect " +
                         std::to_string(defect) + ")");
  }
}

Subspace pca(const Matrix& data, Eigen::Index dim) {
  const Eigen::Index n = data.rows();
  const Eigen::Index d = data.cols();
  if (dim < 1 || dim > std::min(n, d)) {
    throw DimensionError("pca: requested " + std::to_string(dim) +
                         " components from a " + std::to_string(n) + " x " +
                         std::to_string(d) + " matrix");
  }
  require_finite(data, "pca input");

  const Matrix centered = data.rowwise() - data.colwise().mean();
  if ((centered.array() == 0.0).all()) {
    throw DegenerateData("pca: centered data is identically zero");
  }

  Eigen::BDCSVD<Matrix> svd(centered, Eigen::ComputeThinV);
  Matrix basis = svd.matrixV().leftCols(dim);
  canonicalize_signs(basis);
  return Subspace(std::move(basis));
}

double frobenius_norm(const Matrix& m) { return m.norm(); }

ColumnStats column_stats(const Matrix& data) {
  ColumnStats stats;
  const double n = static_cast<double>(data.rows());
  stats.mean = data.colwise().mean().transpose();
  const Matrix centered = data.rowwise() - stats.mean.transpose();
  stats.stddev = (centered.colwise().squaredNorm() / n).cwiseSqrt().transpose();
  return stats;
}

std::pair<Matrix, ColumnStats> standardize(
    const Matrix& data, const std::optional<ColumnStats>& stats) {
  ColumnStats used = stats ? *stats : column_stats(data);
  if (used.mean.size() != data.cols() || used.stddev.size() != data.cols()) {
    throw DimensionError("standardize: stats cover " +
                         std::to_string(used.mean.size()) +
                         " columns, data has " + std::to_string(data.cols()));
  }
  Matrix out = data.rowwise() - used.mean.transpose();
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    if (!is_constant_column(used.mean(j), used.stddev(j))) {
      out.col(j) /= used.stddev(j);
    }
  }
  return {std::move(out), std::move(used)};
}

}  // namespace subalign
