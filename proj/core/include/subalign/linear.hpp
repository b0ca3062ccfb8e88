#ifndef SUBALIGN_LINEAR_HPP
#define SUBALIGN_LINEAR_HPP

#include <cstddef>
#include <optional>
#include <utility>

#include <Eigen/Dense>

namespace subalign {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Throws FiniteCheck if any entry is NaN or infinite.
void require_finite(const Matrix& m, const char* what);

/// Orthonormal D x d basis of a linear subspace of R^D.
///
/// Columns are ordered by decreasing explained variance when built by pca().
/// Within a block of tied eigenvalues the basis is only unique up to rotation.
class Subspace {
 public:
  /// Takes ownership of `basis`; throws DimensionError when the columns are
  /// not orthonormal to within `tolerance` (Frobenius norm of B'B - I).
  explicit Subspace(Matrix basis, double tolerance = 1e-8);

  const Matrix& basis() const noexcept { return basis_; }
  Eigen::Index ambient_dim() const noexcept { return basis_.rows(); }
  Eigen::Index sub_dim() const noexcept { return basis_.cols(); }

 private:
  Matrix basis_;
};

/// Top-`dim` principal directions of the column-centered rows of `data`.
///
/// Computed from the thin SVD of the centered matrix. Each column's
/// largest-magnitude entry is made positive (first such entry on ties), which
/// makes results reproducible run to run.
///
/// Throws DimensionError unless 1 <= dim <= min(N, D), and DegenerateData
/// when the centered matrix is exactly zero.
Subspace pca(const Matrix& data, Eigen::Index dim);

/// sqrt of the sum of squared entries.
double frobenius_norm(const Matrix& m);

/// Per-column mean and standard deviation (population, divisor N).
struct ColumnStats {
  Vector mean;
  Vector stddev;
};

/// Stats used by standardize(). A column whose stddev is below
/// 1e-12 * max(1, |mean|) is treated as constant.
ColumnStats column_stats(const Matrix& data);

/// Z-scores the columns of `data`. With no `stats`, they are computed from
/// `data` itself. Constant columns are centered but not scaled.
std::pair<Matrix, ColumnStats> standardize(
    const Matrix& data, const std::optional<ColumnStats>& stats = std::nullopt);

}  // namespace subalign

#endif  // SUBALIGN_LINEAR_HPP
