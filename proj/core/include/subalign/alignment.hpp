#ifndef SUBALIGN_ALIGNMENT_HPP
#define SUBALIGN_ALIGNMENT_HPP

#include "subalign/linear.hpp"

namespace subalign {

/// Result of aligning a source subspace Xs onto a target subspace Xt.
///
/// The alignment transform M* = Xs' Xt is the closed-form minimizer of
/// ||Xs M - Xt||_F^2 over all d x d matrices M. The target-aligned source
/// basis is Us = Xs M*.
class AlignedModel {
 public:
  AlignedModel(Subspace source, Subspace target);

  const Subspace& source_subspace() const noexcept { return source_; }
  const Subspace& target_subspace() const noexcept { return target_; }
  const Matrix& m_star() const noexcept { return m_star_; }
  const Matrix& u_s() const noexcept { return u_s_; }

  /// Materializes the D x D similarity kernel A = Xs M* Xt'.
  Matrix a_kernel() const;

  /// ||Us - Xt||_F.
  double alignment_residual() const;

 private:
  Subspace source_;
  Subspace target_;
  Matrix m_star_;
  Matrix u_s_;
};

/// Throws DimensionError if the subspaces differ in ambient or sub dimension.
AlignedModel align(const Subspace& xs, const Subspace& xt);

/// F(M) = ||Xs M - Xt||_F^2 for an arbitrary d x d matrix M.
double alignment_objective(const Subspace& xs, const Subspace& xt,
                           const Matrix& m);

/// ys' A yt, evaluated as (ys' Xs) M* (Xt' yt) without forming A.
double similarity(const Vector& ys, const Vector& yt,
                  const AlignedModel& model);

/// Source rows in the aligned space: data * Us (N x d).
Matrix project_source(const Matrix& data, const AlignedModel& model);

/// Target rows in target-subspace coordinates: data * Xt (N x d).
Matrix project_target(const Matrix& data, const Subspace& xt);

}  // namespace subalign

#endif  // SUBALIGN_ALIGNMENT_HPP
