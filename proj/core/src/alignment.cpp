#include "subalign/alignment.hpp"

#include <string>

#include "subalign/errors.hpp"

namespace subalign {

namespace {

void check_compatible(const Subspace& xs, const Subspace& xt) {
  if (xs.ambient_dim() != xt.ambient_dim() || xs.sub_dim() != xt.sub_dim()) {
    throw DimensionError(
        "align: source subspace is " + std::to_string(xs.ambient_dim()) +
        " x " + std::to_string(xs.sub_dim()) + ", target subspace is " +
        std::to_string(xt.ambient_dim()) + " x " +
        std::to_string(xt.sub_dim()));
  }
}

void check_columns(const Matrix& data, Eigen::Index d, const char* what) {
  if (data.cols() != d) {
    throw DimensionError(std::string(what) + ": data has " +
                         std::to_string(data.cols()) +
                         " columns, subspace ambient dimension is " +
                         std::to_string(d));
  }
}

}  // namespace

AlignedModel::AlignedModel(Subspace source, Subspace target)
    : source_(std::move(source)), target_(std::move(target)) {
  check_compatible(source_, target_);
  m_star_ = source_.basis().transpose() * target_.basis();
  u_s_ = source_.basis() * m_star_;
}

Matrix AlignedModel::a_kernel() const {
  return u_s_ * target_.basis().transpose();
}

double AlignedModel::alignment_residual() const {
  return frobenius_norm(u_s_ - target_.basis());
}

AlignedModel align(const Subspace& xs, const Subspace& xt) {
  return AlignedModel(xs, xt);
}

double alignment_objective(const Subspace& xs, const Subspace& xt,
                           const Matrix& m) {
  check_compatible(xs, xt);
  if (m.rows() != xs.sub_dim() || m.cols() != xt.sub_dim()) {
    throw DimensionError("alignment_objective: M must be d x d");
  }
  return (xs.basis() * m - xt.basis()).squaredNorm();
}

double similarity(const Vector& ys, const Vector& yt,
                  const AlignedModel& model) {
  const Eigen::Index d = model.source_subspace().ambient_dim();
  if (ys.size() != d || yt.size() != d) {
    throw DimensionError("similarity: vectors must have length " +
                         std::to_string(d));
  }
  const Vector left = model.source_subspace().basis().transpose() * ys;
  const Vector right = model.target_subspace().basis().transpose() * yt;
  return left.dot(model.m_star() * right);
}

Matrix project_source(const Matrix& data, const AlignedModel& model) {
  check_columns(data, model.u_s().rows(), "project_source");
  return data * model.u_s();
}

Matrix project_target(const Matrix& data, const Subspace& xt) {
  check_columns(data, xt.ambient_dim(), "project_target");
  return data * xt.basis();
}

}  // namespace subalign
