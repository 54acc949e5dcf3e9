#pragma once

// Thin layer over Eigen's SVD: numerical rank, condition numbers and
// truncated least squares.

#include <lcapr/group.hpp>

#include <Eigen/Dense>

#include <limits>

namespace lcapr {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Rank threshold of the uniqueness oracle and the completeness checks.
inline constexpr double oracle_rank_tol = 1e-9;
// Singular-value cutoff of both linear inversions in the retrieval pipeline.
inline constexpr double solver_rank_tol = 1e-10;

struct RankInfo {
  Eigen::Index rank = 0;
  // sigma_max / sigma_min over the min(rows, cols) singular values; infinite
  // when the matrix is rank deficient.
  double condition = std::numeric_limits<double>::infinity();
  Eigen::VectorXd singular_values;
};

inline RankInfo rank_info(const Matrix& m, double rel_tol = oracle_rank_tol) {
  RankInfo info;
  if (m.size() == 0) return info;
  Eigen::JacobiSVD<Matrix> svd(m);
  info.singular_values = svd.singularValues();
  const double top = info.singular_values(0);
  if (top <= 0.0) return info;
  for (Eigen::Index i = 0; i < info.singular_values.size(); ++i)
    if (info.singular_values(i) > rel_tol * top) ++info.rank;
  if (info.rank == info.singular_values.size())
    info.condition = top / info.singular_values(info.singular_values.size() - 1);
  return info;
}

struct LeastSquares {
  Matrix solution;  // one column per right-hand side
  RankInfo info;
};

// Minimum-norm least squares with singular values below rel_tol * sigma_max
// discarded.
inline LeastSquares least_squares(const Matrix& a, const Matrix& b, double rel_tol = solver_rank_tol) {
  LeastSquares out;
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  out.info.singular_values = sv;
  const double top = sv.size() ? sv(0) : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (top > 0.0 && sv(i) > rel_tol * top) {
      inv(i) = 1.0 / sv(i);
      ++out.info.rank;
    }
  }
  if (out.info.rank == sv.size() && sv.size() > 0) out.info.condition = top / sv(sv.size() - 1);
  out.solution = svd.matrixV() * inv.asDiagonal() * (svd.matrixU().adjoint() * b);
  return out;
}

}  // namespace lcapr
