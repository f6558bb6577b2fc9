#pragma once

#include "ncsymp/types.hpp"

namespace ncsymp::linalg {

/// Orthonormal basis (columns) of the null space of `a`. Singular values at or
/// below tol * sigma_max count as zero.
Mat null_space(const Mat& a, double tol);

/// Numerical rank with the same threshold rule as null_space.
int rank(const Mat& a, double tol);

/// Canonical orthonormal basis of span(cols of v): reduced row echelon form of
/// the span, Gram-Schmidt in pivot order, then each vector's first
/// significant entry made real and positive. Independent of which basis of
/// the subspace was passed in.
Mat canonical_basis(const Mat& v, double tol);

struct LeastSquares {
  Vec x;
  double residual = 0.0;  // ||a x - b|| / max(1, ||b||)
  int rank = 0;
};

/// Minimum-norm least-squares solution via SVD.
LeastSquares solve(const Mat& a, const Vec& b, double tol);

/// Reusable SVD-based solver for many right-hand sides.
class Solver {
 public:
  Solver() = default;
  Solver(const Mat& a, double tol);
  LeastSquares solve(const Vec& b) const;
  int rank() const { return rank_; }
  int cols() const { return static_cast<int>(a_.cols()); }
  double sigma_max() const { return sigma_max_; }
  double sigma_min() const { return sigma_min_; }
  /// Right singular vector for the smallest singular value.
  Vec weakest_direction() const { return weakest_; }

 private:
  Mat a_;
  Mat pinv_;
  int rank_ = 0;
  double sigma_max_ = 0.0;
  double sigma_min_ = 0.0;
  Vec weakest_;
};

double max_abs(const Mat& m);
double max_abs(const Vec& v);

}  // namespace ncsymp::linalg
