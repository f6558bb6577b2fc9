#include "ncsymp/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace ncsymp::linalg {

namespace {

int count_rank(const Eigen::VectorXd& s, double tol) {
  if (s.size() == 0) return 0;
  const double smax = s(0);
  if (smax <= 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol * smax) ++r;
  return r;
}

}  // namespace

Mat null_space(const Mat& a, double tol) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0 || n == 0) return Mat::Identity(n, n);
  if (a.rows() > 2 * n) {
    // A = QR leaves the singular values and right singular vectors unchanged.
    // BDCSVD mishandles exact zeros on the triangular factor, Jacobi does not.
    Eigen::HouseholderQR<Mat> qr(a);
    const Mat r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    Eigen::JacobiSVD<Mat> svd(r, Eigen::ComputeFullV);
    const int rank = count_rank(svd.singularValues(), tol);
    return svd.matrixV().rightCols(n - rank);
  }
  Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeFullV);
  const int r = count_rank(svd.singularValues(), tol);
  return svd.matrixV().rightCols(n - r);
}

int rank(const Mat& a, double tol) {
  if (a.size() == 0) return 0;
  Eigen::BDCSVD<Mat> svd(a);
  return count_rank(svd.singularValues(), tol);
}

Mat canonical_basis(const Mat& v, double tol) {
  const Eigen::Index n = v.rows();
  if (v.cols() == 0) return Mat(n, 0);
  // Row echelon form of v^T with partial pivoting.
  Mat r = v.transpose();
  const double scale = std::max(1.0, max_abs(r));
  const double thresh = std::max(tol, 1e-12) * scale;
  Eigen::Index row = 0;
  std::vector<Eigen::Index> pivots;
  for (Eigen::Index col = 0; col < n && row < r.rows(); ++col) {
    Eigen::Index best = row;
    for (Eigen::Index i = row + 1; i < r.rows(); ++i)
      if (std::abs(r(i, col)) > std::abs(r(best, col))) best = i;
    if (std::abs(r(best, col)) <= thresh) continue;
    r.row(row).swap(r.row(best));
    r.row(row) /= r(row, col);
    for (Eigen::Index i = 0; i < r.rows(); ++i)
      if (i != row && r(i, col) != cplx(0.0)) r.row(i) -= r(i, col) * r.row(row);
    pivots.push_back(col);
    ++row;
  }
  Mat q(n, row);
  for (Eigen::Index k = 0; k < row; ++k) {
    Vec x = r.row(k).transpose();
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index j = 0; j < k; ++j) x -= q.col(j) * q.col(j).dot(x);
    x /= x.norm();
    const double m = max_abs(x);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(x(i)) > 1e-10 * m) {
        x *= std::conj(x(i)) / std::abs(x(i));
        x(i) = std::abs(x(i));
        break;
      }
    }
    q.col(k) = x;
  }
  return q;
}

LeastSquares solve(const Mat& a, const Vec& b, double tol) { return Solver(a, tol).solve(b); }

Solver::Solver(const Mat& a, double tol) : a_(a) {
  const Eigen::Index n = a.cols();
  pinv_ = Mat::Zero(n, a.rows());
  weakest_ = Vec::Zero(n);
  if (a.rows() == 0 || n == 0) return;
  Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  rank_ = count_rank(s, tol);
  sigma_max_ = s.size() ? s(0) : 0.0;
  sigma_min_ = (s.size() == n) ? s(n - 1) : 0.0;
  weakest_ = svd.matrixV().col(n - 1);
  for (int i = 0; i < rank_; ++i)
    pinv_ += svd.matrixV().col(i) * (svd.matrixU().col(i).adjoint() / s(i));
}

LeastSquares Solver::solve(const Vec& b) const {
  LeastSquares out;
  out.x = pinv_ * b;
  out.rank = rank_;
  const double denom = std::max(1.0, b.norm());
  out.residual = (a_ * out.x - b).norm() / denom;
  return out;
}

double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
double max_abs(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace ncsymp::linalg
