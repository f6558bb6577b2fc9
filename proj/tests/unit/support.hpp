#pragma once

#include <random>

#include "ncsymp/linalg.hpp"
#include "ncsymp/superalgebra.hpp"

namespace test {

using namespace ncsymp;

inline double diff(const Vec& a, const Vec& b) { return linalg::max_abs(Vec(a - b)); }
inline double diff(const Mat& a, const Mat& b) { return linalg::max_abs(Mat(a - b)); }

inline Vec el(const Superalgebra& alg, const char* label) { return alg.basis_vector(alg.index_of(label)); }

inline Mat pauli(char which) {
  Mat m = Mat::Zero(2, 2);
  const cplx i(0, 1);
  if (which == 'x') m << 0, 1, 1, 0;
  if (which == 'y') m << 0, -i, i, 0;
  if (which == 'z') m << 1, 0, 0, -1;
  if (which == 'I') m = Mat::Identity(2, 2);
  return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

/// Coefficient-space matrix of A -> u A u^dagger on an algebra with a matrix model.
inline Mat conjugation(const Superalgebra& alg, const Mat& u) {
  Mat phi(alg.dim(), alg.dim());
  for (int i = 0; i < alg.dim(); ++i) phi.col(i) = alg.from_matrix(u * alg.represent(alg.basis_vector(i)) * u.adjoint());
  return phi;
}

inline Mat hadamard() {
  Mat u(2, 2);
  u << 1, 1, 1, -1;
  return u / std::sqrt(2.0);
}

}  // namespace test
