#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ncsymp {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline constexpr double kDefaultTol = 1e-9;

/// Graded sign (-1)^(a*b) for parities a, b in {0, 1}.
inline int eta(int a, int b) { return ((a & b) & 1) ? -1 : 1; }

/// Malformed input: bad spec, out-of-range index, violated precondition.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A structural check that a computation depends on did not hold.
class MathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ncsymp
