#pragma once

#include <memory>
#include <optional>
#include <string>

#include "ncsymp/dynamics.hpp"
#include "ncsymp/symplectic.hpp"

namespace ncsymp {

/// (P (x) Q)(C (x) D) = (-1)^{|Q||C|} P(C) (x) Q(D) as a matrix on the tensor basis.
Mat operator_tensor(const Superalgebra& first, const Mat& p, const Mat& q, int q_parity);
/// X (x) id and id (x) X on the tensor algebra.
Mat lift_first(const Superalgebra& first, const Superalgebra& second, const Mat& x);
Mat lift_second(const Superalgebra& first, const Mat& x, int parity);

/// w = w1 (x) I2 + I1 (x) w2 on the given derivation space of A1 (x) A2.
/// A derivation X is read through its factor actions,
///   X(C (x) I) = sum_j (-1)^{|f_j||C|} Z_j(C) (x) f_j,   X(I (x) D) = sum_i e_i (x) W_i(D),
/// and w(X, X') = sum (-1)^{|f_j||Z'_k|} w1(Z_j, Z'_k) (x) sym(f_j, f_k)
///              + sum (-1)^{|e_l||W_i|} sym(e_i, e_l) (x) w2(W_i, W'_l),
/// with sym(u, v) = (uv + (-1)^{|u||v|} vu) / 2. On lifts of factor
/// derivations this reduces to w1 (x) I2 and I1 (x) w2.
Form induced_two_form(const SymplecticStructure& s1, const SymplecticStructure& s2, const SpacePtr& space);

/// Least-squares lambda in lambda {A, C} = -[A, C] over all basis pairs.
struct LambdaFit {
  cplx lambda = 0.0;
  double residual = 0.0;  // relative
  bool determined = false;  // false when the bracket data is zero
};
LambdaFit fit_lambda(const SymplecticStructure& s);

struct TensorVerdict {
  std::string verdict;  // both-supercommutative-valid, quantum-matched-valid, degenerate, inconsistent
  cplx lambda = 0.0;
  AlgebraPtr product;
  std::optional<Form> omega;
  std::optional<SymplecticStructure> structure;
  std::string witness;
  std::string witness_mode;
  Report report;
};

/// Builds the induced form on the full SDer of the product and decides
/// nondegeneracy there; in valid noncommutative cases fits lambda on both
/// factors and compares each factor form with -lambda w_c.
TensorVerdict tensor_verdict(const SymplecticStructure& s1, const SymplecticStructure& s2,
                                double tol = kDefaultTol);

/// Y_A (x) mu2(B) + mu1(A) (x) Y_B + lambda Y_A (x) Y_B for homogeneous A, B.
Mat tensor_ansatz(const SymplecticStructure& s1, const SymplecticStructure& s2, const Vec& a, const Vec& b,
                  cplx lambda);

/// Bilinear tensor Poisson bracket of the symmetric form:
/// {A(x)B, C(x)D} = (-1)^{|B||C|}[{A,C}1 (x) (BD + (-1)^{|B||D|}DB)/2 + (AC + (-1)^{|A||C|}CA)/2 (x) {B,D}2].
class TensorBracket {
 public:
  TensorBracket(const SymplecticStructure& s1, const SymplecticStructure& s2);
  /// The lambda form (-1)^{|B||C|}[{A,C}1 (x) BD + AC (x) {B,D}2 + lambda {A,C}1 (x) {B,D}2];
  /// lambda = 0 gives the naive bracket.
  static TensorBracket with_lambda(const SymplecticStructure& s1, const SymplecticStructure& s2, cplx lambda);

  const AlgebraPtr& product() const { return product_; }
  Vec operator()(const Vec& x, const Vec& y) const;
  /// Matrix of y -> {x, y}.
  Mat left(const Vec& x) const;

 private:
  TensorBracket() = default;
  AlgebraPtr product_;
  std::vector<Mat> left_;  // left_[i] = matrix of y -> {e_i, y}
};

/// Heisenberg evolution of x under H = H1 (x) I + I (x) H2 + H_int, generated by the
/// tensor bracket.
Vec coupled_evolution(const TensorBracket& pb, const Vec& h1, const Vec& h2, const Vec& h_int, const Vec& x,
                      double t);
/// H1 (x) I + I (x) H2 + H_int.
Vec coupled_hamiltonian(const Superalgebra& product, const Vec& h1, const Vec& h2, const Vec& h_int);

}  // namespace ncsymp
