#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "ncsymp/report.hpp"
#include "ncsymp/superalgebra.hpp"

namespace ncsymp {

/// Homogeneous linear endomorphism intended to satisfy the graded Leibniz rule.
struct Superderivation {
  AlgebraPtr alg;
  Mat m;
  int parity = 0;

  Vec operator()(const Vec& a) const { return m * a; }
};

/// max_i || X L_i - (-1)^{|X||i|} L_i X - L_{X e_i} ||, plus any parity leakage.
double leibniz_residual(const Superalgebra& alg, const Mat& x, int parity);
inline double leibniz_residual(const Superderivation& x) { return leibniz_residual(*x.alg, x.m, x.parity); }

/// D_A B = [A, B]. Throws for mixed-parity A.
Superderivation inner(const AlgebraPtr& alg, const Vec& a, double tol = kDefaultTol);
/// Graded commutator [X, Y] = XY - (-1)^{|X||Y|} YX.
Superderivation bracket(const Superderivation& x, const Superderivation& y);
Mat graded_commutator(const Mat& x, int px, const Mat& y, int py);

/// Involution on derivations: X*(A) = (-1)^{|X||A|} [X(A*)]*. The sign is
/// trivial for even X; for odd X it is what keeps X* a superderivation.
Superderivation sder_star(const Superderivation& x);
Mat sder_star_matrix(const Superalgebra& alg, const Mat& x, int parity);

/// Canonical orthonormal basis of SDer, even part first.
std::vector<Superderivation> sder_basis(const AlgebraPtr& alg, double tol = kDefaultTol);
/// Canonical orthonormal basis of the span of inner superderivations.
std::vector<Superderivation> inner_basis(const AlgebraPtr& alg, double tol = kDefaultTol);
/// Homogeneous basis indices that generate the algebra (greedy).
std::vector<int> generating_set(const Superalgebra& alg, double tol = kDefaultTol);

/// Product-, unit-, parity- and star-preservation of phi (target x source).
Report check_isomorphism(const Superalgebra& source, const Superalgebra& target, const Mat& phi,
                         double tol = kDefaultTol);
/// Phi X Phi^{-1}; phi is verified first.
Superderivation pushforward(const AlgebraPtr& target, const Mat& phi, const Superderivation& x,
                            double tol = kDefaultTol);

/// Split of a derivation of A1 (x) A2 into the part acting through the first
/// factor copy and the part acting through the second.
struct TensorSplit {
  Superderivation first;
  Superderivation second;
  double reconstruction = 0.0;  // || X1 + X2 - X ||
  double leibniz_first = 0.0;
  double leibniz_second = 0.0;
};
TensorSplit decompose_tensor(const Superderivation& x, double tol = kDefaultTol);

/// A finite C-span of homogeneous superderivations closed under the graded
/// bracket. Immutable once built.
class DerivationSpace {
 public:
  static std::shared_ptr<const DerivationSpace> make(AlgebraPtr alg, std::vector<Superderivation> basis,
                                                     double tol = kDefaultTol);
  static std::shared_ptr<const DerivationSpace> full(const AlgebraPtr& alg, double tol = kDefaultTol);
  static std::shared_ptr<const DerivationSpace> inner(const AlgebraPtr& alg, double tol = kDefaultTol);

  const AlgebraPtr& algebra() const { return alg_; }
  int size() const { return static_cast<int>(basis_.size()); }
  const Superderivation& operator[](int a) const { return basis_[a]; }
  const std::vector<Superderivation>& basis() const { return basis_; }
  int parity(int a) const { return basis_[a].parity; }
  double tol() const { return tol_; }

  /// Coordinates of x in this basis; throws MathError when x is outside the span.
  Vec coords(const Mat& x) const;
  std::optional<Vec> try_coords(const Mat& x, double* residual = nullptr) const;
  Mat matrix(const Vec& coords) const;
  /// Parity of a coordinate vector: 0, 1 or -1 for mixed.
  int parity_of(const Vec& coords) const;

  /// Coordinates of [X_a, X_b].
  const Vec& bracket(int a, int b) const { return closure_[static_cast<size_t>(a) * size() + b]; }
  Vec bracket(const Vec& x, const Vec& y) const;

  /// Column a holds the coordinates of X_a*; null if the span is not *-closed.
  const Mat* star_matrix() const { return star_ ? &*star_ : nullptr; }

 private:
  DerivationSpace() = default;
  AlgebraPtr alg_;
  std::vector<Superderivation> basis_;
  double tol_ = kDefaultTol;
  Mat flat_;
  Eigen::ColPivHouseholderQR<Mat> qr_;
  std::vector<Vec> closure_;
  std::optional<Mat> star_;
};

using SpacePtr = std::shared_ptr<const DerivationSpace>;

}  // namespace ncsymp
