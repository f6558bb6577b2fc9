#pragma once

#include <optional>
#include <string>

#include "ncsymp/forms.hpp"
#include "ncsymp/linalg.hpp"

namespace ncsymp {

/// Stacked values (dA)(X_a), a = 0..n-1, of a possibly mixed element A.
/// On homogeneous A, (dA)(X) = (-1)^{|X||A|} X(A).
Vec stacked_differential(const DerivationSpace& space, const Vec& a);

struct SymplecticVerdict;

/// Validated even, closed, nondegenerate 2-form with a cached solver for
/// i_Y w = -dA. Sign conventions: {A, B} = w(Y_A, Y_B) = Y_A(B), so for
/// w_c the bracket is the supercommutator and for -i hbar w_c it is
/// (-i hbar)^{-1}[A, B].
class SymplecticStructure {
 public:
  const Form& omega() const { return omega_; }
  const SpacePtr& space() const { return omega_.space(); }
  const Superalgebra& algebra() const { return omega_.algebra(); }
  double tol() const { return tol_; }
  bool real() const { return real_; }

  /// Coordinates of Y_A in the derivation basis.
  Vec hamiltonian_coords(const Vec& a) const { return ham_ * a; }
  Mat hamiltonian_matrix(const Vec& a) const;
  /// Y_A for homogeneous A; throws SpecError on mixed input.
  Superderivation hamiltonian(const Vec& a) const;
  /// {A, B} = Y_A(B).
  Vec bracket(const Vec& a, const Vec& b) const;

  const std::optional<Form>& potential() const { return potential_; }
  void set_potential(Form theta) { potential_ = std::move(theta); }

 private:
  friend SymplecticVerdict verify_symplectic(const Form& omega, double tol, bool require_real);
  SymplecticStructure() = default;
  Form omega_;
  double tol_ = kDefaultTol;
  bool real_ = false;
  Mat ham_;                 // n x dim
  std::vector<Mat> pb_;     // pb_[k] = matrix of Y_{e_k}
  std::optional<Form> potential_;
};

struct SymplecticVerdict {
  Report report;
  bool even = false;
  bool closed = false;
  bool real = false;
  bool real_checked = false;
  bool unique = false;
  bool exists = false;
  int witness = -1;          // first basis element with no (unique) Hamiltonian derivation
  std::string witness_mode;  // "no solution" or "not unique"
  std::string failure;       // empty, "not-even", "not-closed", "not-real", "degenerate"
  std::optional<SymplecticStructure> structure;

  bool valid() const { return structure.has_value(); }
};

/// Runs every invariant. Reality is always reported; it blocks validity only
/// when `require_real` is set, so the imaginary w_c itself can be used.
SymplecticVerdict verify_symplectic(const Form& omega, double tol = kDefaultTol, bool require_real = false);
/// verify_symplectic that throws MathError naming the failed invariant.
SymplecticStructure make_symplectic(const Form& omega, double tol = kDefaultTol, bool require_real = false);

/// True when the algebra is not supercommutative and inner derivations span SDer.
bool is_special(const AlgebraPtr& alg, double tol = kDefaultTol);
/// w_c(D_A, D_B) = [A, B] on the full SDer of a special algebra; SpecError otherwise.
Form canonical_form(const AlgebraPtr& alg, double tol = kDefaultTol);
Form canonical_form(const SpacePtr& space, double tol = kDefaultTol);
/// b w_c.
Form scaled_canonical_form(const AlgebraPtr& alg, cplx b, double tol = kDefaultTol);
/// -i hbar w_c.
Form quantum_form(const AlgebraPtr& alg, double hbar = 1.0, double tol = kDefaultTol);
/// Grassmann algebra with w(d_i, d_j) = g_ij I, extended to the full SDer by
/// center linearity through X = sum_i X(theta_i) d_i.
Form fermionic_form(const AlgebraPtr& grassmann, const Mat& g, double tol = kDefaultTol);
/// Potential theta with d theta = w by least squares; nullopt when w is not exact.
std::optional<Form> find_potential(const Form& w, double tol = kDefaultTol);

/// ||{A,{B,C}} - {{A,B},C} - (-1)^{|A||B|}{B,{A,C}}|| for homogeneous inputs.
double jacobi_residual(const SymplecticStructure& s, const Vec& a, const Vec& b, const Vec& c);
/// ||[Y_A, Y_B] - Y_{A,B}|| (matrix norm), homogeneous inputs.
double homomorphism_residual(const SymplecticStructure& s, const Vec& a, const Vec& b);
/// i_{[X,Y]} w against d(i_X i_Y w) for locally Hamiltonian X, Y.
Report check_local_to_global(const SymplecticStructure& s, const Vec& x, const Vec& y);
/// {a, b} = I.
bool is_canonical_pair(const SymplecticStructure& s, const Vec& a, const Vec& b);

}  // namespace ncsymp
