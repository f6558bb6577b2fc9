#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "ncsymp/symplectic.hpp"

namespace ncsymp {

/// Polynomial in t of degree at most `bound` with algebra coefficients.
/// Products that would exceed the bound are truncated and flagged; the flag
/// is sticky through every later operation.
struct ExtendedElement {
  AlgebraPtr alg;
  std::vector<Vec> coeffs;  // coeffs[k] multiplies t^k
  bool overflow = false;

  ExtendedElement() = default;
  ExtendedElement(AlgebraPtr a, int bound);
  ExtendedElement(AlgebraPtr a, std::vector<Vec> c);

  int bound() const { return static_cast<int>(coeffs.size()) - 1; }
  /// Highest power with a nonzero coefficient, -1 for zero.
  int degree(double tol = 0.0) const;
  Vec at(double t) const;
  Vec stacked() const;
  static ExtendedElement from_stacked(AlgebraPtr a, const Vec& v, int bound);

  ExtendedElement operator+(const ExtendedElement& o) const;
  ExtendedElement operator-(const ExtendedElement& o) const;
  ExtendedElement operator*(cplx s) const;
  double max_abs() const;
};

ExtendedElement multiply(const ExtendedElement& a, const ExtendedElement& b);
ExtendedElement time_derivative(const ExtendedElement& a);

/// Extended superderivation z_0(t) d/dt + sum_a z_a(t) X~_a with scalar
/// polynomial coefficients; row 0 of `z` is the d/dt part, row a + 1 the X~_a part.
struct ExtendedDerivation {
  Mat z;  // (n + 1) x (bound + 1)
  int parity = 0;
  bool overflow = false;
};

/// Forms on the lifted space {d/dt, X~_0, ..., X~_{n-1}}, linear over the
/// time functions and so fixed by their values on that basis. Each value is
/// a stacked polynomial (coefficient k at rows k * dim ..).
struct ExtendedForm {
  int degree = 0;
  int parity = 0;
  Mat comps;
  bool overflow = false;

  double max_abs() const;
};

/// A = C[t]_{<=D} (x) A with PBs extended linearly over the time functions,
/// the lifted derivation space and the calculus on it.
class ExtendedSystem {
 public:
  ExtendedSystem(std::shared_ptr<const SymplecticStructure> s, int bound = 4);

  const SymplecticStructure& structure() const { return *s_; }
  const Superalgebra& algebra() const { return s_->algebra(); }
  const AlgebraPtr& algebra_ptr() const { return s_->space()->algebra(); }
  int bound() const { return bound_; }
  /// Number of lifted basis derivations, d/dt included.
  int lifted_size() const { return static_cast<int>(frame_.parity.size()); }
  const CochainFrame& frame() const { return frame_; }
  const Layout& layout(int degree) const;

  ExtendedElement zero() const;
  ExtendedElement constant(const Vec& a) const;
  ExtendedElement element(std::vector<Vec> coeffs) const;

  /// {sum f_i A_i, sum g_j B_j} = sum f_i g_j {A_i, B_j}.
  ExtendedElement bracket(const ExtendedElement& a, const ExtendedElement& b) const;
  /// Z(F) = z_0 dF/dt + sum_a z_a X~_a(F).
  ExtendedElement apply(const ExtendedDerivation& z, const ExtendedElement& f) const;
  /// Y^_H = d/dt + Y~_H with Y~_H = sum_k t^k Y_{H_k}.
  ExtendedDerivation evolution(const ExtendedElement& h) const;
  /// Y~_G for a time-independent G.
  ExtendedDerivation lift(const Vec& g) const;

  Vec value(const ExtendedForm& w, const std::vector<int>& idx) const;
  ExtendedForm d(const ExtendedForm& w) const;
  /// i_Z w for even Z.
  ExtendedForm interior(const ExtendedDerivation& z, const ExtendedForm& w) const;
  /// 0-form of F.
  ExtendedForm zero_form(const ExtendedElement& f) const;

  /// w~ on the lifted space: w~(X~_a, X~_b) = w(X_a, X_b), zero on d/dt.
  ExtendedForm omega_lifted() const;
  /// Omega = w~ - dH ^ dt, so Omega(d/dt, X~_b) = (dH)(X~_b).
  ExtendedForm presymplectic_omega(const ExtendedElement& h) const;
  /// Theta = theta~ - H dt for the potential theta of w.
  ExtendedForm poincare_cartan(const ExtendedElement& h, const Form& theta) const;

 private:
  void require_hamiltonian(const ExtendedElement& h) const;
  std::shared_ptr<const SymplecticStructure> s_;
  int bound_;
  CochainFrame frame_;
  std::vector<std::shared_ptr<const Layout>> layouts_;
};

/// Omega closed, dt(Y^_H) = 1, i_{Y^_H} Omega = 0, i_{Y~_H} w~ = -d~H, and
/// d Theta = Omega when w has a potential.
Report check_evolution(const ExtendedSystem& sys, const ExtendedElement& h, double tol = kDefaultTol);
/// Y^_H F = dF/dt + {H, F} for a given F.
double evolution_equation_residual(const ExtendedSystem& sys, const ExtendedElement& h, const ExtendedElement& f);

struct NoetherResult {
  Report report;
  bool closed = false;
  bool exact = false;
  bool conserved = false;
  bool truncated = false;
  std::optional<ExtendedElement> invariant;
  double solve_residual = 0.0;
  double conservation_residual = 0.0;
};

/// Solves i_Z Omega = -d h^ by least squares over extended elements (minimum
/// norm, so up to constants) and tests Y^_H(h^) = 0.
NoetherResult noether_check(const ExtendedSystem& sys, const ExtendedElement& h, const ExtendedDerivation& z,
                            double tol = kDefaultTol);

}  // namespace ncsymp
