#pragma once

#include <optional>
#include <vector>

#include "ncsymp/dynamics.hpp"
#include "ncsymp/symplectic.hpp"

namespace ncsymp {

/// Finite-dimensional Lie algebra by structure constants [xi_a, xi_b] = C_ab^c xi_c.
struct LieAlgebra {
  int dim = 0;
  std::vector<Mat> c;  // c[k](a, b) = C_ab^k

  explicit LieAlgebra(int n = 0);
  cplx structure(int a, int b, int k) const { return c[k](a, b); }
  void set(int a, int b, int k, cplx v);  // sets C_ab^k and C_ba^k = -v
  /// Coordinates of [x, y].
  Vec bracket(const Vec& x, const Vec& y) const;
  /// Matrix of ad(xi_a).
  Mat ad(int a) const;

  static LieAlgebra abelian(int n);
  /// C_ab^c = sign * eps_abc.
  static LieAlgebra su2(double sign = 1.0);
};

/// Antisymmetry and Jacobi.
Report verify_lie_algebra(const LieAlgebra& g, double tol = kDefaultTol);

/// New constants after the basis change xi'_a = sum_b p(b, a) xi_b.
LieAlgebra change_basis(const LieAlgebra& g, const Mat& p);

struct LieAlgebraAction {
  LieAlgebra g;
  std::vector<Superderivation> generators;  // Z_a, even
  std::optional<std::vector<Vec>> hamiltonians;
};

/// Action of su(2) on a matrix-model algebra through h_a = (hbar / 2) sigma_a with
/// C_ab^c = -eps_abc, the sign under which {h_a, h_b} = C_ab^c h_c for w = -i hbar w_c.
LieAlgebraAction su2_pauli_action(const SymplecticStructure& s, double hbar = 1.0);

struct ActionVerdict {
  Report report;
  bool homomorphism = false;
  bool locally_hamiltonian = false;
  bool hamiltonian = false;
  bool poisson = false;
  std::vector<Vec> hamiltonians;  // supplied or solved (minimum norm)
};

/// [Z_a, Z_b] = C_ab^c Z_c, L_{Z_a} w = 0, i_{Z_a} w = -d h_a and {h_a, h_b} = C_ab^c h_c.
ActionVerdict verify_action(const LieAlgebraAction& action, const SymplecticStructure& s,
                            double tol = kDefaultTol);

/// alpha(xi_a, xi_b) = {h_a, h_b} - h_{[xi_a, xi_b]}.
struct Cocycle2 {
  int dim = 0;
  std::vector<Vec> values;  // values[a * dim + b]
  std::optional<Mat> scalar;  // alpha = scalar(a, b) I when every value is a multiple of I
  Report report;            // neutrality and cocycle identity

  const Vec& at(int a, int b) const { return values[static_cast<size_t>(a) * dim + b]; }
};

Cocycle2 obstruction_cocycle(const LieAlgebra& g, const std::vector<Vec>& h, const SymplecticStructure& s,
                             double tol = kDefaultTol);

/// A neutral element has zero Hamiltonian derivation.
bool is_neutral(const SymplecticStructure& s, const Vec& a, double tol = kDefaultTol);

/// Trivial-coefficient cohomology in degree two.
struct H2Result {
  int dim = 0;
  int cocycles = 0;      // dim Z^2
  int coboundaries = 0;  // dim B^2
  std::vector<Mat> representatives;  // antisymmetric dim x dim matrices
  Mat d1;  // 1-cochains -> 2-cochains (pairs a < b)
  Mat d2;  // 2-cochains -> 3-cochains (triples a < b < c)
  double d_squared = 0.0;
};

/// Cochains in coordinates: (d l)(a, b) = -l([a, b]) and
/// (d m)(a, b, c) = -[m([a, b], c) + m([b, c], a) + m([c, a], b)].
H2Result ce_cohomology_h2(const LieAlgebra& g, double tol = kDefaultTol);
/// Matrix of the coboundary of a 1-cochain beta.
Mat coboundary(const LieAlgebra& g, const Vec& beta);

/// [xi_a, xi_b] = C_ab^c xi_c + sum_r eta_r(a, b) M_r with M_r central; index n + r is M_r.
/// Throws MathError when Jacobi fails.
LieAlgebra central_extension(const LieAlgebra& g, const std::vector<Mat>& eta, double tol = kDefaultTol);

/// The extension by eta = d beta is carried to g + R by xi'_a = xi_a - beta_a M.
Report check_coboundary_extension(const LieAlgebra& g, const Vec& beta, double tol = kDefaultTol);

/// <h~(phi), xi_a> = <phi, h_a>.
Vec momentum_map(const std::vector<Vec>& h, const State& phi);
/// max |<phi, {h_a, h_b}> - sum_c C_ab^c <h~(phi), xi_c>|.
double momentum_equivariance_residual(const LieAlgebra& g, const std::vector<Vec>& h,
                                      const SymplecticStructure& s, const State& phi);

}  // namespace ncsymp
