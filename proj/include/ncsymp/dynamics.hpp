#pragma once

#include <memory>
#include <random>

#include "ncsymp/symplectic.hpp"

namespace ncsymp {

/// Linear functional given by its values on the basis.
struct State {
  AlgebraPtr alg;
  Vec values;

  cplx expectation(const Vec& a) const { return values.transpose() * a; }
};

/// phi(A) = Tr(rho rep(A)); the algebra needs a matrix model.
State state_from_density(const AlgebraPtr& alg, const Mat& rho);
/// Density matrix of a state when the model basis spans the full matrix algebra.
std::optional<Mat> density_of(const State& s, double tol = kDefaultTol);
State maximally_mixed(const AlgebraPtr& alg);
/// Pure state |v><v| / <v|v>.
State pure_state(const AlgebraPtr& alg, const Vec& v);

/// Normalization, odd-vanishing and positivity, the latter both via the
/// density matrix (when available) and via phi(A* A) on the basis and
/// `samples` random elements.
Report check_state(const State& s, std::uint64_t seed, int samples = 64, double tol = kDefaultTol);
/// Rank-one density matrix; nullopt when the algebra has no full matrix model.
std::optional<bool> is_pure(const State& s, double tol = 1e-7);

/// <phi~, A> = <phi, Phi(A)>; phi is verified as a *-automorphism first.
State transpose_action(const Mat& phi, const State& s, double tol = kDefaultTol);

/// (A, w, H) with H even and hermitian.
class HamiltonianSystem {
 public:
  HamiltonianSystem(std::shared_ptr<const SymplecticStructure> s, Vec h);

  const SymplecticStructure& structure() const { return *s_; }
  const std::shared_ptr<const SymplecticStructure>& structure_ptr() const { return s_; }
  const Vec& hamiltonian() const { return h_; }
  /// Matrix of A -> {H, A}.
  const Mat& generator() const { return gen_; }
  /// exp(t Y_H), the evolution automorphism.
  Mat flow(double t) const;

  Vec heisenberg(const Vec& a, double t) const { return flow(t) * a; }
  State liouville(const State& s, double t) const;

 private:
  std::shared_ptr<const SymplecticStructure> s_;
  Vec h_;
  Mat gen_;
};

/// {G, H} = 0, and <phi(t), G> constant along the Liouville flow at the sample times.
Report check_symmetry(const HamiltonianSystem& sys, const Vec& g, const State& probe,
                      const std::vector<double>& times, double tol = kDefaultTol);
/// Phi_t^* w = w for Phi_t = exp(t Y_H).
double omega_preservation_residual(const HamiltonianSystem& sys, double t);
/// {A(t), B(t)} - {A, B}(t).
double bracket_preservation_residual(const HamiltonianSystem& sys, const Vec& a, const Vec& b, double t);

}  // namespace ncsymp
