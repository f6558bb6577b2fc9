#include "ncsymp/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace ncsymp {

namespace {

bool has_full_model(const Superalgebra& alg) {
  if (!alg.model()) return false;
  const auto n = alg.model()->basis.front().rows();
  return n * n == alg.dim();
}

}  // namespace

State state_from_density(const AlgebraPtr& alg, const Mat& rho) {
  if (!alg->model()) throw SpecError("density matrices need an algebra with a matrix model");
  const auto& basis = alg->model()->basis;
  if (rho.rows() != basis.front().rows() || rho.cols() != basis.front().cols())
    throw SpecError("density matrix size does not match the matrix model");
  State s{alg, Vec(alg->dim())};
  for (int i = 0; i < alg->dim(); ++i) s.values(i) = (rho * basis[i]).trace();
  return s;
}

std::optional<Mat> density_of(const State& s, double tol) {
  const auto& alg = *s.alg;
  if (!has_full_model(alg)) return std::nullopt;
  const auto& basis = alg.model()->basis;
  const Eigen::Index n = basis.front().rows();
  Mat sys(alg.dim(), n * n);
  for (int i = 0; i < alg.dim(); ++i) {
    const Mat t = basis[i].transpose();
    sys.row(i) = Eigen::Map<const Vec>(t.data(), n * n).transpose();
  }
  const auto ls = linalg::solve(sys, s.values, tol);
  return Mat(Eigen::Map<const Mat>(ls.x.data(), n, n));
}

State maximally_mixed(const AlgebraPtr& alg) {
  if (!alg->model()) throw SpecError("maximally mixed state needs a matrix model");
  const auto n = alg->model()->basis.front().rows();
  return state_from_density(alg, Mat::Identity(n, n) / double(n));
}

State pure_state(const AlgebraPtr& alg, const Vec& v) {
  if (!alg->model()) throw SpecError("pure states need a matrix model");
  const double nv = v.squaredNorm();
  if (nv == 0.0) throw SpecError("pure state vector is zero");
  return state_from_density(alg, v * v.adjoint() / nv);
}

Report check_state(const State& s, std::uint64_t seed, int samples, double tol) {
  const auto& alg = *s.alg;
  Report r;
  r.title = "state";
  r.add(make_check("normalized", "phi(I) = 1", std::abs(s.expectation(alg.unit_vector()) - 1.0), tol));
  double odd = 0.0;
  for (int i = 0; i < alg.dim(); ++i)
    if (alg.parity(i) == 1) odd = std::max(odd, std::abs(s.values(i)));
  r.add(make_check("odd-vanishing", "phi(A) = 0 for odd A", odd, tol));

  std::mt19937_64 rng(seed);
  double worst = 0.0;
  auto probe = [&](const Vec& a) {
    const cplx v = s.expectation(alg.mul(alg.star(a), a));
    worst = std::max(worst, std::max(-v.real(), std::abs(v.imag())));
  };
  for (int i = 0; i < alg.dim(); ++i)
    if (alg.parity(i) == 0) probe(alg.basis_vector(i));
  for (int k = 0; k < samples; ++k) probe(random_element(alg, rng, 0));
  r.add(make_check("positive-sampled", "phi(A* A) >= 0 on samples", worst, tol));

  if (auto rho = density_of(s, tol)) {
    const Mat herm = (*rho + rho->adjoint()) / 2.0;
    const double skew = linalg::max_abs(Mat(*rho - herm));
    const Eigen::SelfAdjointEigenSolver<Mat> es(herm);
    const double low = es.eigenvalues().minCoeff();
    r.add(make_check("positive-density", "density matrix hermitian with eigenvalues >= 0",
                     std::max(skew, std::max(0.0, -low)), tol));
  }
  return r;
}

std::optional<bool> is_pure(const State& s, double tol) {
  auto rho = density_of(s);
  if (!rho) return std::nullopt;
  const Eigen::SelfAdjointEigenSolver<Mat> es(((*rho + rho->adjoint()) / 2.0).eval());
  const auto& ev = es.eigenvalues();
  int significant = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) > tol) ++significant;
  return significant == 1;
}

State transpose_action(const Mat& phi, const State& s, double tol) {
  const Report iso = check_isomorphism(*s.alg, *s.alg, phi, tol);
  if (!iso.ok()) throw SpecError("transpose action needs a *-automorphism");
  return {s.alg, phi.transpose() * s.values};
}

HamiltonianSystem::HamiltonianSystem(std::shared_ptr<const SymplecticStructure> s, Vec h)
    : s_(std::move(s)), h_(std::move(h)) {
  const auto& alg = s_->algebra();
  if (h_.size() != alg.dim()) throw SpecError("Hamiltonian size does not match the algebra");
  const double tol = s_->tol() * std::max(1.0, linalg::max_abs(h_));
  if (linalg::max_abs(alg.odd_part(h_)) > tol) throw SpecError("Hamiltonian must be even");
  if (linalg::max_abs(Vec(alg.star(h_) - h_)) > tol) throw SpecError("Hamiltonian must be hermitian");
  gen_ = s_->hamiltonian_matrix(h_);
}

Mat HamiltonianSystem::flow(double t) const { return Mat(gen_ * cplx(t)).exp(); }

State HamiltonianSystem::liouville(const State& s, double t) const { return {s.alg, flow(t).transpose() * s.values}; }

Report check_symmetry(const HamiltonianSystem& sys, const Vec& g, const State& probe,
                      const std::vector<double>& times, double tol) {
  Report r;
  r.title = "symmetry";
  const auto& s = sys.structure();
  r.add(make_check("poisson-commutes", "{G, H} = 0",
                   linalg::max_abs(Vec(s.bracket(g, sys.hamiltonian()))), tol));
  const cplx g0 = probe.expectation(g);
  double drift = 0.0;
  for (double t : times) drift = std::max(drift, std::abs(sys.liouville(probe, t).expectation(g) - g0));
  r.add(make_check("conserved", "<phi(t), G> = <phi, G>", drift, tol));
  return r;
}

double omega_preservation_residual(const HamiltonianSystem& sys, double t) {
  const auto& w = sys.structure().omega();
  return (pullback(sys.flow(t), w.space(), w) - w).max_abs();
}

double bracket_preservation_residual(const HamiltonianSystem& sys, const Vec& a, const Vec& b, double t) {
  const auto& s = sys.structure();
  const Mat f = sys.flow(t);
  return linalg::max_abs(Vec(s.bracket(f * a, f * b) - f * s.bracket(a, b)));
}

}  // namespace ncsymp
