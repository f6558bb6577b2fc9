#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "ncsymp/dynamics.hpp"
#include "ncsymp/tensor.hpp"
#include "support.hpp"

using namespace test;

namespace {

std::shared_ptr<const SymplecticStructure> quantum(const AlgebraPtr& alg, double hbar = 1.0) {
  return std::make_shared<const SymplecticStructure>(make_symplectic(quantum_form(alg, hbar)));
}

Vec up() {
  Vec v(2);
  v << 1.0, 0.0;
  return v;
}

}  // namespace

TEST_CASE("states") {
  const auto m2 = build_algebra("matrix:2");
  const State mixed = maximally_mixed(m2);
  const State pz = pure_state(m2, up());
  CHECK(std::abs(mixed.expectation(m2->unit_vector()) - 1.0) < 1e-15);
  CHECK(std::abs(mixed.expectation(el(*m2, "sz"))) < 1e-15);
  CHECK(std::abs(pz.expectation(el(*m2, "sz")) - 1.0) < 1e-15);
  CHECK(check_state(pz, 1).ok());
  CHECK(*is_pure(pz));
  CHECK_FALSE(*is_pure(mixed));
  Mat bad = Mat::Zero(2, 2);
  bad(0, 0) = 1.5;
  bad(1, 1) = -0.5;
  CHECK_FALSE(check_state(state_from_density(m2, bad), 1).ok());
}

TEST_CASE("transpose action") {
  const auto m2 = build_algebra("matrix:2");
  const State pz = pure_state(m2, up());
  const State same = transpose_action(Mat::Identity(4, 4), pz);
  CHECK(diff(same.values, pz.values) < 1e-15);

  const Mat phi = conjugation(*m2, hadamard());
  CHECK(diff(Vec(phi * el(*m2, "sz")), el(*m2, "sx")) < 1e-14);
  const State moved = transpose_action(phi, pz);
  CHECK(std::abs(moved.expectation(el(*m2, "sx")) - 1.0) < 1e-14);

  Vec down(2);
  down << 0.0, 1.0;
  const State pd = pure_state(m2, down);
  State mix{m2, 0.25 * pz.values + 0.75 * pd.values};
  const State out = transpose_action(phi, mix);
  const Vec expect = 0.25 * transpose_action(phi, pz).values + 0.75 * transpose_action(phi, pd).values;
  CHECK(diff(out.values, expect) < 1e-14);
}

TEST_CASE("two-level precession") {
  const auto m2 = build_algebra("matrix:2");
  const double w0 = 0.9;
  const HamiltonianSystem sys(quantum(m2), el(*m2, "sz") * (w0 / 2.0));
  const Vec sx = el(*m2, "sx"), sy = el(*m2, "sy");
  for (double t = 0.0; t <= 10.0; t += 0.5) {
    const Vec oracle = std::cos(w0 * t) * sx - std::sin(w0 * t) * sy;
    CHECK(diff(sys.heisenberg(sx, t), oracle) < 1e-12);
  }
  CHECK(diff(sys.heisenberg(sys.hamiltonian(), 3.0), sys.hamiltonian()) < 1e-13);
  CHECK(diff(sys.heisenberg(el(*m2, "sz"), 3.0), el(*m2, "sz")) < 1e-13);
}

TEST_CASE("Liouville flow") {
  const auto m2 = build_algebra("matrix:2");
  std::mt19937_64 rng(73);
  const Vec h0 = random_element(*m2, rng, 0);
  const Vec h = 0.5 * (h0 + m2->star(h0));
  const HamiltonianSystem sys(quantum(m2), h);
  const State mixed = maximally_mixed(m2);
  CHECK(diff(sys.liouville(mixed, 4.0).values, mixed.values) < 1e-13);

  Vec v = random_vector(2, rng);
  const State phi = pure_state(m2, v);
  const Mat rho = *density_of(phi);
  const Mat hm = m2->represent(h);
  for (int k = 0; k < 10; ++k) {
    const double t = 10.0 * std::uniform_real_distribution<double>(0, 1)(rng);
    const Vec a = random_element(*m2, rng);
    CHECK(std::abs(sys.liouville(phi, t).expectation(a) - phi.expectation(sys.heisenberg(a, t))) < 1e-12);
    // Density matrix evolves as exp(-iHt) rho exp(iHt).
    const Mat u = (Mat(hm * cplx(0, -t))).exp();
    const Mat rho_t = u * rho * u.adjoint();
    CHECK(diff(*density_of(sys.liouville(phi, t)), rho_t) < 1e-12);
  }
}

TEST_CASE("symmetries and preservation") {
  const auto m2 = build_algebra("matrix:2");
  const HamiltonianSystem sys(quantum(m2), el(*m2, "sz"));
  const State pz = pure_state(m2, up());
  CHECK(check_symmetry(sys, sys.hamiltonian(), pz, {1.0, 2.0}).ok());
  CHECK_FALSE(check_symmetry(sys, el(*m2, "sx"), pz, {1.0, 2.0}).ok());
  std::mt19937_64 rng(79);
  for (double t : {0.5, 3.0, 9.5}) {
    CHECK(omega_preservation_residual(sys, t) < 1e-12);
    CHECK(bracket_preservation_residual(sys, random_element(*m2, rng), random_element(*m2, rng), t) < 1e-12);
  }
}

TEST_CASE("coupled qubits") {
  const auto m2 = build_algebra("matrix:2");
  const auto s = make_symplectic(quantum_form(m2));
  const TensorBracket pb(s, s);
  const auto& p = pb.product();
  const Vec one = m2->unit_vector(), sx = el(*m2, "sx"), sz = el(*m2, "sz");
  const Vec h1 = 0.7 * sz, h2 = 0.4 * sz;

  // No coupling: factors evolve independently.
  const HamiltonianSystem single(quantum(m2), h1);
  const Vec a_t = coupled_evolution(pb, h1, h2, Vec::Zero(16), tensor_element(sx, one), 2.3);
  CHECK(diff(a_t, tensor_element(single.heisenberg(sx, 2.3), one)) < 1e-12);

  // Exchange coupling against a 4x4 Heisenberg-picture oracle.
  const double g = 0.35;
  const Vec h_int = g * tensor_element(sx, sx);
  const Mat hm = 0.7 * kron(pauli('z'), pauli('I')) + 0.4 * kron(pauli('I'), pauli('z')) +
                 g * kron(pauli('x'), pauli('x'));
  auto rep = [&](const Vec& x) {
    Mat m = Mat::Zero(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const cplx c = x(tensor_index(*m2, i, j));
        if (c != 0.0) m += c * kron(m2->represent(m2->basis_vector(i)), m2->represent(m2->basis_vector(j)));
      }
    return m;
  };
  const Vec obs = tensor_element(sz, one);
  for (double t : {0.5, 2.0, 7.5}) {
    const Mat u = Mat(hm * cplx(0, t)).exp();
    const Mat oracle = u * rep(obs) * u.adjoint();
    CHECK(diff(rep(coupled_evolution(pb, h1, h2, h_int, obs, t)), oracle) < 1e-10);
  }

  // Total sz is conserved under sz (x) sz coupling.
  const Vec h = coupled_hamiltonian(*p, h1, h2, tensor_element(sz, sz));
  const Vec total = tensor_element(sz, one) + tensor_element(one, sz);
  CHECK(linalg::max_abs(pb(total, h)) < 1e-12);
  const auto product_s = std::make_shared<const SymplecticStructure>(
      *tensor_verdict(s, s).structure);
  const HamiltonianSystem coupled(product_s, h);
  CHECK(check_symmetry(coupled, total, maximally_mixed(p), {1.0, 5.0}).ok());
}
