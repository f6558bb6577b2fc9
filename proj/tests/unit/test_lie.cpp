#include <doctest.h>

#include "ncsymp/lie.hpp"
#include "support.hpp"

using namespace test;

namespace {

SymplecticStructure m2_quantum() { return make_symplectic(quantum_form(build_algebra("matrix:2"))); }

}  // namespace

TEST_CASE("structure constants") {
  CHECK(verify_lie_algebra(LieAlgebra::su2()).ok());
  CHECK(verify_lie_algebra(LieAlgebra::abelian(3)).ok());
  LieAlgebra bad(3);
  bad.set(0, 1, 2, 1.0);
  bad.set(1, 2, 2, 1.0);
  bad.set(0, 2, 1, 1.0);
  CHECK_FALSE(verify_lie_algebra(bad).ok());
  const auto su2 = LieAlgebra::su2();
  CHECK(diff(su2.bracket(Vec::Unit(3, 0), Vec::Unit(3, 1)), Vec(Vec::Unit(3, 2))) < 1e-15);
}

TEST_CASE("su(2) acting through Pauli hamiltonians") {
  const auto s = m2_quantum();
  const auto act = su2_pauli_action(s);
  const auto v = verify_action(act, s);
  CHECK(v.homomorphism);
  CHECK(v.locally_hamiltonian);
  CHECK(v.hamiltonian);
  CHECK(v.poisson);
  // {h_a, h_b} = i [h_a, h_b] with h = sigma / 2 gives -eps_abc h_c.
  const auto& h = *act.hamiltonians;
  CHECK(diff(s.bracket(h[0], h[1]), Vec(-h[2])) < 1e-13);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) CHECK(std::abs(act.g.structure(a, b, c) - LieAlgebra::su2(-1.0).structure(a, b, c)) == 0.0);

  const auto c = obstruction_cocycle(act.g, h, s);
  CHECK(c.report.ok());
  REQUIRE(c.scalar.has_value());
  CHECK(linalg::max_abs(*c.scalar) < 1e-13);
}

TEST_CASE("the opposite sign is not a Poisson action") {
  const auto s = m2_quantum();
  const auto m2 = build_algebra("matrix:2");
  LieAlgebraAction act{LieAlgebra::su2(1.0), {}, std::vector<Vec>{}};
  for (const char* l : {"sx", "sy", "sz"}) {
    act.hamiltonians->push_back(0.5 * el(*m2, l));
    act.generators.push_back(s.hamiltonian(0.5 * el(*m2, l)));
  }
  const auto v = verify_action(act, s);
  CHECK_FALSE(v.homomorphism);
  CHECK_FALSE(v.poisson);
}

TEST_CASE("trivial action") {
  const auto s = m2_quantum();
  const auto m2 = build_algebra("matrix:2");
  LieAlgebraAction act{LieAlgebra::abelian(2), {}, std::nullopt};
  for (int a = 0; a < 2; ++a) act.generators.push_back(Superderivation{m2, Mat::Zero(4, 4), 0});
  const auto v = verify_action(act, s);
  CHECK(v.poisson);
  for (const auto& h : v.hamiltonians) CHECK(linalg::max_abs(h) < 1e-13);
}

TEST_CASE("shifting hamiltonians changes the obstruction by a coboundary") {
  const auto s = m2_quantum();
  const auto m2 = build_algebra("matrix:2");
  const auto act = su2_pauli_action(s);
  std::mt19937_64 rng(89);
  for (int k = 0; k < 5; ++k) {
    Eigen::VectorXd beta = Eigen::VectorXd::Random(3);
    std::vector<Vec> shifted = *act.hamiltonians;
    for (int a = 0; a < 3; ++a) shifted[a] += beta(a) * m2->unit_vector();
    const auto c0 = obstruction_cocycle(act.g, *act.hamiltonians, s);
    const auto c1 = obstruction_cocycle(act.g, shifted, s);
    CHECK(c1.report.ok());
    const Mat cb = coboundary(act.g, beta.cast<cplx>());
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        CHECK(std::abs((*c1.scalar)(a, b) - (*c0.scalar)(a, b) - cb(a, b)) < 1e-12);
        // The coboundary of beta is -beta([a, b]).
        CHECK(std::abs(cb(a, b) + act.g.bracket(Vec::Unit(3, a), Vec::Unit(3, b)).dot(beta.cast<cplx>())) < 1e-12);
      }
  }
}

TEST_CASE("cocycle identity on random redefinitions") {
  const auto s = m2_quantum();
  const auto m2 = build_algebra("matrix:2");
  const auto act = su2_pauli_action(s);
  std::mt19937_64 rng(97);
  for (int k = 0; k < 5; ++k) {
    std::vector<Vec> h = *act.hamiltonians;
    for (auto& x : h) x += cplx(std::uniform_real_distribution<double>(-2, 2)(rng)) * m2->unit_vector();
    CHECK(obstruction_cocycle(act.g, h, s).report.ok());
  }
}

TEST_CASE("neutral elements") {
  const auto s = m2_quantum();
  const auto m2 = build_algebra("matrix:2");
  CHECK(is_neutral(s, cplx(2.5) * m2->unit_vector()));
  CHECK_FALSE(is_neutral(s, el(*m2, "sx")));
}

TEST_CASE("second cohomology") {
  const auto su2 = ce_cohomology_h2(LieAlgebra::su2());
  CHECK(su2.dim == 0);
  CHECK(su2.cocycles == 3);
  CHECK(su2.coboundaries == 3);
  CHECK(su2.d_squared < 1e-14);
  const auto r2 = ce_cohomology_h2(LieAlgebra::abelian(2));
  CHECK(r2.dim == 1);
  CHECK(r2.representatives.size() == 1);
  CHECK(ce_cohomology_h2(LieAlgebra::abelian(1)).dim == 0);
  // Every antisymmetric form on an abelian algebra is a nontrivial cocycle.
  CHECK(ce_cohomology_h2(LieAlgebra::abelian(3)).dim == 3);
  CHECK(ce_cohomology_h2(LieAlgebra::abelian(4)).dim == 6);
}

TEST_CASE("central extensions") {
  const auto r2 = ce_cohomology_h2(LieAlgebra::abelian(2));
  const LieAlgebra heis = central_extension(LieAlgebra::abelian(2), r2.representatives);
  CHECK(heis.dim == 3);
  CHECK(verify_lie_algebra(heis).ok());
  CHECK(std::abs(heis.structure(0, 1, 2)) > 0.5);
  CHECK(linalg::max_abs(heis.ad(2)) == 0.0);

  const LieAlgebra same = central_extension(LieAlgebra::su2(), {});
  CHECK(same.dim == 3);
  for (int k = 0; k < 3; ++k) CHECK(diff(same.c[k], LieAlgebra::su2().c[k]) == 0.0);

  Vec beta(3);
  beta << 0.3, -0.7, 1.1;
  CHECK(check_coboundary_extension(LieAlgebra::su2(), beta).ok());

  // Every 2-cochain on su(2) is closed; on aff(1) + R the pairing of xi_1 with the center is not.
  LieAlgebra aff(3);
  aff.set(0, 1, 1, 1.0);
  Mat not_cocycle = Mat::Zero(3, 3);
  not_cocycle(1, 2) = 1.0;
  not_cocycle(2, 1) = -1.0;
  CHECK_THROWS_AS(central_extension(aff, {not_cocycle}), MathError);
}

TEST_CASE("momentum map") {
  const auto s = m2_quantum();
  const auto m2 = build_algebra("matrix:2");
  const auto act = su2_pauli_action(s);
  const auto& h = *act.hamiltonians;
  Vec up(2), down(2);
  up << 1.0, 0.0;
  down << 0.0, 1.0;
  const State pz = pure_state(m2, up), pd = pure_state(m2, down);
  Vec expect = Vec::Zero(3);
  expect(2) = 0.5;
  CHECK(diff(momentum_map(h, pz), expect) < 1e-14);
  CHECK(linalg::max_abs(momentum_map(h, maximally_mixed(m2))) < 1e-14);
  const State mix{m2, 0.3 * pz.values + 0.7 * pd.values};
  CHECK(diff(momentum_map(h, mix), Vec(0.3 * momentum_map(h, pz) + 0.7 * momentum_map(h, pd))) < 1e-14);
  std::mt19937_64 rng(101);
  for (int k = 0; k < 5; ++k)
    CHECK(momentum_equivariance_residual(act.g, h, s, pure_state(m2, random_vector(2, rng))) < 1e-12);
}

TEST_CASE("basis change") {
  const auto su2 = LieAlgebra::su2();
  Mat p = Mat::Identity(3, 3);
  p(0, 0) = 2.0;
  const auto g = change_basis(su2, p);
  CHECK(verify_lie_algebra(g).ok());
  // [2 xi_0, xi_1] = 2 xi_2.
  CHECK(std::abs(g.structure(0, 1, 2) - 2.0) < 1e-14);
}
