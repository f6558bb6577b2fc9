#include <doctest.h>

#include "ncsymp/symplectic.hpp"
#include "support.hpp"

using namespace test;

namespace {

Vec coords_of_inner(const DerivationSpace& s, const AlgebraPtr& alg, const Vec& a) {
  return s.coords(inner(alg, a).m);
}

const char* const kAlgebras[] = {"matrix:2", "grassmann:2", "supermatrix:1|1"};

}  // namespace

TEST_CASE("canonical form values") {
  const auto m2 = build_algebra("matrix:2");
  const Form w = canonical_form(m2);
  const auto& s = *w.space();
  const Vec dx = coords_of_inner(s, m2, el(*m2, "sx"));
  const Vec dy = coords_of_inner(s, m2, el(*m2, "sy"));
  CHECK(diff(w.evaluate({dx, dy}), cplx(0, 2) * el(*m2, "sz")) < 1e-13);
  CHECK(linalg::max_abs(w.evaluate({dx, dx})) < 1e-13);
  CHECK(linalg::max_abs(w.at({0, 0})) == 0.0);
  for (int slot = 0; slot < w.slots(); ++slot) {
    const int* t = w.layout().tuple(slot);
    CHECK(diff(w.at(t), w.comps().col(slot)) == 0.0);
  }
}

TEST_CASE("wedge product") {
  std::mt19937_64 rng(29);
  for (const char* name : kAlgebras) {
    const auto alg = build_algebra(name);
    const auto sp = DerivationSpace::full(alg);
    const Vec a = random_element(*alg, rng, 0);
    const Form beta = random_form(sp, 1, 0, rng);
    const Form ab = wedge(Form::scalar(sp, a), beta);
    for (int i = 0; i < sp->size(); ++i) CHECK(diff(ab.at({i}), alg->mul(a, beta.at({i}))) < 1e-13);
  }
  const auto m2 = build_algebra("matrix:2");
  const auto sp = DerivationSpace::full(m2);
  const Form alpha = random_form(sp, 1, 0, rng), beta = random_form(sp, 1, 0, rng);
  const Form w = wedge(alpha, beta);
  for (int i = 0; i < sp->size(); ++i)
    for (int j = 0; j < sp->size(); ++j) {
      const Vec oracle = m2->mul(alpha.at({i}), beta.at({j})) - m2->mul(alpha.at({j}), beta.at({i}));
      CHECK(diff(w.at({i, j}), oracle) < 1e-13);
    }
  // Values in a commutative subalgebra: alpha ^ alpha vanishes on the diagonal.
  Form c(sp, 1, 0);
  for (int i = 0; i < sp->size(); ++i) c.comps().col(i) = (0.3 + i) * el(*m2, "sz") + cplx(0.1 * i) * m2->unit_vector();
  const Form cc = wedge(c, c);
  for (int i = 0; i < sp->size(); ++i) CHECK(linalg::max_abs(cc.at({i, i})) < 1e-14);
}

TEST_CASE("exterior derivative of 0-forms and of w_c") {
  std::mt19937_64 rng(31);
  for (const char* name : kAlgebras) {
    const auto alg = build_algebra(name);
    const auto sp = DerivationSpace::full(alg);
    for (int p = 0; p < 2; ++p) {
      const Vec a = random_element(*alg, rng, p);
      const Form da = exterior_derivative(Form::scalar(sp, a));
      for (int i = 0; i < sp->size(); ++i)
        CHECK(diff(da.at({i}), eta(sp->parity(i), p) * ((*sp)[i](a))) < 1e-13);
    }
  }
  const auto m2 = build_algebra("matrix:2");
  CHECK(exterior_derivative(canonical_form(m2)).max_abs() < 1e-13);
}

TEST_CASE("Lie derivative and interior product") {
  const auto m2 = build_algebra("matrix:2");
  const Form w = canonical_form(m2);
  const auto sp = w.space();
  for (int a = 0; a < sp->size(); ++a) CHECK(lie_derivative(Vec::Unit(sp->size(), a), 0, w).max_abs() < 1e-13);

  std::mt19937_64 rng(37);
  for (const char* name : kAlgebras) {
    const auto alg = build_algebra(name);
    const auto s = DerivationSpace::full(alg);
    for (int py = 0; py < 2; ++py) {
      const Vec y = random_derivation(*s, rng, py);
      const Vec a = random_element(*alg, rng, 0);
      const Form la = lie_derivative(y, py, Form::scalar(s, a));
      CHECK(diff(la.at(std::vector<int>{}), s->matrix(y) * a) < 1e-13);
      CHECK(interior(y, py, Form::scalar(s, a)).max_abs() == 0.0);
    }
    for (int k = 0; k < 8; ++k) {
      const int p = 1 + static_cast<int>(rng() % 2), wp = static_cast<int>(rng() % 2);
      const int px = static_cast<int>(rng() % 2), py = static_cast<int>(rng() % 2);
      const Form om = random_form(s, p, wp, rng);
      const Vec x = random_derivation(*s, rng, px), y = random_derivation(*s, rng, py);
      const Form lhs = lie_derivative(y, py, interior(x, px, om)) - interior(x, px, lie_derivative(y, py, om));
      const Form rhs = interior(s->bracket(y, x), (px + py) % 2, om) * cplx(eta(py, wp));
      CHECK((lhs - rhs).max_abs() < 1e-12);
    }
  }
  for (int i = 0; i < m2->dim(); ++i) {
    const Vec a = m2->basis_vector(i);
    const Form lhs = interior(coords_of_inner(*sp, m2, a), 0, w);
    const Form rhs = exterior_derivative(Form::scalar(sp, a)) * cplx(-1.0);
    CHECK((lhs - rhs).max_abs() < 1e-13);
  }
}

TEST_CASE("calculus identities on random data") {
  std::mt19937_64 rng(41);
  const auto m2 = build_algebra("matrix:2");
  std::vector<AlgebraPtr> algs{m2, build_algebra("grassmann:2"), build_algebra("supermatrix:1|1"),
                               tensor_product(m2, m2)};
  for (const auto& alg : algs) {
    const auto sp = DerivationSpace::full(alg);
    for (int k = 0; k < 6; ++k) {
      const int p = static_cast<int>(rng() % 3), wp = static_cast<int>(rng() % 2);
      const int px = static_cast<int>(rng() % 2), py = static_cast<int>(rng() % 2);
      const Form w = random_form(sp, p, wp, rng);
      const Vec x = random_derivation(*sp, rng, px), y = random_derivation(*sp, rng, py);
      const Form b = random_form(sp, 1, static_cast<int>(rng() % 2), rng);
      CHECK(d_squared_residual(w) < 1e-11);
      CHECK(cartan_residual(x, px, w) < 1e-11);
      CHECK(lie_bracket_residual(x, px, y, py, w) < 1e-11);
      CHECK(d_leibniz_residual(w, b) < 1e-11);
    }
  }
}

TEST_CASE("pullback") {
  const auto m2 = build_algebra("matrix:2");
  const auto sp = DerivationSpace::full(m2);
  const Form w = canonical_form(m2);
  CHECK((pullback(Mat::Identity(4, 4), sp, w) - w).max_abs() < 1e-13);

  Mat u(2, 2);
  u << std::cos(0.7), -std::sin(0.7), std::sin(0.7), std::cos(0.7);
  const Mat phi = conjugation(*m2, u);
  std::mt19937_64 rng(43);
  for (int k = 0; k < 5; ++k) {
    const Form alpha = random_form(sp, 1, 0, rng);
    const Form lhs = pullback(phi, sp, exterior_derivative(alpha));
    const Form rhs = exterior_derivative(pullback(phi, sp, alpha));
    CHECK((lhs - rhs).max_abs() < 1e-12);
  }
  const auto s = make_symplectic(quantum_form(m2));
  CHECK(check_infinitesimal_pullback(s.omega(), s.hamiltonian_coords(el(*m2, "sx"))).ok());
  const Form alpha = random_form(sp, 2, 0, rng);
  CHECK(check_infinitesimal_pullback(alpha, s.hamiltonian_coords(el(*m2, "sy"))).ok());
}

TEST_CASE("form involution") {
  const auto m2 = build_algebra("matrix:2");
  const Form wc = canonical_form(m2);
  CHECK((form_star(wc) + wc).max_abs() < 1e-13);
  const Form wq = quantum_form(m2, 1.0);
  CHECK((form_star(wq) - wq).max_abs() < 1e-13);
  std::mt19937_64 rng(47);
  for (const char* name : kAlgebras) {
    const auto sp = DerivationSpace::full(build_algebra(name));
    for (int p = 0; p < 3; ++p) {
      const Form w = random_form(sp, p, static_cast<int>(rng() % 2), rng);
      CHECK((form_star(form_star(w)) - w).max_abs() < 1e-12);
    }
  }
}

TEST_CASE("center linearity") {
  std::mt19937_64 rng(53);
  const auto m2 = build_algebra("matrix:2");
  CHECK(check_center_linearity(random_form(DerivationSpace::full(m2), 2, 0, rng)).ok());

  const auto g2 = build_algebra("grassmann:2");
  Form w = fermionic_form(g2, Mat::Identity(2, 2) * cplx(0, 1));
  CHECK(check_center_linearity(w).ok());
  w.comps()(0, w.slots() - 1) += 0.25;
  CHECK_FALSE(check_center_linearity(w).ok());
}

TEST_CASE("layout locates permuted tuples") {
  const Layout l({0, 0, 1, 1}, 2);
  const int a[] = {1, 0}, b[] = {0, 1}, rep_even[] = {1, 1}, rep_odd[] = {2, 2}, mixed[] = {3, 2};
  CHECK(l.locate(a).slot == l.locate(b).slot);
  CHECK(l.locate(a).sign == -l.locate(b).sign);
  CHECK(l.locate(rep_even).sign == 0);
  CHECK(l.locate(rep_odd).sign == 1);
  CHECK(l.locate(mixed).sign == 1);
  CHECK_THROWS_AS(Form(DerivationSpace::full(build_algebra("matrix:2")), 4, 0), SpecError);
}
