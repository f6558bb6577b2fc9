#include <doctest.h>

#include "support.hpp"

using namespace test;

TEST_CASE("matrix algebra products match 2x2 matrix multiplication") {
  const auto m2 = build_algebra("matrix:2");
  const cplx i(0, 1);
  CHECK(diff(m2->mul(el(*m2, "sx"), el(*m2, "sy")), i * el(*m2, "sz")) < 1e-14);
  for (int a = 0; a < m2->dim(); ++a)
    for (int b = 0; b < m2->dim(); ++b) {
      const Mat prod = m2->represent(m2->basis_vector(a)) * m2->represent(m2->basis_vector(b));
      CHECK(diff(m2->represent(m2->mul(m2->basis_vector(a), m2->basis_vector(b))), prod) < 1e-14);
    }
}

TEST_CASE("unit law and nilpotent generators") {
  std::mt19937_64 rng(7);
  for (const char* name : {"matrix:3", "supermatrix:1|1", "grassmann:3"}) {
    const auto alg = build_algebra(name);
    const Vec a = random_element(*alg, rng);
    CHECK(diff(alg->mul(alg->unit_vector(), a), a) < 1e-14);
    CHECK(diff(alg->mul(a, alg->unit_vector()), a) < 1e-14);
  }
  const auto g2 = build_algebra("grassmann:2");
  const Vec t1 = el(*g2, "t1");
  CHECK(linalg::max_abs(g2->mul(t1, t1)) < 1e-15);
}

TEST_CASE("supercommutator") {
  const auto m2 = build_algebra("matrix:2");
  const cplx i(0, 1);
  const Mat oracle = pauli('x') * pauli('y') - pauli('y') * pauli('x');
  CHECK(diff(m2->represent(m2->supercommutator(el(*m2, "sx"), el(*m2, "sy"))), oracle) < 1e-14);
  CHECK(diff(m2->supercommutator(el(*m2, "sx"), el(*m2, "sy")), 2.0 * i * el(*m2, "sz")) < 1e-14);

  std::mt19937_64 rng(11);
  const Vec a = random_element(*m2, rng);
  CHECK(linalg::max_abs(m2->supercommutator(a, m2->unit_vector())) < 1e-14);

  const auto g2 = build_algebra("grassmann:2");
  CHECK(linalg::max_abs(g2->supercommutator(el(*g2, "t1"), el(*g2, "t2"))) < 1e-15);
  CHECK(g2->is_supercommutative());
  CHECK_FALSE(m2->is_supercommutative());
}

TEST_CASE("graded center dimensions") {
  CHECK(graded_center(*build_algebra("matrix:2")).cols() == 1);
  CHECK(graded_center(*build_algebra("matrix:3")).cols() == 1);
  for (int n = 1; n <= 3; ++n)
    CHECK(graded_center(*build_algebra("grassmann:" + std::to_string(n))).cols() == (1 << n));
  const auto m2 = build_algebra("matrix:2");
  CHECK(graded_center(*tensor_product(m2, m2)).cols() == 1);
}

TEST_CASE("involution") {
  const auto m2 = build_algebra("matrix:2");
  const cplx i(0, 1);
  CHECK(diff(m2->star(i * m2->unit_vector()), -i * m2->unit_vector()) < 1e-15);
  CHECK(diff(m2->represent(m2->star(el(*m2, "sx"))), pauli('x').adjoint()) < 1e-15);

  std::mt19937_64 rng(5);
  for (const char* name : {"matrix:2", "supermatrix:1|1", "grassmann:2"}) {
    const auto alg = build_algebra(name);
    for (int k = 0; k < 20; ++k) {
      const Vec a = random_element(*alg, rng, static_cast<int>(rng() % 2));
      const Vec b = random_element(*alg, rng, static_cast<int>(rng() % 2));
      CHECK(diff(alg->star(alg->mul(a, b)), alg->mul(alg->star(b), alg->star(a))) < 1e-13);
      CHECK(diff(alg->star(alg->star(a)), a) < 1e-14);
    }
  }
}

TEST_CASE("axioms hold for every builder") {
  for (const char* name : {"matrix:2", "matrix:3", "supermatrix:1|1", "supermatrix:2|1", "grassmann:1", "grassmann:3"})
    CHECK_MESSAGE(verify_axioms(*build_algebra(name)).ok(), name);
  CHECK_THROWS_AS(build_algebra("matrix:0"), SpecError);
  CHECK_THROWS_AS(build_algebra("octonion:8"), SpecError);
}

TEST_CASE("graded tensor product") {
  const auto m2 = build_algebra("matrix:2");
  const auto p = tensor_product(m2, m2);
  CHECK(p->dim() == 16);
  CHECK(verify_axioms(*p).ok());

  const auto l1 = build_algebra("grassmann:1");
  const auto q = tensor_product(l1, l1);
  CHECK(q->dim() == 4);
  const Vec one = l1->unit_vector(), th = el(*l1, "t1");
  const Vec th_i = tensor_element(th, one), i_th = tensor_element(one, th);
  CHECK(diff(q->mul(th_i, i_th), -q->mul(i_th, th_i)) < 1e-15);
  CHECK(diff(q->mul(th_i, i_th), tensor_element(th, th)) < 1e-15);

  std::mt19937_64 rng(3);
  const Vec a = random_element(*m2, rng), b = random_element(*m2, rng);
  CHECK(diff(p->mul(tensor_element(a, m2->unit_vector()), tensor_element(m2->unit_vector(), b)), tensor_element(a, b)) <
        1e-14);
}

TEST_CASE("element value type") {
  const auto m2 = build_algebra("matrix:2");
  const Element x = Element::basis(m2, m2->index_of("sx"));
  const Element y = Element::basis(m2, m2->index_of("sy"));
  const Element p = x * y;
  CHECK(diff(p.c, cplx(0, 1) * el(*m2, "sz")) < 1e-15);
  CHECK(x.parity() == 0);
  CHECK(diff((x + y - y).c, x.c) < 1e-15);
}
