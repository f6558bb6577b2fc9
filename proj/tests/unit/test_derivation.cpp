#include <doctest.h>

#include "ncsymp/derivation.hpp"
#include "support.hpp"

using namespace test;

namespace {

int count_parity(const DerivationSpace& s, int p) {
  int n = 0;
  for (int a = 0; a < s.size(); ++a) n += s.parity(a) == p;
  return n;
}

}  // namespace

TEST_CASE("superderivation dimensions") {
  for (int n = 2; n <= 3; ++n) {
    const auto s = DerivationSpace::full(build_algebra("matrix:" + std::to_string(n)));
    CHECK(s->size() == n * n - 1);
    CHECK(count_parity(*s, 1) == 0);
  }
  // Der of a Grassmann algebra is fixed by the images of the n generators.
  for (int n = 1; n <= 3; ++n) {
    const auto s = DerivationSpace::full(build_algebra("grassmann:" + std::to_string(n)));
    CHECK(s->size() == n * (1 << n));
  }
  const auto l1 = DerivationSpace::full(build_algebra("grassmann:1"));
  CHECK(count_parity(*l1, 0) == 1);
  CHECK(count_parity(*l1, 1) == 1);
  CHECK(DerivationSpace::full(build_algebra("supermatrix:1|1"))->size() == 3);
}

TEST_CASE("basis elements obey the graded Leibniz rule") {
  for (const char* name : {"matrix:2", "supermatrix:1|1", "grassmann:2"})
    for (const auto& x : sder_basis(build_algebra(name))) CHECK(leibniz_residual(x) < 1e-12);
}

TEST_CASE("inner derivations") {
  const auto m2 = build_algebra("matrix:2");
  CHECK(linalg::max_abs(inner(m2, m2->unit_vector()).m) < 1e-15);
  const Vec out = inner(m2, el(*m2, "sz"))(el(*m2, "sx"));
  CHECK(diff(out, cplx(0, 2) * el(*m2, "sy")) < 1e-14);

  std::mt19937_64 rng(13);
  for (const char* name : {"matrix:2", "supermatrix:1|1"}) {
    const auto alg = build_algebra(name);
    for (int k = 0; k < 10; ++k) {
      const Vec a = random_element(*alg, rng, static_cast<int>(rng() % 2));
      const Vec b = random_element(*alg, rng, static_cast<int>(rng() % 2));
      const auto lhs = bracket(inner(alg, a), inner(alg, b));
      CHECK(diff(lhs.m, inner(alg, alg->supercommutator(a, b)).m) < 1e-12);
    }
  }
  const auto m11 = build_algebra("supermatrix:1|1");
  CHECK_THROWS(inner(m11, Vec::Ones(m11->dim())));
}

TEST_CASE("derivation involution") {
  const auto m2 = build_algebra("matrix:2");
  const auto dx = inner(m2, el(*m2, "sx"));
  CHECK(diff(sder_star(dx).m, Mat(-dx.m)) < 1e-14);

  std::mt19937_64 rng(17);
  for (const char* name : {"matrix:2", "grassmann:2", "supermatrix:1|1"}) {
    const auto alg = build_algebra(name);
    const auto basis = sder_basis(alg);
    for (int k = 0; k < 10; ++k) {
      const auto& x = basis[rng() % basis.size()];
      const auto& y = basis[rng() % basis.size()];
      CHECK(diff(sder_star(sder_star(x)).m, x.m) < 1e-12);
      const Mat rhs = eta(x.parity, y.parity) * bracket(sder_star(x), sder_star(y)).m;
      CHECK(diff(sder_star(bracket(x, y)).m, rhs) < 1e-12);
      CHECK(leibniz_residual(sder_star(x)) < 1e-12);
    }
  }
}

TEST_CASE("star of inner derivations of odd elements") {
  const auto m11 = build_algebra("supermatrix:1|1");
  std::mt19937_64 rng(18);
  for (int k = 0; k < 5; ++k) {
    const Vec a = random_element(*m11, rng, 1), b = random_element(*m11, rng, 1);
    const auto da = inner(m11, a), db = inner(m11, b);
    CHECK(diff(sder_star(da).m, Mat(-inner(m11, m11->star(a)).m)) < 1e-12);
    // With (D_A)* = -D_{A*} the odd-odd bracket carries a sign.
    CHECK(diff(sder_star(bracket(da, db)).m, Mat(-bracket(sder_star(da), sder_star(db)).m)) < 1e-12);
  }
}

TEST_CASE("pushforward along *-isomorphisms") {
  const auto m2 = build_algebra("matrix:2");
  const Mat id = Mat::Identity(4, 4);
  const auto dz = inner(m2, el(*m2, "sz"));
  CHECK(diff(pushforward(m2, id, dz).m, dz.m) < 1e-15);

  Mat u(2, 2);
  const double c = std::cos(0.4), s = std::sin(0.4);
  u << c, cplx(0, s), cplx(0, s), c;
  const Mat phi = conjugation(*m2, u);
  CHECK(check_isomorphism(*m2, *m2, phi).ok());
  std::mt19937_64 rng(19);
  for (int k = 0; k < 10; ++k) {
    const Vec a = random_element(*m2, rng);
    const Vec b = random_element(*m2, rng);
    const auto da = inner(m2, a), db = inner(m2, b);
    CHECK(diff(pushforward(m2, phi, da).m, inner(m2, phi * a).m) < 1e-12);
    const auto lhs = pushforward(m2, phi, bracket(da, db));
    const auto rhs = bracket(pushforward(m2, phi, da), pushforward(m2, phi, db));
    CHECK(diff(lhs.m, rhs.m) < 1e-12);
  }
  Mat bad = phi;
  bad(1, 1) += 0.1;
  CHECK_FALSE(check_isomorphism(*m2, *m2, bad).ok());
}

TEST_CASE("tensor decomposition") {
  const auto m2 = build_algebra("matrix:2");
  const auto p = tensor_product(m2, m2);
  const Vec one = m2->unit_vector(), x = el(*m2, "sx"), z = el(*m2, "sz");

  const auto first = decompose_tensor(inner(p, tensor_element(x, one)));
  CHECK(linalg::max_abs(first.second.m) < 1e-12);
  CHECK(diff(first.first.m, inner(p, tensor_element(x, one)).m) < 1e-12);

  const auto second = decompose_tensor(inner(p, tensor_element(one, z)));
  CHECK(linalg::max_abs(second.first.m) < 1e-12);

  const auto mixed = decompose_tensor(inner(p, tensor_element(x, z)));
  CHECK(mixed.reconstruction < 1e-12);
  CHECK(linalg::max_abs(mixed.first.m) > 0.1);
  CHECK(linalg::max_abs(mixed.second.m) > 0.1);
}

TEST_CASE("derivation space coordinates and closure") {
  const auto m2 = build_algebra("matrix:2");
  const auto s = DerivationSpace::full(m2);
  std::mt19937_64 rng(23);
  const Vec x = random_vector(s->size(), rng), y = random_vector(s->size(), rng);
  CHECK(diff(s->coords(s->matrix(x)), x) < 1e-12);
  const Mat xy = graded_commutator(s->matrix(x), 0, s->matrix(y), 0);
  CHECK(diff(s->matrix(s->bracket(x, y)), xy) < 1e-12);
  CHECK_FALSE(s->try_coords(Mat::Identity(4, 4)).has_value());
  CHECK(s->star_matrix() != nullptr);
  CHECK(DerivationSpace::full(m2).get() == s.get());
}
