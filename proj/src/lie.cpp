#include "ncsymp/lie.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace ncsymp {

namespace {

std::vector<std::pair<int, int>> pairs_of(int n) {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) out.emplace_back(a, b);
  return out;
}

int pair_index(int n, int a, int b) {
  // Position of (a, b), a < b, in pairs_of(n).
  return a * n - a * (a + 1) / 2 + (b - a - 1);
}

// Value of the antisymmetric 2-cochain m on (a, b).
cplx cochain_at(int n, const Vec& m, int a, int b) {
  if (a == b) return 0.0;
  return a < b ? m(pair_index(n, a, b)) : -m(pair_index(n, b, a));
}

Mat antisymmetric_matrix(int n, const Vec& m) {
  Mat out = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out(a, b) = cochain_at(n, m, a, b);
  return out;
}

}  // namespace

LieAlgebra::LieAlgebra(int n) : dim(n), c(n, Mat::Zero(n, n)) {}

void LieAlgebra::set(int a, int b, int k, cplx v) {
  c[k](a, b) = v;
  c[k](b, a) = -v;
}

Vec LieAlgebra::bracket(const Vec& x, const Vec& y) const {
  Vec out(dim);
  for (int k = 0; k < dim; ++k) out(k) = x.transpose() * c[k] * y;
  return out;
}

Mat LieAlgebra::ad(int a) const {
  Mat out(dim, dim);
  for (int k = 0; k < dim; ++k) out.row(k) = c[k].row(a);
  return out;
}

LieAlgebra LieAlgebra::abelian(int n) { return LieAlgebra(n); }

LieAlgebra LieAlgebra::su2(double sign) {
  LieAlgebra g(3);
  g.set(0, 1, 2, sign);
  g.set(1, 2, 0, sign);
  g.set(2, 0, 1, sign);
  return g;
}

Report verify_lie_algebra(const LieAlgebra& g, double tol) {
  Report r;
  r.title = "lie-algebra";
  double anti = 0.0;
  for (const auto& ck : g.c) anti = std::max(anti, linalg::max_abs(Mat(ck + ck.transpose())));
  r.add(make_check("antisymmetry", "C_ab^c = -C_ba^c", anti, tol));
  double jac = 0.0;
  const int n = g.dim;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d)
        for (int e = 0; e < n; ++e) {
          cplx s = 0.0;
          for (int k = 0; k < n; ++k)
            s += g.structure(a, b, k) * g.structure(k, d, e) + g.structure(b, d, k) * g.structure(k, a, e) +
                 g.structure(d, a, k) * g.structure(k, b, e);
          jac = std::max(jac, std::abs(s));
        }
  r.add(make_check("jacobi", "[[a,b],c] + [[b,c],a] + [[c,a],b] = 0", jac, tol));
  r.data["dim"] = n;
  return r;
}

LieAlgebra change_basis(const LieAlgebra& g, const Mat& p) {
  const int n = g.dim;
  const Mat pinv = p.inverse();
  LieAlgebra out(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Vec br = pinv * g.bracket(p.col(a), p.col(b));
      for (int k = 0; k < n; ++k) out.c[k](a, b) = br(k);
    }
  return out;
}

LieAlgebraAction su2_pauli_action(const SymplecticStructure& s, double hbar) {
  const auto& alg = s.algebra();
  if (!alg.model() || alg.model()->basis.front().rows() != 2)
    throw SpecError("the su(2) Pauli action needs a 2x2 matrix model");
  Mat sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, cplx(0, -1), cplx(0, 1), 0;
  sz << 1, 0, 0, -1;
  LieAlgebraAction act{LieAlgebra::su2(-1.0), {}, std::vector<Vec>{}};
  for (const Mat* m : {&sx, &sy, &sz}) {
    const Vec h = alg.from_matrix(*m * cplx(hbar / 2.0));
    act.hamiltonians->push_back(h);
    act.generators.push_back(s.hamiltonian(h));
  }
  return act;
}

bool is_neutral(const SymplecticStructure& s, const Vec& a, double tol) {
  return linalg::max_abs(s.hamiltonian_coords(a)) <= tol * std::max(1.0, linalg::max_abs(a));
}

ActionVerdict verify_action(const LieAlgebraAction& action, const SymplecticStructure& s, double tol) {
  ActionVerdict v;
  auto& r = v.report;
  r.title = "lie-action";
  const auto& g = action.g;
  const auto& alg = s.algebra();
  const auto& space = *s.space();
  r.append(verify_lie_algebra(g, tol), "lie");
  if (static_cast<int>(action.generators.size()) != g.dim)
    throw SpecError("action needs one generator per Lie algebra basis element");

  double odd = 0.0;
  for (const auto& z : action.generators) odd = std::max(odd, z.parity == 0 ? 0.0 : 1.0);
  r.add(make_flag("generators-even", "|Z_a| = 0", odd == 0.0));

  double hom = 0.0;
  for (int a = 0; a < g.dim; ++a)
    for (int b = 0; b < g.dim; ++b) {
      Mat diff = graded_commutator(action.generators[a].m, 0, action.generators[b].m, 0);
      for (int k = 0; k < g.dim; ++k) diff -= g.structure(a, b, k) * action.generators[k].m;
      hom = std::max(hom, linalg::max_abs(diff));
    }
  r.add(make_check("homomorphism", "[Z_a, Z_b] = C_ab^c Z_c", hom, tol));
  v.homomorphism = hom <= tol;

  std::vector<Vec> zc;
  double local = 0.0;
  bool in_span = true;
  for (const auto& z : action.generators) {
    double res = 0.0;
    auto c = space.try_coords(z.m, &res);
    if (!c) {
      in_span = false;
      zc.push_back(Vec::Zero(space.size()));
      continue;
    }
    zc.push_back(*c);
    local = std::max(local, lie_derivative(*c, 0, s.omega()).max_abs());
  }
  r.add(make_flag("in-derivation-space", "Z_a lies in the derivation space of w", in_span));
  r.add(make_check("locally-hamiltonian", "L_{Z_a} w = 0", local, tol));
  v.locally_hamiltonian = in_span && local <= tol;

  if (action.hamiltonians) {
    if (static_cast<int>(action.hamiltonians->size()) != g.dim)
      throw SpecError("action needs one hamiltonian per Lie algebra basis element");
    v.hamiltonians = *action.hamiltonians;
    double res = 0.0;
    for (int a = 0; a < g.dim; ++a)
      res = std::max(res, linalg::max_abs(Vec(s.hamiltonian_coords(v.hamiltonians[a]) - zc[a])));
    r.add(make_check("hamiltonians", "Y_{h_a} = Z_a", res, tol));
    v.hamiltonian = in_span && res <= tol;
  } else {
    Mat ham(space.size(), alg.dim());
    for (int i = 0; i < alg.dim(); ++i) ham.col(i) = s.hamiltonian_coords(alg.basis_vector(i));
    const linalg::Solver solver(ham, tol);
    double res = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      const auto ls = solver.solve(zc[a]);
      res = std::max(res, ls.residual);
      v.hamiltonians.push_back(ls.x);
    }
    r.add(make_check("hamiltonians-solved", "i_{Z_a} w = -d h_a", res, 1e3 * tol,
                     "minimum-norm solution, defined up to neutral elements"));
    v.hamiltonian = in_span && res <= 1e3 * tol;
  }

  double pois = 0.0;
  for (int a = 0; a < g.dim; ++a)
    for (int b = 0; b < g.dim; ++b) {
      Vec d = s.bracket(v.hamiltonians[a], v.hamiltonians[b]);
      for (int k = 0; k < g.dim; ++k) d -= g.structure(a, b, k) * v.hamiltonians[k];
      pois = std::max(pois, linalg::max_abs(d));
    }
  r.data["poisson_residual"] = fmt_double(pois);
  v.poisson = v.hamiltonian && pois <= tol;
  r.data["poisson"] = v.poisson;
  json hs = json::array();
  for (const auto& h : v.hamiltonians) {
    json e = json::object();
    for (int i = 0; i < alg.dim(); ++i)
      if (std::abs(h(i)) > tol) e[alg.label(i)] = scalar_json(h(i));
    hs.push_back(e);
  }
  r.data["hamiltonians"] = hs;
  return v;
}

Cocycle2 obstruction_cocycle(const LieAlgebra& g, const std::vector<Vec>& h, const SymplecticStructure& s,
                             double tol) {
  const int n = g.dim;
  const auto& alg = s.algebra();
  if (static_cast<int>(h.size()) != n) throw SpecError("one hamiltonian per Lie algebra basis element required");
  Cocycle2 c;
  c.dim = n;
  c.values.resize(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Vec v = s.bracket(h[a], h[b]);
      for (int k = 0; k < n; ++k) v -= g.structure(a, b, k) * h[k];
      c.values[static_cast<size_t>(a) * n + b] = v;
    }
  auto& r = c.report;
  r.title = "obstruction-cocycle";
  double neutral = 0.0;
  for (const auto& v : c.values) neutral = std::max(neutral, linalg::max_abs(s.hamiltonian_coords(v)));
  r.add(make_check("neutral", "Y_{alpha(a,b)} = 0", neutral, tol));

  double cyc = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int e = 0; e < n; ++e) {
        Vec sum = Vec::Zero(alg.dim());
        for (int k = 0; k < n; ++k)
          sum += g.structure(a, b, k) * c.at(k, e) + g.structure(b, e, k) * c.at(k, a) +
                 g.structure(e, a, k) * c.at(k, b);
        cyc = std::max(cyc, linalg::max_abs(sum));
      }
  r.add(make_check("cocycle", "alpha([a,b],c) + alpha([b,c],a) + alpha([c,a],b) = 0", cyc, tol));

  const Vec unit = alg.unit_vector();
  Mat scalar(n, n);
  bool is_scalar = true;
  for (int a = 0; a < n && is_scalar; ++a)
    for (int b = 0; b < n; ++b) {
      const Vec& v = c.at(a, b);
      scalar(a, b) = v(alg.unit());
      if (linalg::max_abs(Vec(v - scalar(a, b) * unit)) > tol) {
        is_scalar = false;
        break;
      }
    }
  if (is_scalar) c.scalar = scalar;
  r.data["scalar"] = is_scalar;
  if (is_scalar) {
    json m = json::array();
    for (int a = 0; a < n; ++a) {
      json row = json::array();
      for (int b = 0; b < n; ++b) row.push_back(scalar_json(scalar(a, b), tol));
      m.push_back(row);
    }
    r.data["alpha"] = m;
  }
  return c;
}

Mat coboundary(const LieAlgebra& g, const Vec& beta) {
  Mat out(g.dim, g.dim);
  for (int a = 0; a < g.dim; ++a)
    for (int b = 0; b < g.dim; ++b) {
      cplx v = 0.0;
      for (int k = 0; k < g.dim; ++k) v -= g.structure(a, b, k) * beta(k);
      out(a, b) = v;
    }
  return out;
}

H2Result ce_cohomology_h2(const LieAlgebra& g, double tol) {
  const int n = g.dim;
  const auto pairs = pairs_of(n);
  std::vector<std::array<int, 3>> triples;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int e = b + 1; e < n; ++e) triples.push_back({a, b, e});
  const int np = static_cast<int>(pairs.size());
  const int nt = static_cast<int>(triples.size());

  H2Result out;
  out.d1 = Mat::Zero(np, n);
  for (int p = 0; p < np; ++p)
    for (int k = 0; k < n; ++k) out.d1(p, k) = -g.structure(pairs[p].first, pairs[p].second, k);
  out.d2 = Mat::Zero(nt, np);
  for (int t = 0; t < nt; ++t) {
    const auto [a, b, e] = triples[t];
    for (int p = 0; p < np; ++p) {
      Vec m = Vec::Zero(np);
      m(p) = 1.0;
      cplx v = 0.0;
      for (int k = 0; k < n; ++k)
        v += g.structure(a, b, k) * cochain_at(n, m, k, e) + g.structure(b, e, k) * cochain_at(n, m, k, a) +
             g.structure(e, a, k) * cochain_at(n, m, k, b);
      out.d2(t, p) = -v;
    }
  }
  if (np == 0) return out;
  out.d_squared = nt > 0 ? linalg::max_abs(Mat(out.d2 * out.d1)) : 0.0;

  const Mat z = nt > 0 ? linalg::null_space(out.d2, tol) : Mat(Mat::Identity(np, np));
  out.cocycles = static_cast<int>(z.cols());
  out.coboundaries = linalg::max_abs(out.d1) > tol ? linalg::rank(out.d1, tol) : 0;
  out.dim = out.cocycles - out.coboundaries;
  if (out.dim <= 0) return out;

  Mat proj = Mat::Identity(np, np);
  if (out.coboundaries > 0) {
    const Mat b = linalg::canonical_basis(out.d1, tol);
    proj -= b * b.adjoint();
  }
  const Mat reps = linalg::canonical_basis(Mat(proj * z), tol);
  for (Eigen::Index r = 0; r < reps.cols(); ++r) out.representatives.push_back(antisymmetric_matrix(n, reps.col(r)));
  return out;
}

LieAlgebra central_extension(const LieAlgebra& g, const std::vector<Mat>& eta, double tol) {
  const int n = g.dim;
  const int m = static_cast<int>(eta.size());
  LieAlgebra out(n + m);
  for (int k = 0; k < n; ++k) out.c[k].topLeftCorner(n, n) = g.c[k];
  for (int r = 0; r < m; ++r) {
    if (eta[r].rows() != n || eta[r].cols() != n) throw SpecError("cocycle representative has the wrong size");
    out.c[n + r].topLeftCorner(n, n) = eta[r];
  }
  const Report jr = verify_lie_algebra(out, tol);
  if (!jr.ok()) throw MathError("central extension fails the Lie algebra axioms: a representative is not a cocycle");
  return out;
}

Report check_coboundary_extension(const LieAlgebra& g, const Vec& beta, double tol) {
  const int n = g.dim;
  Report r;
  r.title = "coboundary-extension";
  const LieAlgebra ext = central_extension(g, {coboundary(g, beta)}, tol);
  Mat p = Mat::Identity(n + 1, n + 1);
  for (int a = 0; a < n; ++a) p(n, a) = -beta(a);
  const LieAlgebra shifted = change_basis(ext, p);
  LieAlgebra split(n + 1);
  for (int k = 0; k < n; ++k) split.c[k].topLeftCorner(n, n) = g.c[k];
  double res = 0.0;
  for (int k = 0; k <= n; ++k) res = std::max(res, linalg::max_abs(Mat(shifted.c[k] - split.c[k])));
  r.add(make_check("split", "xi'_a = xi_a - beta_a M gives [xi'_a, xi'_b] = C_ab^c xi'_c, M central", res, tol));
  return r;
}

Vec momentum_map(const std::vector<Vec>& h, const State& phi) {
  Vec out(static_cast<Eigen::Index>(h.size()));
  for (size_t a = 0; a < h.size(); ++a) out(static_cast<Eigen::Index>(a)) = phi.expectation(h[a]);
  return out;
}

double momentum_equivariance_residual(const LieAlgebra& g, const std::vector<Vec>& h,
                                      const SymplecticStructure& s, const State& phi) {
  const Vec mu = momentum_map(h, phi);
  double worst = 0.0;
  for (int a = 0; a < g.dim; ++a)
    for (int b = 0; b < g.dim; ++b) {
      cplx rhs = 0.0;
      for (int k = 0; k < g.dim; ++k) rhs += g.structure(a, b, k) * mu(k);
      worst = std::max(worst, std::abs(phi.expectation(s.bracket(h[a], h[b])) - rhs));
    }
  return worst;
}

}  // namespace ncsymp
