#include "ncsymp/symplectic.hpp"

#include <algorithm>
#include <cmath>

namespace ncsymp {

namespace {

// Existence of a solution is judged on the relative residual, with headroom
// above the rank threshold for accumulated rounding.
double existence_tol(double tol) { return 1e3 * tol; }

// Column b holds the stacked values w(X_b, X_a), a = 0..n-1.
Mat flat_matrix(const Form& w) {
  const auto& sp = *w.space();
  const int n = sp.size(), d = w.algebra().dim();
  Mat f(static_cast<Eigen::Index>(n) * d, n);
  int idx[2];
  for (int b = 0; b < n; ++b)
    for (int a = 0; a < n; ++a) {
      idx[0] = b;
      idx[1] = a;
      f.block(static_cast<Eigen::Index>(a) * d, b, d, 1) = w.at(idx);
    }
  return f;
}

// Minimum-norm preimages P_a with D_{P_a} = X_a.
std::vector<Vec> inner_preimages(const DerivationSpace& sp, double tol) {
  const auto& alg = *sp.algebra();
  const int d = alg.dim();
  Mat ad(static_cast<Eigen::Index>(d) * d, d);
  for (int i = 0; i < d; ++i) {
    const Mat m = inner(sp.algebra(), alg.basis_vector(i), tol).m;
    ad.col(i) = Eigen::Map<const Vec>(m.data(), m.size());
  }
  const linalg::Solver solver(ad, tol);
  std::vector<Vec> pre(sp.size());
  for (int a = 0; a < sp.size(); ++a) {
    const Mat& x = sp[a].m;
    const auto ls = solver.solve(Eigen::Map<const Vec>(x.data(), x.size()));
    if (ls.residual > existence_tol(tol)) throw SpecError("derivation space contains outer derivations");
    pre[a] = ls.x;
  }
  return pre;
}

}  // namespace

Vec stacked_differential(const DerivationSpace& space, const Vec& a) {
  const auto& alg = *space.algebra();
  const int d = alg.dim();
  const Vec even = alg.even_part(a), odd = alg.odd_part(a);
  Vec out(static_cast<Eigen::Index>(space.size()) * d);
  for (int x = 0; x < space.size(); ++x) {
    const Mat& m = space[x].m;
    out.segment(static_cast<Eigen::Index>(x) * d, d) = m * even + double(eta(space.parity(x), 1)) * (m * odd);
  }
  return out;
}

Mat SymplecticStructure::hamiltonian_matrix(const Vec& a) const {
  return space()->matrix(hamiltonian_coords(a));
}

Superderivation SymplecticStructure::hamiltonian(const Vec& a) const {
  const int p = algebra().parity_of(a, tol_);
  if (p < 0) throw SpecError("Hamiltonian derivation of a mixed element: split it into parity parts");
  return {space()->algebra(), hamiltonian_matrix(a), p};
}

Vec SymplecticStructure::bracket(const Vec& a, const Vec& b) const {
  Vec out = Vec::Zero(algebra().dim());
  for (int k = 0; k < a.size(); ++k)
    if (a(k) != cplx(0.0)) out += a(k) * (pb_[k] * b);
  return out;
}

SymplecticVerdict verify_symplectic(const Form& omega, double tol, bool require_real) {
  SymplecticVerdict v;
  Report& r = v.report;
  r.title = "symplectic structure";
  if (omega.degree() != 2) throw SpecError("a symplectic form has degree 2");
  const auto& sp = *omega.space();
  const auto& alg = omega.algebra();

  v.even = omega.parity() == 0;
  r.add(make_flag("even", "parity(w) = 0", v.even));

  const double dw = exterior_derivative(omega).max_abs();
  v.closed = dw <= tol;
  r.add(make_check("closed", "dw = 0", dw, tol));

  if (sp.star_matrix()) {
    v.real_checked = true;
    const double re = (form_star(omega) - omega).max_abs();
    v.real = re <= tol;
    if (require_real) r.add(make_check("real", "w* = w", re, tol));
    r.data["real"] = v.real;
    r.data["real_residual"] = fmt_double(re);
  } else {
    if (require_real) r.add(make_flag("real", "w* = w", false, "derivation space not closed under *"));
    r.data["real"] = "undecidable";
  }

  const Mat f = flat_matrix(omega);
  const linalg::Solver solver(f, tol);
  v.unique = solver.rank() == sp.size();
  const int d = alg.dim();
  Mat ham(sp.size(), d);
  double worst = 0.0;
  v.exists = true;
  for (int k = 0; k < d; ++k) {
    const auto ls = solver.solve(-stacked_differential(sp, alg.basis_vector(k)));
    ham.col(k) = ls.x;
    worst = std::max(worst, ls.residual);
    if (ls.residual > existence_tol(tol) && v.exists) {
      v.exists = false;
      if (v.witness < 0) {
        v.witness = k;
        v.witness_mode = "no solution";
      }
    }
  }
  if (!v.unique && v.witness < 0) {
    // Any element whose Hamiltonian derivation is only defined up to the kernel.
    v.witness = alg.unit();
    v.witness_mode = "not unique";
  }
  r.add(make_flag("unique", "i_Y w = 0 implies Y = 0", v.unique,
                  "rank " + std::to_string(solver.rank()) + " of " + std::to_string(sp.size())));
  r.add(make_check("exists", "i_Y w = -dA solvable for every basis A", worst, existence_tol(tol)));
  if (v.witness >= 0) {
    r.data["witness"] = alg.label(v.witness);
    r.data["witness_mode"] = v.witness_mode;
  }

  if (!v.even)
    v.failure = "not-even";
  else if (!v.closed)
    v.failure = "not-closed";
  else if (require_real && !v.real)
    v.failure = "not-real";
  else if (!v.unique || !v.exists)
    v.failure = "degenerate";
  r.data["verdict"] = v.failure.empty() ? "valid" : v.failure;

  if (v.failure.empty()) {
    SymplecticStructure s;
    s.omega_ = omega;
    s.tol_ = tol;
    s.real_ = v.real;
    s.ham_ = ham;
    s.pb_.resize(d);
    for (int k = 0; k < d; ++k) s.pb_[k] = sp.matrix(ham.col(k));
    v.structure = std::move(s);
  }
  return v;
}

SymplecticStructure make_symplectic(const Form& omega, double tol, bool require_real) {
  auto v = verify_symplectic(omega, tol, require_real);
  if (!v.valid()) {
    std::string msg = "not a symplectic structure: " + v.failure;
    if (v.witness >= 0) msg += " (witness " + omega.algebra().label(v.witness) + ", " + v.witness_mode + ")";
    throw MathError(msg);
  }
  return std::move(*v.structure);
}

bool is_special(const AlgebraPtr& alg, double tol) {
  if (alg->is_supercommutative(tol)) return false;
  return sder_basis(alg, tol).size() == inner_basis(alg, tol).size();
}

Form canonical_form(const SpacePtr& space, double tol) {
  const auto& alg = *space->algebra();
  if (alg.is_supercommutative(tol)) throw SpecError("canonical form needs a non-supercommutative algebra");
  const auto pre = inner_preimages(*space, tol);
  Form w(space, 2, 0);
  for (int s = 0; s < w.slots(); ++s) {
    const int* t = w.layout().tuple(s);
    w.comps().col(s) = alg.supercommutator(pre[t[0]], pre[t[1]]);
  }
  return w;
}

Form canonical_form(const AlgebraPtr& alg, double tol) {
  if (!is_special(alg, tol)) throw SpecError("algebra '" + alg->name() + "' is not special: outer derivations exist");
  return canonical_form(DerivationSpace::full(alg, tol), tol);
}

Form scaled_canonical_form(const AlgebraPtr& alg, cplx b, double tol) { return canonical_form(alg, tol) * b; }

Form quantum_form(const AlgebraPtr& alg, double hbar, double tol) {
  return scaled_canonical_form(alg, cplx(0.0, -hbar), tol);
}

Form fermionic_form(const AlgebraPtr& grassmann, const Mat& g, double tol) {
  const auto& alg = *grassmann;
  if (!alg.is_supercommutative(tol)) throw SpecError("fermionic form needs a Grassmann algebra");
  const int n = static_cast<int>(g.rows());
  if (g.cols() != n) throw SpecError("fermionic metric must be square");
  std::vector<int> theta(n);
  for (int i = 0; i < n; ++i) {
    theta[i] = alg.index_of("t" + std::to_string(i + 1));
    if (alg.parity(theta[i]) != 1) throw SpecError("generator t" + std::to_string(i + 1) + " is not odd");
  }
  const auto sp = DerivationSpace::full(grassmann, tol);
  Form w(sp, 2, 0);
  for (int s = 0; s < w.slots(); ++s) {
    const int* t = w.layout().tuple(s);
    const int a = t[0], b = t[1];
    const int kb = (sp->parity(b) + 1) % 2;
    Vec acc = Vec::Zero(alg.dim());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (g(i, j) == cplx(0.0)) continue;
        const Vec ka = (*sp)[a].m.col(theta[i]);
        const Vec kbv = (*sp)[b].m.col(theta[j]);
        acc += (g(i, j) * double(eta(kb, 1))) * alg.mul(ka, kbv);
      }
    w.comps().col(s) = acc;
  }
  return w;
}

std::optional<Form> find_potential(const Form& w, double tol) {
  if (w.degree() == 0) return std::nullopt;
  const auto& sp = w.space();
  const int d = w.algebra().dim();
  Form basis1(sp, w.degree() - 1, w.parity());
  const Eigen::Index unknowns = static_cast<Eigen::Index>(basis1.slots()) * d;
  Mat map(w.comps().size(), unknowns);
  for (Eigen::Index u = 0; u < unknowns; ++u) {
    Form e(sp, w.degree() - 1, w.parity());
    e.comps()(u % d, u / d) = 1.0;
    const Form de = exterior_derivative(e);
    map.col(u) = Eigen::Map<const Vec>(de.comps().data(), de.comps().size());
  }
  const auto ls = linalg::solve(map, Eigen::Map<const Vec>(w.comps().data(), w.comps().size()), tol);
  if (ls.residual > existence_tol(tol)) return std::nullopt;
  Form theta(sp, w.degree() - 1, w.parity());
  theta.comps() = Eigen::Map<const Mat>(ls.x.data(), d, basis1.slots());
  return theta;
}

double jacobi_residual(const SymplecticStructure& s, const Vec& a, const Vec& b, const Vec& c) {
  const auto& alg = s.algebra();
  const int pa = alg.parity_of(a, s.tol()), pb = alg.parity_of(b, s.tol());
  if (pa < 0 || pb < 0) throw SpecError("Jacobi residual needs homogeneous elements");
  const Vec lhs = s.bracket(a, s.bracket(b, c));
  const Vec rhs = s.bracket(s.bracket(a, b), c) + double(eta(pa, pb)) * s.bracket(b, s.bracket(a, c));
  return linalg::max_abs(Vec(lhs - rhs));
}

double homomorphism_residual(const SymplecticStructure& s, const Vec& a, const Vec& b) {
  const auto& alg = s.algebra();
  const int pa = alg.parity_of(a, s.tol()), pb = alg.parity_of(b, s.tol());
  if (pa < 0 || pb < 0) throw SpecError("homomorphism residual needs homogeneous elements");
  const Mat lhs = graded_commutator(s.hamiltonian_matrix(a), pa, s.hamiltonian_matrix(b), pb);
  return linalg::max_abs(Mat(lhs - s.hamiltonian_matrix(s.bracket(a, b))));
}

Report check_local_to_global(const SymplecticStructure& s, const Vec& x, const Vec& y) {
  const auto& sp = *s.space();
  const auto& w = s.omega();
  const int px = sp.parity_of(x), py = sp.parity_of(y);
  if (px < 0 || py < 0) throw SpecError("local-to-global check needs homogeneous derivations");
  Report r;
  r.title = "locally Hamiltonian bracket";
  r.add(make_check("x-local", "L_X w = 0", lie_derivative(x, px, w).max_abs(), s.tol()));
  r.add(make_check("y-local", "L_Y w = 0", lie_derivative(y, py, w).max_abs(), s.tol()));
  const Form lhs = interior(sp.bracket(x, y), (px + py) % 2, w);
  const Form rhs = exterior_derivative(interior(x, px, interior(y, py, w)));
  r.add(make_check("exact", "i_{[X,Y]} w = d(i_X i_Y w)", (lhs - rhs).max_abs(), s.tol()));
  return r;
}

bool is_canonical_pair(const SymplecticStructure& s, const Vec& a, const Vec& b) {
  const Vec v = s.bracket(a, b) - s.algebra().unit_vector();
  return linalg::max_abs(v) <= s.tol();
}

}  // namespace ncsymp
