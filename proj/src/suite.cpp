#include "ncsymp/suite.hpp"

#include <cmath>
#include <random>

#include "ncsymp/dynamics.hpp"
#include "ncsymp/extended.hpp"
#include "ncsymp/lie.hpp"
#include "ncsymp/symplectic.hpp"
#include "ncsymp/tensor.hpp"

namespace ncsymp {

namespace {

using Rng = std::mt19937_64;

std::shared_ptr<const SymplecticStructure> share(SymplecticStructure s) {
  return std::make_shared<const SymplecticStructure>(std::move(s));
}

Report algebra_section(double tol) {
  Report r;
  for (const char* name : {"matrix:2", "supermatrix:1|1", "grassmann:2"})
    r.append(verify_axioms(*build_algebra(name), tol), name);
  const std::pair<const char*, int> dims[] = {{"matrix:2", 3}, {"matrix:3", 8}};
  for (const auto& [name, expected] : dims) {
    const int got = DerivationSpace::full(build_algebra(name), tol)->size();
    r.add(make_flag(std::string("sder-dim.") + name, "dim SDer = " + std::to_string(expected), got == expected,
                    "got " + std::to_string(got)));
  }
  return r;
}

Report calculus_section(const SuiteConfig& cfg, Rng& rng) {
  Report r;
  for (const char* name : {"matrix:2", "supermatrix:1|1", "grassmann:2"}) {
    const auto sp = DerivationSpace::full(build_algebra(name), cfg.tol);
    double dd = 0.0, cartan = 0.0, lie = 0.0, leib = 0.0;
    for (int k = 0; k < cfg.instances; ++k)
      for (int p = 0; p <= 2; ++p) {
        const int par = static_cast<int>(rng() % 2);
        const Form w = random_form(sp, p, par, rng);
        const int px = static_cast<int>(rng() % 2), py = static_cast<int>(rng() % 2);
        const Vec x = random_derivation(*sp, rng, px);
        const Vec y = random_derivation(*sp, rng, py);
        const Form b = random_form(sp, 1, static_cast<int>(rng() % 2), rng);
        dd = std::max(dd, d_squared_residual(w));
        cartan = std::max(cartan, cartan_residual(x, px, w));
        lie = std::max(lie, lie_bracket_residual(x, px, y, py, w));
        leib = std::max(leib, d_leibniz_residual(w, b));
      }
    const std::string pre = std::string(name) + ".";
    r.add(make_check(pre + "d-squared", "d d w = 0", dd, cfg.tol));
    r.add(make_check(pre + "cartan", "i_X d + d i_X = L_X", cartan, cfg.tol));
    r.add(make_check(pre + "lie-bracket", "[L_X, L_Y] = L_{[X,Y]}", lie, cfg.tol));
    r.add(make_check(pre + "d-leibniz", "d(a ^ b) = da ^ b + (-1)^p a ^ db", leib, cfg.tol));
  }
  return r;
}

Report canonical_section(double tol) {
  Report r;
  const auto alg = build_algebra("matrix:2");
  const Form w = canonical_form(alg, tol);
  const auto v = verify_symplectic(w, tol);
  r.append(v.report, "matrix:2");
  if (!v.valid()) return r;
  const auto& s = *v.structure;
  double inv = 0.0, inner_res = 0.0;
  for (int a = 0; a < w.space()->size(); ++a) {
    Vec x = Vec::Zero(w.space()->size());
    x(a) = 1.0;
    inv = std::max(inv, lie_derivative(x, w.space()->parity(a), w).max_abs());
  }
  for (int i = 0; i < alg->dim(); ++i) {
    const Vec e = alg->basis_vector(i);
    inner_res = std::max(inner_res, linalg::max_abs(Mat(s.hamiltonian_matrix(e) - inner(alg, e, tol).m)));
  }
  r.add(make_check("matrix:2.invariant", "L_X w_c = 0 on the SDer basis", inv, tol));
  r.add(make_check("matrix:2.inner", "Y_A = D_A", inner_res, tol));
  return r;
}

Report poisson_section(const SuiteConfig& cfg, Rng& rng) {
  Report r;
  struct Case {
    const char* name;
    Form w;
  };
  const auto m2 = build_algebra("matrix:2");
  const auto g2 = build_algebra("grassmann:2");
  const Case cases[] = {{"matrix:2", quantum_form(m2, 1.0, cfg.tol)},
                        {"grassmann:2", fermionic_form(g2, Mat::Identity(2, 2) * cplx(0, 1), cfg.tol)}};
  for (const auto& c : cases) {
    const auto s = make_symplectic(c.w, cfg.tol);
    const auto& alg = s.algebra();
    double jac = 0.0, hom = 0.0;
    for (int k = 0; k < 4 * cfg.instances; ++k) {
      const Vec a = random_element(alg, rng, static_cast<int>(rng() % 2));
      const Vec b = random_element(alg, rng, static_cast<int>(rng() % 2));
      const Vec e = random_element(alg, rng, static_cast<int>(rng() % 2));
      jac = std::max(jac, jacobi_residual(s, a, b, e));
      hom = std::max(hom, homomorphism_residual(s, a, b));
    }
    r.add(make_check(std::string(c.name) + ".jacobi", "{A,{B,C}} = {{A,B},C} + (-1)^{|A||B|}{B,{A,C}}", jac, cfg.tol));
    r.add(make_check(std::string(c.name) + ".homomorphism", "[Y_A, Y_B] = Y_{A,B}", hom, cfg.tol));
  }
  return r;
}

Report tensor_section(double tol) {
  Report r;
  const auto m2 = build_algebra("matrix:2");
  const auto s = make_symplectic(quantum_form(m2, 1.0, tol), tol);
  const auto res = tensor_verdict(s, s, tol);
  r.add(make_flag("quantum-pair.verdict", "equal lambda gives a nondegenerate product form",
                  res.verdict == "quantum-matched-valid", res.verdict));
  r.add(make_check("quantum-pair.lambda", "lambda = i for w = -i w_c", std::abs(res.lambda - cplx(0, 1)), 1e3 * tol));
  if (res.structure) {
    const TensorBracket pb(s, s);
    double worst = 0.0;
    const auto& prod = *res.product;
    for (int i = 0; i < prod.dim(); ++i)
      for (int j = 0; j < prod.dim(); ++j) {
        const Vec a = prod.basis_vector(i), b = prod.basis_vector(j);
        worst = std::max(worst, linalg::max_abs(Vec(pb(a, b) - res.structure->bracket(a, b))));
      }
    r.add(make_check("quantum-pair.bracket", "tensor bracket = w(Y_A, Y_B) on basis pairs", worst, 1e-8));
  }
  return r;
}

Report dynamics_section(double tol) {
  Report r;
  const auto m2 = build_algebra("matrix:2");
  const auto s = share(make_symplectic(quantum_form(m2, 1.0, tol), tol));
  const double w0 = 1.3;
  const Vec sx = m2->basis_vector(m2->index_of("sx"));
  const Vec sy = m2->basis_vector(m2->index_of("sy"));
  const Vec sz = m2->basis_vector(m2->index_of("sz"));
  const HamiltonianSystem sys(s, sz * cplx(w0 / 2.0));
  double worst = 0.0, omega = 0.0;
  for (double t : {0.0, 2.5, 5.0, 10.0}) {
    const Vec oracle = std::cos(w0 * t) * sx - std::sin(w0 * t) * sy;
    worst = std::max(worst, linalg::max_abs(Vec(sys.heisenberg(sx, t) - oracle)));
    omega = std::max(omega, omega_preservation_residual(sys, t));
  }
  r.add(make_check("precession", "sx(t) = cos(w t) sx - sin(w t) sy", worst, 1e-8));
  r.add(make_check("omega-preserved", "Phi_t^* w = w", omega, 1e-8));
  Vec up(2);
  up << 1.0, 0.0;
  r.append(check_symmetry(sys, sz, pure_state(m2, up), {1.0, 5.0, 10.0}, tol), "symmetry");
  return r;
}

Report lie_section(double tol) {
  Report r;
  const auto m2 = build_algebra("matrix:2");
  const auto s = make_symplectic(quantum_form(m2, 1.0, tol), tol);
  const auto act = su2_pauli_action(s);
  const auto v = verify_action(act, s, tol);
  r.append(v.report, "su2");
  Vec up(2);
  up << 1.0, 0.0;
  const State phi = pure_state(m2, up);
  r.add(make_flag("su2.poisson", "{h_a, h_b} = C_ab^c h_c", v.poisson));
  r.add(make_check("su2.momentum-equivariance", "<phi, {h_a, h_b}> = <h~(phi), [a, b]>",
                   momentum_equivariance_residual(act.g, v.hamiltonians, s, phi), tol));
  const Vec mu = momentum_map(v.hamiltonians, phi);
  r.add(make_check("su2.momentum-up", "h~(+z) = (0, 0, 1/2)",
                   linalg::max_abs(Vec(mu - Vec::Unit(3, 2) * 0.5)), tol));
  const auto h_su2 = ce_cohomology_h2(LieAlgebra::su2(), tol);
  const auto h_r2 = ce_cohomology_h2(LieAlgebra::abelian(2), tol);
  r.add(make_flag("h2.su2", "dim H^2 = 0", h_su2.dim == 0));
  r.add(make_flag("h2.abelian2", "dim H^2 = 1", h_r2.dim == 1));
  r.add(make_check("h2.d-squared", "d d = 0", h_su2.d_squared, tol));
  const LieAlgebra ext = central_extension(LieAlgebra::abelian(2), h_r2.representatives, tol);
  r.append(verify_lie_algebra(ext, tol), "heisenberg");
  return r;
}

Report noether_section(const SuiteConfig& cfg) {
  Report r;
  const double tol = cfg.tol;
  const auto m2 = build_algebra("matrix:2");
  const auto s = share(make_symplectic(quantum_form(m2, 1.0, tol), tol));
  const ExtendedSystem ext(s, cfg.degree_bound);
  const Vec sx = m2->basis_vector(m2->index_of("sx"));
  const Vec sz = m2->basis_vector(m2->index_of("sz"));
  r.append(check_evolution(ext, ext.element({sz, sx}), tol), "evolution");
  const auto sym = noether_check(ext, ext.element({sz, sz}), ext.lift(sz), tol);
  r.append(sym.report, "symmetry");
  return r;
}

}  // namespace

Report run_suite(const SuiteConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw SpecError("tolerance must be positive");
  Rng rng(cfg.seed);
  Report r;
  r.title = "suite";
  r.data["seed"] = cfg.seed;
  r.data["tolerance"] = fmt_double(cfg.tol);
  r.data["instances"] = cfg.instances;
  r.data["degree_bound"] = cfg.degree_bound;
  r.append(algebra_section(cfg.tol), "algebra");
  r.append(calculus_section(cfg, rng), "calculus");
  r.append(canonical_section(cfg.tol), "canonical");
  r.append(poisson_section(cfg, rng), "poisson");
  r.append(tensor_section(cfg.tol), "tensor");
  r.append(dynamics_section(cfg.tol), "dynamics");
  r.append(lie_section(cfg.tol), "lie");
  r.append(noether_section(cfg), "noether");
  return r;
}

}  // namespace ncsymp
