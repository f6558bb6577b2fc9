#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ncsymp/dynamics.hpp"
#include "ncsymp/extended.hpp"
#include "ncsymp/lie.hpp"
#include "ncsymp/suite.hpp"
#include "ncsymp/symplectic.hpp"
#include "ncsymp/tensor.hpp"

using namespace ncsymp;

namespace {

using Rng = std::mt19937_64;
constexpr double kTol = 1e-9;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [failed]");
  }
  void residual(const std::string& what, double r, double tol) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s %.2e <= %.0e", what.c_str(), r, tol);
    require(r <= tol, buf);
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Vec basis(const Superalgebra& alg, const char* label) { return alg.basis_vector(alg.index_of(label)); }

void criterion1(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto m2 = build_algebra("matrix:2"), m3 = build_algebra("matrix:3");
  const int d2 = DerivationSpace::full(m2)->size();
  const int d3 = DerivationSpace::full(m3)->size();
  const int d23 = DerivationSpace::full(tensor_product(m2, m3))->size();
  const double t = seconds_since(t0);
  o.require(d2 == 3, "dim Der(M2) = " + std::to_string(d2));
  o.require(d3 == 8, "dim Der(M3) = " + std::to_string(d3));
  o.require(d23 == 35, "dim Der(M2 (x) M3) = " + std::to_string(d23));
  o.require(t < 5.0, "runtime " + std::to_string(t) + " s < 5 s");
}

void criterion2(Outcome& o) {
  Rng rng(2);
  const auto m2 = build_algebra("matrix:2");
  const std::vector<AlgebraPtr> algs{m2, tensor_product(m2, m2), build_algebra("grassmann:2"),
                                     build_algebra("supermatrix:1|1")};
  const int instances = 50;
  for (const auto& alg : algs) {
    const auto sp = DerivationSpace::full(alg);
    double dd = 0.0, cartan = 0.0, lie = 0.0, leib = 0.0;
    for (int k = 0; k < instances; ++k) {
      const int p = k % 3, wp = static_cast<int>(rng() % 2);
      const int px = static_cast<int>(rng() % 2), py = static_cast<int>(rng() % 2);
      const Form w = random_form(sp, p, wp, rng);
      const Vec x = random_derivation(*sp, rng, px), y = random_derivation(*sp, rng, py);
      const Form b = random_form(sp, 1, static_cast<int>(rng() % 2), rng);
      dd = std::max(dd, d_squared_residual(w));
      cartan = std::max(cartan, cartan_residual(x, px, w));
      lie = std::max(lie, lie_bracket_residual(x, px, y, py, w));
      leib = std::max(leib, d_leibniz_residual(w, b));
    }
    const std::string n = alg->name() + " x" + std::to_string(instances);
    o.residual(n + " dd", dd, kTol);
    o.residual("cartan", cartan, kTol);
    o.residual("lie-bracket", lie, kTol);
    o.residual("leibniz", leib, kTol);
  }
}

void criterion3(Outcome& o) {
  for (const char* name : {"matrix:2", "matrix:3"}) {
    const auto alg = build_algebra(name);
    const Form w = canonical_form(alg, kTol);
    const auto v = verify_symplectic(w, kTol);
    double inv = 0.0, yd = 0.0;
    const auto& sp = *w.space();
    for (int a = 0; a < sp.size(); ++a) inv = std::max(inv, lie_derivative(Vec::Unit(sp.size(), a), sp.parity(a), w).max_abs());
    if (v.valid())
      for (int i = 0; i < alg->dim(); ++i) {
        const Vec e = alg->basis_vector(i);
        yd = std::max(yd, linalg::max_abs(Mat(v.structure->hamiltonian_matrix(e) - inner(alg, e, kTol).m)));
      }
    o.residual(std::string(name) + " closed", exterior_derivative(w).max_abs(), kTol);
    o.residual("imaginary", (form_star(w) + w).max_abs(), kTol);
    o.residual("invariant", inv, kTol);
    o.require(v.unique && v.exists, "nondegenerate");
    o.residual("Y_A = D_A", yd, kTol);
  }
}

void criterion4(Outcome& o) {
  Rng rng(4);
  const SymplecticStructure ss[] = {
      make_symplectic(quantum_form(build_algebra("matrix:2"), 1.0, kTol), kTol),
      make_symplectic(quantum_form(build_algebra("supermatrix:1|1"), 1.0, kTol), kTol),
      make_symplectic(fermionic_form(build_algebra("grassmann:2"), Mat::Identity(2, 2) * cplx(0, 1), kTol), kTol)};
  const int n = 100;
  for (const auto& s : ss) {
    const auto& alg = s.algebra();
    double jac = 0.0, hom = 0.0;
    int odd = 0;
    for (int k = 0; k < n; ++k) {
      const int pa = static_cast<int>(rng() % 2), pb = static_cast<int>(rng() % 2), pc = static_cast<int>(rng() % 2);
      odd += pa + pb + pc;
      const Vec a = random_element(alg, rng, pa), b = random_element(alg, rng, pb), c = random_element(alg, rng, pc);
      jac = std::max(jac, jacobi_residual(s, a, b, c));
      hom = std::max(hom, homomorphism_residual(s, a, b));
    }
    o.residual(alg.name() + " x" + std::to_string(n) + " jacobi", jac, kTol);
    o.residual("homomorphism", hom, kTol);
    if (alg.name() == "grassmann:2") o.require(odd > 0, "odd arguments " + std::to_string(odd));
  }
}

void criterion5(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto m2 = build_algebra("matrix:2");
  const auto q = make_symplectic(quantum_form(m2, 1.0, kTol), kTol);
  const auto q2 = make_symplectic(scaled_canonical_form(m2, cplx(0, -2), kTol), kTol);
  const auto f = make_symplectic(fermionic_form(build_algebra("grassmann:2"), Mat::Identity(2, 2) * cplx(0, 1), kTol), kTol);

  const auto a = tensor_verdict(q, q, kTol);
  o.require(a.verdict == "quantum-matched-valid", "(a) " + a.verdict);
  if (a.structure) {
    const TensorBracket pb(q, q);
    const auto& p = *a.product;
    double worst = 0.0;
    for (int i = 0; i < p.dim(); ++i)
      for (int j = 0; j < p.dim(); ++j) {
        const Vec x = p.basis_vector(i), y = p.basis_vector(j);
        worst = std::max(worst, linalg::max_abs(Vec(pb(x, y) - a.structure->bracket(x, y))));
      }
    o.residual("tensor bracket vs direct solve", worst, 1e-8);
  }
  const auto b = tensor_verdict(q, q2, kTol);
  o.require(b.verdict == "degenerate" && !b.witness.empty(), "(b) " + b.verdict + " witness " + b.witness);
  const auto c = tensor_verdict(f, q, kTol);
  o.require(c.verdict == "degenerate" && !c.witness.empty(), "(c) " + c.verdict + " witness " + c.witness);
  const auto d = tensor_verdict(f, f, kTol);
  o.require(d.verdict == "both-supercommutative-valid" && std::abs(d.lambda) < kTol, "(d) " + d.verdict);
  const double t = seconds_since(t0);
  o.require(t < 60.0, "runtime " + std::to_string(t) + " s < 60 s");
}

void criterion6(Outcome& o) {
  const auto m2 = build_algebra("matrix:2");
  const auto q = make_symplectic(quantum_form(m2, 1.0, kTol), kTol);
  const auto r = tensor_verdict(q, q, kTol);
  if (!r.structure) {
    o.require(false, "no product structure");
    return;
  }
  const auto& p = r.structure->algebra();
  double good = 0.0, bad = 0.0;
  const cplx perturbed = r.lambda * (1.0 + 1e-3);
  for (int i = 0; i < m2->dim(); ++i)
    for (int j = 0; j < m2->dim(); ++j) {
      const Vec a = m2->basis_vector(i), b = m2->basis_vector(j);
      good = std::max(good, leibniz_residual(p, tensor_ansatz(q, q, a, b, r.lambda), 0));
      bad = std::max(bad, leibniz_residual(p, tensor_ansatz(q, q, a, b, perturbed), 0));
    }
  o.residual("correct lambda", good, kTol);
  char buf[96];
  std::snprintf(buf, sizeof buf, "perturbed lambda %.2e >= %.0e", bad, 10 * kTol);
  o.require(bad >= 10 * kTol, buf);
}

void criterion7(Outcome& o) {
  const auto m2 = build_algebra("matrix:2");
  const auto s = std::make_shared<const SymplecticStructure>(make_symplectic(quantum_form(m2, 1.0, kTol), kTol));
  const double w0 = 1.3;
  const Vec sx = basis(*m2, "sx"), sy = basis(*m2, "sy"), sz = basis(*m2, "sz");
  const HamiltonianSystem sys(s, sz * (w0 / 2.0));
  Rng rng(7);
  Vec amp(2);
  amp << cplx(0.6, 0.1), cplx(-0.3, 0.7);
  const State phi = pure_state(m2, amp);
  double traj = 0.0, dual = 0.0, omega = 0.0, drift = 0.0;
  const cplx g0 = phi.expectation(sz);
  for (int k = 0; k <= 200; ++k) {
    const double t = 10.0 * k / 200;
    const Vec oracle = std::cos(w0 * t) * sx - std::sin(w0 * t) * sy;
    traj = std::max(traj, linalg::max_abs(Vec(sys.heisenberg(sx, t) - oracle)));
    const Vec a = random_element(*m2, rng);
    dual = std::max(dual, std::abs(sys.liouville(phi, t).expectation(a) - phi.expectation(sys.heisenberg(a, t))));
    drift = std::max(drift, std::abs(sys.liouville(phi, t).expectation(sz) - g0));
    if (k % 20 == 0) omega = std::max(omega, omega_preservation_residual(sys, t));
  }
  o.residual("precession over [0, 10]", traj, 1e-8);
  o.residual("duality", dual, 1e-9);
  o.residual("omega preserved", omega, 1e-8);
  o.residual("{G, H} = 0", linalg::max_abs(s->bracket(sz, sys.hamiltonian())), kTol);
  o.residual("conserved drift", drift, 1e-9);
}

void criterion8(Outcome& o) {
  const auto m2 = build_algebra("matrix:2");
  const auto s = make_symplectic(quantum_form(m2, 1.0, kTol), kTol);
  const auto act = su2_pauli_action(s);
  const auto v = verify_action(act, s, kTol);
  double poisson = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      Vec rhs = Vec::Zero(m2->dim());
      for (int c = 0; c < 3; ++c) rhs += act.g.structure(a, b, c) * v.hamiltonians[c];
      poisson = std::max(poisson, linalg::max_abs(Vec(s.bracket(v.hamiltonians[a], v.hamiltonians[b]) - rhs)));
    }
  o.require(v.homomorphism && v.hamiltonian, "hamiltonian action");
  o.residual("poisson action", poisson, kTol);
  const int h_su2 = ce_cohomology_h2(LieAlgebra::su2(), kTol).dim;
  const auto r2 = ce_cohomology_h2(LieAlgebra::abelian(2), kTol);
  o.require(h_su2 == 0, "H2(su2) = " + std::to_string(h_su2));
  o.require(r2.dim == 1, "H2(R2) = " + std::to_string(r2.dim));
  const LieAlgebra ext = central_extension(LieAlgebra::abelian(2), r2.representatives, kTol);
  o.require(ext.dim == 3 && verify_lie_algebra(ext, kTol).ok(), "extension jacobi");
  Rng rng(8);
  double eq = 0.0;
  for (int k = 0; k < 20; ++k) {
    Vec amp(2);
    amp << cplx(std::normal_distribution<double>()(rng), std::normal_distribution<double>()(rng)),
        cplx(std::normal_distribution<double>()(rng), std::normal_distribution<double>()(rng));
    eq = std::max(eq, momentum_equivariance_residual(act.g, v.hamiltonians, s, pure_state(m2, amp)));
  }
  o.residual("momentum equivariance", eq, kTol);
}

double worst_residual(const Report& r) {
  double w = 0.0;
  for (const auto& c : r.checks) w = std::max(w, c.residual);
  return w;
}

void criterion9(Outcome& o) {
  const auto m2 = build_algebra("matrix:2");
  const auto s = std::make_shared<const SymplecticStructure>(make_symplectic(quantum_form(m2, 1.0, kTol), kTol));
  const ExtendedSystem ext(s, 4);
  const Vec sx = basis(*m2, "sx"), sz = basis(*m2, "sz");
  const Report ev = check_evolution(ext, ext.element({sz, sx}), kTol);
  o.require(ev.ok(), "evolution checks");
  o.residual("H = sz + t sx: kernel and consistency", worst_residual(ev), 1e-8);

  const ExtendedElement h = ext.element({sz, sz});
  o.residual("{G, H} = 0", linalg::max_abs(s->bracket(sz, sz)), kTol);
  const auto n = noether_check(ext, h, ext.lift(sz), kTol);
  o.require(n.exact && n.invariant.has_value(), "invariant solved");
  o.residual("Y^_H(h^) = 0", n.conservation_residual, 1e-8);
}

std::string run_cli_suite() {
  std::string out;
  FILE* pipe = popen(NCSYMP_CLI " suite --seed 42", "r");
  if (!pipe) return out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  if (pclose(pipe) != 0) out += "\nexit status nonzero";
  return out;
}

void criterion10(Outcome& o) {
  SuiteConfig cfg;
  cfg.seed = 42;
  const std::string a = render(run_suite(cfg), Format::Json);
  const std::string b = render(run_suite(cfg), Format::Json);
  o.require(a == b, "library reports identical (" + std::to_string(a.size()) + " bytes)");
  const std::string c1 = run_cli_suite(), c2 = run_cli_suite();
  o.require(!c1.empty() && c1 == c2, "cli reports identical (" + std::to_string(c1.size()) + " bytes)");
  o.require(c1 == a, "cli matches library");
}

}  // namespace

int main() {
  const std::vector<std::function<void(Outcome&)>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                             criterion5, criterion6, criterion7, criterion8,
                                                             criterion9, criterion10};
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i](o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    char time[32];
    std::snprintf(time, sizeof time, "%.2f s", seconds_since(t0));
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << time << "): " << o.detail.str()
              << std::endl;
    failed += !o.pass;
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << criteria.size() - failed << "/" << criteria.size() << std::endl;
  return failed ? 1 : 0;
}
