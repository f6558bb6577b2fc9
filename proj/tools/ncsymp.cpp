#include <cstdlib>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ncsymp/dynamics.hpp"
#include "ncsymp/extended.hpp"
#include "ncsymp/lie.hpp"
#include "ncsymp/spec_io.hpp"
#include "ncsymp/suite.hpp"
#include "ncsymp/symplectic.hpp"
#include "ncsymp/tensor.hpp"

using namespace ncsymp;

namespace {

struct RunConfig {
  double tol = kDefaultTol;
  double fd_step = 1e-5;
  std::uint64_t seed = 42;
  int degree_bound = 4;
  std::string format = "text";
  bool format_set = false;
};

int emit(const Report& r, const RunConfig& cfg, bool ok) {
  std::cout << render(r, parse_format(cfg.format));
  return ok ? 0 : 1;
}

spec::SystemSpec load_system(const std::string& arg, const RunConfig& cfg) {
  return spec::system(spec::load_argument(arg, "system"), cfg.tol, arg);
}

std::shared_ptr<const SymplecticStructure> structure_of(const spec::SystemSpec& sys, const RunConfig& cfg) {
  return std::make_shared<const SymplecticStructure>(make_symplectic(sys.omega, cfg.tol));
}

Vec load_element(const Superalgebra& alg, const std::string& arg, const std::string& what) {
  return spec::element(alg, spec::load_argument(arg, what), what);
}

int cmd_verify_algebra(const std::string& arg, const RunConfig& cfg) {
  const auto alg = spec::algebra(spec::load_argument(arg, "algebra"), arg);
  Report r = verify_axioms(*alg, cfg.tol);
  r.title = "algebra " + alg->name();
  r.data["graded_center_dim"] = graded_center(*alg, cfg.tol).cols();
  r.data["supercommutative"] = alg->is_supercommutative(cfg.tol);
  return emit(r, cfg, r.ok());
}

int cmd_sder_basis(const std::string& arg, const RunConfig& cfg) {
  const auto alg = spec::algebra(spec::load_argument(arg, "algebra"), arg);
  const auto full = DerivationSpace::full(alg, cfg.tol);
  const auto in = DerivationSpace::inner(alg, cfg.tol);
  Report r;
  r.title = "superderivations of " + alg->name();
  double leib = 0.0;
  int even = 0;
  for (const auto& x : full->basis()) {
    leib = std::max(leib, leibniz_residual(x));
    even += x.parity == 0;
  }
  r.add(make_check("leibniz", "X(AB) = X(A)B + (-1)^{|X||A|} A X(B) on the basis", leib, cfg.tol));
  r.data["dimension"] = full->size();
  r.data["even"] = even;
  r.data["odd"] = full->size() - even;
  r.data["inner_dimension"] = in->size();
  r.data["special"] = !alg->is_supercommutative(cfg.tol) && in->size() == full->size();
  return emit(r, cfg, r.ok());
}

int cmd_check_symplectic(const std::string& arg, bool require_real, const std::string& pullback,
                         const RunConfig& cfg) {
  const auto sys = load_system(arg, cfg);
  auto v = verify_symplectic(sys.omega, cfg.tol, require_real);
  Report r = v.report;
  r.title = "symplectic check (" + sys.form_kind + " form on " + sys.alg->name() + ")";
  r.append(check_center_linearity(sys.omega, cfg.tol), "center-linear");
  if (!pullback.empty() && v.valid()) {
    const Vec h = load_element(*sys.alg, pullback, "--pullback");
    const Vec y = v.structure->hamiltonian_coords(h);
    r.append(check_infinitesimal_pullback(sys.omega, y, cfg.fd_step, 1e-6), "pullback");
  }
  return emit(r, cfg, r.ok() && v.valid());
}

int cmd_pb(const std::string& arg, const std::string& a, const std::string& b, const RunConfig& cfg) {
  const auto sys = load_system(arg, cfg);
  const auto s = structure_of(sys, cfg);
  const Vec va = load_element(*sys.alg, a, "A");
  const Vec vb = load_element(*sys.alg, b, "B");
  Report r;
  r.title = "poisson bracket {A, B} = Y_A(B)";
  r.data["A"] = spec::element_json(*sys.alg, va);
  r.data["B"] = spec::element_json(*sys.alg, vb);
  r.data["bracket"] = spec::element_json(*sys.alg, s->bracket(va, vb));
  return emit(r, cfg, true);
}

int cmd_evolve(const std::string& arg, const std::string& ham, const std::vector<std::string>& observables,
               const std::string& state_arg, double t_max, int steps, const RunConfig& cfg) {
  if (steps < 1) throw SpecError("--steps must be positive");
  const auto sys = load_system(arg, cfg);
  const auto s = structure_of(sys, cfg);
  const auto& alg = *sys.alg;
  const HamiltonianSystem hs(s, load_element(alg, ham, "--hamiltonian"));
  State phi = state_arg.empty() ? [&] {
    if (!alg.model()) throw SpecError("--state is required for algebras without a matrix model");
    Vec v = Vec::Zero(alg.model()->basis.front().rows());
    v(0) = 1.0;
    return pure_state(sys.alg, v);
  }()
                                : spec::state(sys.alg, spec::load_argument(state_arg, "--state"), "--state");
  std::vector<std::pair<std::string, Vec>> obs;
  if (observables.empty()) {
    for (int i = 0; i < alg.dim(); ++i)
      if (i != alg.unit()) obs.emplace_back(alg.label(i), alg.basis_vector(i));
  } else {
    for (const auto& o : observables) obs.emplace_back(o, load_element(alg, o, "--observable"));
  }
  std::cout << "t";
  for (const auto& [name, v] : obs) std::cout << "," << name;
  std::cout << "\n";
  for (int k = 0; k <= steps; ++k) {
    const double t = t_max * k / steps;
    const State pt = hs.liouville(phi, t);
    std::cout << fmt_double(t);
    for (const auto& [name, v] : obs) {
      const cplx e = pt.expectation(v);
      std::cout << "," << fmt_double(e.real());
      if (std::abs(e.imag()) > 1e-12) std::cout << (e.imag() < 0 ? "" : "+") << fmt_double(e.imag()) << "i";
    }
    std::cout << "\n";
  }
  return 0;
}

int cmd_tensor_check(const std::string& a, const std::string& b, const RunConfig& cfg) {
  const auto s1 = make_symplectic(load_system(a, cfg).omega, cfg.tol);
  const auto s2 = make_symplectic(load_system(b, cfg).omega, cfg.tol);
  const auto res = tensor_verdict(s1, s2, cfg.tol);
  return emit(res.report, cfg, res.verdict != "inconsistent");
}

int cmd_action_check(const std::string& sys_arg, const std::string& lie_arg, const std::string& state_arg,
                     const RunConfig& cfg) {
  const auto sys = load_system(sys_arg, cfg);
  const auto s = structure_of(sys, cfg);
  const auto l = spec::lie(spec::load_argument(lie_arg, "lie"), lie_arg);
  const auto act = spec::action(l, *s);
  auto v = verify_action(act, *s, cfg.tol);
  Report r = v.report;
  if (v.hamiltonian) {
    const auto c = obstruction_cocycle(act.g, v.hamiltonians, *s, cfg.tol);
    r.append(c.report, "obstruction");
    r.data["obstruction"] = c.report.data;
    if (!state_arg.empty()) {
      const State phi = spec::state(sys.alg, spec::load_argument(state_arg, "--state"), "--state");
      json mu = json::array();
      for (const auto& m : momentum_map(v.hamiltonians, phi)) mu.push_back(scalar_json(m));
      r.data["momentum"] = mu;
      if (v.poisson)
        r.add(make_check("momentum-equivariance", "<phi, {h_a, h_b}> = <h~(phi), [a, b]>",
                         momentum_equivariance_residual(act.g, v.hamiltonians, *s, phi), cfg.tol));
    }
  }
  return emit(r, cfg, r.ok());
}

int cmd_h2(const std::string& lie_arg, bool extend, const RunConfig& cfg) {
  const auto l = spec::lie(spec::load_argument(lie_arg, "lie"), lie_arg);
  const auto h = ce_cohomology_h2(l.g, cfg.tol);
  Report r = verify_lie_algebra(l.g, cfg.tol);
  r.title = "H^2 with trivial coefficients";
  r.add(make_check("d-squared", "d d = 0 on 1-cochains", h.d_squared, cfg.tol));
  r.data["cocycles"] = h.cocycles;
  r.data["coboundaries"] = h.coboundaries;
  r.data["h2"] = h.dim;
  json reps = json::array();
  for (const auto& m : h.representatives) {
    json rows = json::array();
    for (Eigen::Index a = 0; a < m.rows(); ++a) {
      json row = json::array();
      for (Eigen::Index b = 0; b < m.cols(); ++b) row.push_back(scalar_json(m(a, b)));
      rows.push_back(row);
    }
    reps.push_back(rows);
  }
  r.data["representatives"] = reps;
  if (extend) {
    const LieAlgebra ext = central_extension(l.g, h.representatives, cfg.tol);
    r.append(verify_lie_algebra(ext, cfg.tol), "extension");
    json sc = json::array();
    for (int a = 0; a < ext.dim; ++a)
      for (int b = a + 1; b < ext.dim; ++b)
        for (int k = 0; k < ext.dim; ++k)
          if (std::abs(ext.structure(a, b, k)) > cfg.tol) sc.push_back({a, b, k, scalar_json(ext.structure(a, b, k))});
    r.data["extension"] = {{"dim", ext.dim}, {"structure", sc}};
  }
  return emit(r, cfg, r.ok());
}

int cmd_noether(const std::string& sys_arg, const std::string& ham, const std::string& gen, bool evolution,
                const RunConfig& cfg) {
  const auto sys = load_system(sys_arg, cfg);
  const auto s = structure_of(sys, cfg);
  const ExtendedSystem ext(s, cfg.degree_bound);
  const ExtendedElement h = ext.element(spec::polynomial(*sys.alg, spec::load_argument(ham, "--hamiltonian"), "--hamiltonian"));
  if (!evolution && gen.empty()) throw SpecError("give --generator or --evolution");
  const ExtendedDerivation z = evolution ? ext.evolution(h) : ext.lift(load_element(*sys.alg, gen, "--generator"));
  Report r = check_evolution(ext, h, cfg.tol);
  r.title = "noether";
  const auto n = noether_check(ext, h, z, cfg.tol);
  r.append(n.report, "invariant");
  r.data["noether"] = n.report.data;
  return emit(r, cfg, r.ok() && n.exact && n.conserved);
}

int cmd_suite(const RunConfig& cfg, int instances) {
  SuiteConfig sc;
  sc.seed = cfg.seed;
  sc.tol = cfg.tol;
  sc.instances = instances;
  sc.degree_bound = cfg.degree_bound;
  const Report r = run_suite(sc);
  RunConfig out = cfg;
  if (!cfg.format_set) out.format = "json";
  return emit(r, out, r.ok());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ncsymp: symplectic structures and Poisson brackets on finite-dimensional superalgebras.\n"
               "Bracket convention: {A, B} = w(Y_A, Y_B) = Y_A(B); for w = -i hbar w_c this is (-i hbar)^{-1}[A, B]."};
  app.fallthrough();
  app.require_subcommand(1);

  RunConfig cfg;
  if (const char* env = std::getenv("NCSYMP_TOL")) {
    try {
      cfg.tol = std::stod(env);
    } catch (const std::exception&) {
      std::cerr << "error: NCSYMP_TOL is not a number: " << env << "\n";
      return 2;
    }
  }
  app.add_option("--tol", cfg.tol, "Tolerance (default 1e-9, or NCSYMP_TOL)");
  app.add_option("--seed", cfg.seed, "Seed for random property tests");
  app.add_option("--fd-step", cfg.fd_step, "Finite-difference step");
  app.add_option("--degree", cfg.degree_bound, "Degree bound D for time polynomials");
  auto* fmt = app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));

  std::string a1, a2, opt_a, opt_b, ham, state, gen, pullback;
  std::vector<std::string> observables;
  bool require_real = false, extend = false, evolution = false;
  double t_max = 10.0;
  int steps = 100, instances = 5;

  auto* va = app.add_subcommand("verify-algebra", "Check the superalgebra axioms");
  va->add_option("algebra", a1, "Builder name, JSON text or file")->required();
  auto* sd = app.add_subcommand("sder-basis", "Dimension and parity split of the superderivations");
  sd->add_option("algebra", a1, "Builder name, JSON text or file")->required();
  auto* cs = app.add_subcommand("check-symplectic", "Verify a 2-form is symplectic");
  cs->add_option("system", a1, "System spec: algebra plus form")->required();
  cs->add_flag("--require-real", require_real, "Treat reality as a blocking invariant");
  cs->add_option("--pullback", pullback, "Also check the infinitesimal pullback along Y_H for this element");
  auto* pb = app.add_subcommand("pb", "Poisson bracket {A, B}");
  pb->add_option("system", a1)->required();
  pb->add_option("A", opt_a)->required();
  pb->add_option("B", opt_b)->required();
  auto* ev = app.add_subcommand("evolve", "Expectation values along the Hamiltonian flow (CSV)");
  ev->add_option("system", a1)->required();
  ev->add_option("--hamiltonian", ham, "Even hermitian element")->required();
  ev->add_option("--observable", observables, "Observables (default: all basis elements but the unit)");
  ev->add_option("--state", state, "\"mixed\", {\"pure\": [...]}, {\"density\": [[...]]} or {\"values\": ...}");
  ev->add_option("--t-max", t_max, "Final time");
  ev->add_option("--steps", steps, "Number of time steps");
  auto* tc = app.add_subcommand("tensor-check", "Symplectic structure on a graded tensor product");
  tc->add_option("first", a1)->required();
  tc->add_option("second", a2)->required();
  auto* ac = app.add_subcommand("action-check", "Lie algebra action: homomorphism, hamiltonians, obstruction");
  ac->add_option("system", a1)->required();
  ac->add_option("lie", a2)->required();
  ac->add_option("--state", state, "State for the momentum map");
  auto* h2 = app.add_subcommand("h2", "Second cohomology with trivial real coefficients");
  h2->add_option("lie", a1)->required();
  h2->add_flag("--extend", extend, "Build and verify the central extension");
  auto* no = app.add_subcommand("noether-check", "Noether invariant on the time-extended algebra");
  no->add_option("system", a1)->required();
  no->add_option("--hamiltonian", ham, "Polynomial in t: [H0, H1, ...]")->required();
  no->add_option("--generator", gen, "Time-independent element G; Z is its lifted derivation");
  no->add_flag("--evolution", evolution, "Use Z = Y^_H");
  auto* su = app.add_subcommand("suite", "Run the full invariant battery");
  su->add_option("--instances", instances, "Random instances per property");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }
  cfg.format_set = fmt->count() > 0;
  if (!(cfg.tol > 0.0) || !(cfg.fd_step > 0.0)) {
    std::cerr << "error: tolerance and finite-difference step must be positive\n";
    return 2;
  }

  try {
    if (va->parsed()) return cmd_verify_algebra(a1, cfg);
    if (sd->parsed()) return cmd_sder_basis(a1, cfg);
    if (cs->parsed()) return cmd_check_symplectic(a1, require_real, pullback, cfg);
    if (pb->parsed()) return cmd_pb(a1, opt_a, opt_b, cfg);
    if (ev->parsed()) return cmd_evolve(a1, ham, observables, state, t_max, steps, cfg);
    if (tc->parsed()) return cmd_tensor_check(a1, a2, cfg);
    if (ac->parsed()) return cmd_action_check(a1, a2, state, cfg);
    if (h2->parsed()) return cmd_h2(a1, extend, cfg);
    if (no->parsed()) return cmd_noether(a1, ham, gen, evolution, cfg);
    if (su->parsed()) return cmd_suite(cfg, instances);
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const MathError& e) {
    std::cerr << "failed: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
