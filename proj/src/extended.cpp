#include "ncsymp/extended.hpp"

#include <algorithm>
#include <cmath>

#include "ncsymp/linalg.hpp"

namespace ncsymp {

namespace {

// Coefficients below this count as zero when deciding truncation.
constexpr double kOverflowFloor = 1e-13;

// Scalar polynomial p (row) times stacked algebra polynomial v.
Vec convolve(const Eigen::Ref<const Eigen::RowVectorXcd>& p, const Vec& v, int dim, bool& overflow) {
  const int bound = static_cast<int>(p.size()) - 1;
  Vec out = Vec::Zero(v.size());
  for (int i = 0; i <= bound; ++i) {
    if (p(i) == cplx(0.0)) continue;
    for (int j = 0; j <= bound; ++j) {
      const auto seg = v.segment(static_cast<Eigen::Index>(j) * dim, dim);
      if (i + j > bound) {
        if (seg.cwiseAbs().maxCoeff() > kOverflowFloor) overflow = true;
        continue;
      }
      out.segment(static_cast<Eigen::Index>(i + j) * dim, dim) += p(i) * seg;
    }
  }
  return out;
}

void add_guarded(Report& r, std::string name, std::string relation, double residual, double tol, bool truncated) {
  if (truncated) {
    Check c = make_check(std::move(name), std::move(relation), 0.0, tol, "excluded: degree overflow");
    c.passed = true;
    r.add(std::move(c));
    return;
  }
  r.add(make_check(std::move(name), std::move(relation), residual, tol));
}

}  // namespace

ExtendedElement::ExtendedElement(AlgebraPtr a, int bound) : alg(std::move(a)) {
  if (bound < 0) throw SpecError("degree bound must be non-negative");
  coeffs.assign(bound + 1, Vec::Zero(alg->dim()));
}

ExtendedElement::ExtendedElement(AlgebraPtr a, std::vector<Vec> c) : alg(std::move(a)), coeffs(std::move(c)) {
  if (coeffs.empty()) throw SpecError("extended element needs at least one coefficient");
  for (const auto& v : coeffs)
    if (v.size() != alg->dim()) throw SpecError("extended element coefficient has the wrong size");
}

int ExtendedElement::degree(double tol) const {
  for (int k = bound(); k >= 0; --k)
    if (linalg::max_abs(coeffs[k]) > tol) return k;
  return -1;
}

Vec ExtendedElement::at(double t) const {
  Vec out = Vec::Zero(alg->dim());
  double p = 1.0;
  for (const auto& c : coeffs) {
    out += p * c;
    p *= t;
  }
  return out;
}

Vec ExtendedElement::stacked() const {
  const int d = alg->dim();
  Vec out(static_cast<Eigen::Index>(d) * coeffs.size());
  for (size_t k = 0; k < coeffs.size(); ++k) out.segment(static_cast<Eigen::Index>(k) * d, d) = coeffs[k];
  return out;
}

ExtendedElement ExtendedElement::from_stacked(AlgebraPtr a, const Vec& v, int bound) {
  ExtendedElement e(a, bound);
  const int d = a->dim();
  for (int k = 0; k <= bound; ++k) e.coeffs[k] = v.segment(static_cast<Eigen::Index>(k) * d, d);
  return e;
}

ExtendedElement ExtendedElement::operator+(const ExtendedElement& o) const {
  if (o.bound() != bound()) throw SpecError("extended elements with different degree bounds");
  ExtendedElement r = *this;
  for (size_t k = 0; k < coeffs.size(); ++k) r.coeffs[k] += o.coeffs[k];
  r.overflow = overflow || o.overflow;
  return r;
}

ExtendedElement ExtendedElement::operator-(const ExtendedElement& o) const { return *this + o * cplx(-1.0); }

ExtendedElement ExtendedElement::operator*(cplx s) const {
  ExtendedElement r = *this;
  for (auto& c : r.coeffs) c *= s;
  return r;
}

double ExtendedElement::max_abs() const {
  double m = 0.0;
  for (const auto& c : coeffs) m = std::max(m, linalg::max_abs(c));
  return m;
}

ExtendedElement multiply(const ExtendedElement& a, const ExtendedElement& b) {
  if (a.bound() != b.bound()) throw SpecError("extended elements with different degree bounds");
  ExtendedElement r(a.alg, a.bound());
  r.overflow = a.overflow || b.overflow;
  for (int i = 0; i <= a.bound(); ++i)
    for (int j = 0; j <= b.bound(); ++j) {
      const Vec p = a.alg->mul(a.coeffs[i], b.coeffs[j]);
      if (i + j > a.bound()) {
        if (linalg::max_abs(p) > kOverflowFloor) r.overflow = true;
        continue;
      }
      r.coeffs[i + j] += p;
    }
  return r;
}

ExtendedElement time_derivative(const ExtendedElement& a) {
  ExtendedElement r(a.alg, a.bound());
  r.overflow = a.overflow;
  for (int k = 1; k <= a.bound(); ++k) r.coeffs[k - 1] = double(k) * a.coeffs[k];
  return r;
}

double ExtendedForm::max_abs() const { return linalg::max_abs(comps); }

ExtendedSystem::ExtendedSystem(std::shared_ptr<const SymplecticStructure> s, int bound)
    : s_(std::move(s)), bound_(bound) {
  if (bound < 1) throw SpecError("degree bound must be at least 1");
  const auto& space = *s_->space();
  const int dim = algebra().dim();
  const int n = space.size();
  const int m = n + 1;
  Mat shift = Mat::Zero(bound + 1, bound + 1);
  for (int k = 0; k < bound; ++k) shift(k, k + 1) = double(k + 1);
  const Mat id_t = Mat::Identity(bound + 1, bound + 1);
  const Mat id_a = Mat::Identity(dim, dim);
  auto kron = [](const Mat& p, const Mat& q) {
    Mat out = Mat::Zero(p.rows() * q.rows(), p.cols() * q.cols());
    for (Eigen::Index i = 0; i < p.rows(); ++i)
      for (Eigen::Index j = 0; j < p.cols(); ++j)
        if (p(i, j) != cplx(0.0)) out.block(i * q.rows(), j * q.cols(), q.rows(), q.cols()) = p(i, j) * q;
    return out;
  };
  frame_.action.push_back(kron(shift, id_a));
  frame_.parity.push_back(0);
  for (int a = 0; a < n; ++a) {
    frame_.action.push_back(kron(id_t, space[a].m));
    frame_.parity.push_back(space.parity(a));
  }
  frame_.closure.assign(static_cast<size_t>(m) * m, Vec::Zero(m));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      frame_.closure[static_cast<size_t>(a + 1) * m + b + 1].tail(n) = space.bracket(a, b);
  for (int p = 0; p <= 3; ++p) layouts_.push_back(Layout::get(frame_.parity, p));
}

const Layout& ExtendedSystem::layout(int degree) const {
  if (degree < 0 || degree >= static_cast<int>(layouts_.size())) throw SpecError("extended forms up to degree 3");
  return *layouts_[degree];
}

ExtendedElement ExtendedSystem::zero() const { return ExtendedElement(s_->space()->algebra(), bound_); }

ExtendedElement ExtendedSystem::constant(const Vec& a) const {
  ExtendedElement e = zero();
  e.coeffs[0] = a;
  return e;
}

ExtendedElement ExtendedSystem::element(std::vector<Vec> coeffs) const {
  ExtendedElement e = zero();
  for (size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k].size() != algebra().dim()) throw SpecError("coefficient has the wrong size");
    if (static_cast<int>(k) > bound_) {
      if (linalg::max_abs(coeffs[k]) > 0.0) throw SpecError("polynomial degree exceeds the degree bound");
      continue;
    }
    e.coeffs[k] = coeffs[k];
  }
  return e;
}

ExtendedElement ExtendedSystem::bracket(const ExtendedElement& a, const ExtendedElement& b) const {
  ExtendedElement r = zero();
  r.overflow = a.overflow || b.overflow;
  for (int i = 0; i <= bound_; ++i)
    for (int j = 0; j <= bound_; ++j) {
      if (linalg::max_abs(a.coeffs[i]) == 0.0 || linalg::max_abs(b.coeffs[j]) == 0.0) continue;
      const Vec p = s_->bracket(a.coeffs[i], b.coeffs[j]);
      if (i + j > bound_) {
        if (linalg::max_abs(p) > kOverflowFloor) r.overflow = true;
        continue;
      }
      r.coeffs[i + j] += p;
    }
  return r;
}

ExtendedElement ExtendedSystem::apply(const ExtendedDerivation& z, const ExtendedElement& f) const {
  const int dim = algebra().dim();
  const Vec fs = f.stacked();
  Vec acc = Vec::Zero(fs.size());
  bool over = f.overflow || z.overflow;
  for (int a = 0; a < lifted_size(); ++a) {
    if (z.z.row(a).cwiseAbs().maxCoeff() == 0.0) continue;
    acc += convolve(z.z.row(a), frame_.action[a] * fs, dim, over);
  }
  ExtendedElement r = ExtendedElement::from_stacked(s_->space()->algebra(), acc, bound_);
  r.overflow = over;
  return r;
}

void ExtendedSystem::require_hamiltonian(const ExtendedElement& h) const {
  const auto& alg = algebra();
  if (h.bound() != bound_) throw SpecError("Hamiltonian has a different degree bound");
  for (const auto& c : h.coeffs) {
    const double tol = s_->tol() * std::max(1.0, linalg::max_abs(c));
    if (linalg::max_abs(alg.odd_part(c)) > tol) throw SpecError("Hamiltonian must be even");
    if (linalg::max_abs(Vec(alg.star(c) - c)) > tol) throw SpecError("Hamiltonian must be hermitian");
  }
}

ExtendedDerivation ExtendedSystem::evolution(const ExtendedElement& h) const {
  require_hamiltonian(h);
  ExtendedDerivation y{Mat::Zero(lifted_size(), bound_ + 1), 0, h.overflow};
  y.z(0, 0) = 1.0;
  for (int k = 0; k <= bound_; ++k) y.z.block(1, k, lifted_size() - 1, 1) = s_->hamiltonian_coords(h.coeffs[k]);
  return y;
}

ExtendedDerivation ExtendedSystem::lift(const Vec& g) const {
  const int p = algebra().parity_of(g, s_->tol());
  if (p < 0) throw SpecError("lift of a mixed element");
  ExtendedDerivation y{Mat::Zero(lifted_size(), bound_ + 1), p, false};
  y.z.block(1, 0, lifted_size() - 1, 1) = s_->hamiltonian_coords(g);
  return y;
}

Vec ExtendedSystem::value(const ExtendedForm& w, const std::vector<int>& idx) const {
  const auto loc = layout(w.degree).locate(idx.data());
  if (loc.sign == 0) return Vec::Zero(w.comps.rows());
  return double(loc.sign) * w.comps.col(loc.slot);
}

ExtendedForm ExtendedSystem::d(const ExtendedForm& w) const {
  ExtendedForm out{w.degree + 1, w.parity, Mat(), w.overflow};
  out.comps = cochain_differential(frame_, w.degree, w.parity, w.comps);
  return out;
}

ExtendedForm ExtendedSystem::interior(const ExtendedDerivation& z, const ExtendedForm& w) const {
  if (z.parity != 0) throw SpecError("interior product on the extended algebra needs an even derivation");
  if (w.degree < 1) throw SpecError("interior product of a 0-form");
  const auto& out_layout = layout(w.degree - 1);
  const int dim = algebra().dim();
  ExtendedForm out{w.degree - 1, w.parity, Mat::Zero(w.comps.rows(), out_layout.size()), w.overflow || z.overflow};
  std::vector<int> idx(w.degree);
  for (int s = 0; s < out_layout.size(); ++s) {
    const int* t = out_layout.tuple(s);
    std::copy(t, t + w.degree - 1, idx.begin() + 1);
    Vec acc = Vec::Zero(w.comps.rows());
    for (int a = 0; a < lifted_size(); ++a) {
      if (z.z.row(a).cwiseAbs().maxCoeff() == 0.0) continue;
      idx[0] = a;
      acc += convolve(z.z.row(a), value(w, idx), dim, out.overflow);
    }
    out.comps.col(s) = acc;
  }
  return out;
}

ExtendedForm ExtendedSystem::zero_form(const ExtendedElement& f) const {
  int parity = 0;
  for (const auto& c : f.coeffs) {
    const int p = algebra().parity_of(c, s_->tol());
    if (p < 0) throw SpecError("0-form from a mixed-parity element");
    if (linalg::max_abs(c) > 0.0) parity = p;
  }
  return {0, parity, Mat(f.stacked()), f.overflow};
}

ExtendedForm ExtendedSystem::omega_lifted() const {
  const auto& lay = layout(2);
  const auto& w = s_->omega();
  ExtendedForm out{2, 0, Mat::Zero(static_cast<Eigen::Index>(algebra().dim()) * (bound_ + 1), lay.size()), false};
  for (int s = 0; s < lay.size(); ++s) {
    const int* t = lay.tuple(s);
    if (t[0] == 0 || t[1] == 0) continue;
    out.comps.col(s).head(algebra().dim()) = w.at(std::vector<int>{t[0] - 1, t[1] - 1});
  }
  return out;
}

ExtendedForm ExtendedSystem::presymplectic_omega(const ExtendedElement& h) const {
  require_hamiltonian(h);
  ExtendedForm out = omega_lifted();
  out.overflow = h.overflow || h.degree() > bound_ - 1;
  const auto& lay = layout(2);
  const Vec hs = h.stacked();
  for (int s = 0; s < lay.size(); ++s) {
    const int* t = lay.tuple(s);
    if (t[0] == 0 && t[1] != 0) out.comps.col(s) = frame_.action[t[1]] * hs;
  }
  return out;
}

ExtendedForm ExtendedSystem::poincare_cartan(const ExtendedElement& h, const Form& theta) const {
  require_hamiltonian(h);
  if (theta.space() != s_->space() || theta.degree() != 1) throw SpecError("potential must be a 1-form on the same space");
  const int dim = algebra().dim();
  ExtendedForm out{1, theta.parity(), Mat::Zero(static_cast<Eigen::Index>(dim) * (bound_ + 1), lifted_size()),
                   h.overflow};
  out.comps.col(0) = -h.stacked();
  for (int a = 1; a < lifted_size(); ++a) out.comps.col(a).head(dim) = theta.at(std::vector<int>{a - 1});
  return out;
}

Report check_evolution(const ExtendedSystem& sys, const ExtendedElement& h, double tol) {
  Report r;
  r.title = "extended-evolution";
  r.data["degree_bound"] = sys.bound();
  const ExtendedForm big = sys.presymplectic_omega(h);
  const ExtendedDerivation y = sys.evolution(h);
  r.add(make_flag("degree-fits", "deg H <= D - 1", !big.overflow));

  const ExtendedForm dbig = sys.d(big);
  add_guarded(r, "omega-closed", "d Omega = 0", dbig.max_abs(), tol, dbig.overflow);

  Eigen::RowVectorXcd dt_row = y.z.row(0);
  dt_row(0) -= 1.0;
  r.add(make_check("dt-of-evolution", "dt(Y^_H) = 1", dt_row.cwiseAbs().maxCoeff(), tol));

  const ExtendedForm iy = sys.interior(y, big);
  add_guarded(r, "kernel", "i_{Y^_H} Omega = 0", iy.max_abs(), tol, iy.overflow);

  ExtendedDerivation ytilde = y;
  ytilde.z(0, 0) = 0.0;
  ExtendedForm cons = sys.interior(ytilde, sys.omega_lifted());
  const Vec hs = h.stacked();
  for (int a = 1; a < sys.lifted_size(); ++a) cons.comps.col(a) += sys.frame().action[a] * hs;
  add_guarded(r, "spatial-consistency", "i_{Y~_H} w~ = -d~H", cons.max_abs(), tol, cons.overflow);

  std::optional<Form> theta = sys.structure().potential();
  if (!theta) theta = find_potential(sys.structure().omega(), tol);
  if (theta) {
    const ExtendedForm dtheta = sys.d(sys.poincare_cartan(h, *theta));
    add_guarded(r, "poincare-cartan", "d Theta = Omega", linalg::max_abs(Mat(dtheta.comps - big.comps)), tol,
                dtheta.overflow || big.overflow);
  }
  r.data["exact"] = theta.has_value();

  if (h.degree() <= 0) {
    double res = 0.0;
    const auto& alg = sys.algebra();
    for (int i = 0; i < alg.dim(); ++i) {
      const Vec e = alg.basis_vector(i);
      const ExtendedElement v = sys.apply(y, sys.constant(e));
      res = std::max(res, (v - sys.constant(sys.structure().bracket(h.coeffs[0], e))).max_abs());
    }
    r.add(make_check("static-limit", "Y^_H A = {H, A} for time-independent A", res, tol));
  }
  return r;
}

double evolution_equation_residual(const ExtendedSystem& sys, const ExtendedElement& h, const ExtendedElement& f) {
  const ExtendedElement lhs = sys.apply(sys.evolution(h), f);
  const ExtendedElement rhs = time_derivative(f) + sys.bracket(h, f);
  return (lhs - rhs).max_abs();
}

NoetherResult noether_check(const ExtendedSystem& sys, const ExtendedElement& h, const ExtendedDerivation& z,
                            double tol) {
  NoetherResult res;
  auto& r = res.report;
  r.title = "noether";
  if (z.parity != 0) throw SpecError("Noether generator must be even");
  if (z.z.rows() != sys.lifted_size() || z.z.cols() != sys.bound() + 1)
    throw SpecError("Noether generator has the wrong shape");
  const auto& alg = sys.algebra();
  const ExtendedForm big = sys.presymplectic_omega(h);
  const ExtendedForm beta = sys.interior(z, big);
  const ExtendedForm dbeta = sys.d(beta);
  res.truncated = beta.overflow;
  res.closed = dbeta.max_abs() <= tol;
  add_guarded(r, "locally-hamiltonian", "d(i_Z Omega) = 0", dbeta.max_abs(), tol, dbeta.overflow);

  ExtendedElement t_unit = sys.zero();
  t_unit.coeffs[1] = alg.unit_vector();
  const ExtendedElement zt = sys.apply(z, t_unit);
  double off = 0.0;
  for (const auto& c : zt.coeffs) off = std::max(off, linalg::max_abs(Vec(c - c(alg.unit()) * alg.unit_vector())));
  r.add(make_check("time-algebra", "Z(t I) lies in the time functions", off, tol));

  const Eigen::Index v = beta.comps.rows();
  const int m = sys.lifted_size();
  Mat sysm(v * m, v);
  Vec rhs(v * m);
  for (int a = 0; a < m; ++a) {
    sysm.middleRows(a * v, v) = sys.frame().action[a];
    rhs.segment(a * v, v) = -beta.comps.col(a);
  }
  const auto ls = linalg::solve(sysm, rhs, tol);
  res.solve_residual = ls.residual;
  res.exact = ls.residual <= 1e3 * tol;
  r.add(make_check("exact", "i_Z Omega = -d h^", ls.residual, 1e3 * tol,
                   res.exact ? std::string() : "no extended element solves the equation"));
  r.data["exact"] = res.exact;
  if (!res.exact) return res;

  ExtendedElement inv = ExtendedElement::from_stacked(sys.algebra_ptr(), ls.x, sys.bound());
  inv.overflow = beta.overflow;
  const ExtendedElement flow = sys.apply(sys.evolution(h), inv);
  res.conservation_residual = flow.max_abs();
  res.truncated = res.truncated || flow.overflow;
  res.conserved = !res.truncated && res.conservation_residual <= tol;
  add_guarded(r, "conserved", "Y^_H(h^) = 0", res.conservation_residual, tol, res.truncated);
  r.data["conserved"] = res.conserved;
  json coeffs = json::array();
  for (int k = 0; k <= sys.bound(); ++k) {
    json e = json::object();
    for (int i = 0; i < alg.dim(); ++i) {
      const cplx c = inv.coeffs[k](i);
      if (std::abs(c) > tol) e[alg.label(i)] = scalar_json(c);
    }
    coeffs.push_back(e);
  }
  r.data["invariant"] = coeffs;
  res.invariant = std::move(inv);
  return res;
}

}  // namespace ncsymp
