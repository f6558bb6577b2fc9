#include "ncsymp/tensor.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace ncsymp {

namespace {

struct Piece {
  Vec coords;  // in the factor's derivation space
  int parity;
  int index;  // basis element of the other factor
};

struct Reading {
  std::vector<Piece> first;   // Z_j with f_j
  std::vector<Piece> second;  // W_i with e_i
};

Vec sym(const Superalgebra& alg, int u, int v) {
  const Vec eu = alg.basis_vector(u), ev = alg.basis_vector(v);
  return 0.5 * (alg.mul(eu, ev) + double(eta(alg.parity(u), alg.parity(v))) * alg.mul(ev, eu));
}

Reading read_derivation(const Superderivation& x, const DerivationSpace& s1, const DerivationSpace& s2) {
  const auto& a1 = *s1.algebra();
  const auto& a2 = *s2.algebra();
  const int d1 = a1.dim(), d2 = a2.dim();
  Reading r;
  for (int j = 0; j < d2; ++j) {
    Mat z(d1, d1);
    for (int c = 0; c < d1; ++c) {
      const double s = eta(a2.parity(j), a1.parity(c));
      for (int i = 0; i < d1; ++i) z(i, c) = s * x.m(i * d2 + j, c * d2 + a2.unit());
    }
    if (linalg::max_abs(z) < 1e-13) continue;
    auto c = s1.try_coords(z);
    if (!c) throw MathError("derivation of the product acts on the first factor outside its derivation space");
    r.first.push_back({*c, (x.parity + a2.parity(j)) % 2, j});
  }
  for (int i = 0; i < d1; ++i) {
    Mat w(d2, d2);
    for (int c = 0; c < d2; ++c)
      for (int l = 0; l < d2; ++l) w(l, c) = x.m(i * d2 + l, a1.unit() * d2 + c);
    if (linalg::max_abs(w) < 1e-13) continue;
    auto c = s2.try_coords(w);
    if (!c) throw MathError("derivation of the product acts on the second factor outside its derivation space");
    r.second.push_back({*c, (x.parity + a1.parity(i)) % 2, i});
  }
  return r;
}

cplx ratio_fit(const Vec& p, const Vec& q, double* residual) {
  const double den = p.squaredNorm();
  const cplx l = den > 0.0 ? p.dot(q) / den : cplx(0.0);
  *residual = (l * p - q).norm() / std::max(1.0, q.norm());
  return l;
}

}  // namespace

Mat operator_tensor(const Superalgebra& first, const Mat& p, const Mat& q, int q_parity) {
  const Mat left = q_parity ? Mat(p * first.grading_operator()) : p;
  return Eigen::kroneckerProduct(left, q).eval();
}

Mat lift_first(const Superalgebra& first, const Superalgebra& second, const Mat& x) {
  return operator_tensor(first, x, Mat::Identity(second.dim(), second.dim()), 0);
}

Mat lift_second(const Superalgebra& first, const Mat& x, int parity) {
  return operator_tensor(first, Mat::Identity(first.dim(), first.dim()), x, parity);
}

Form induced_two_form(const SymplecticStructure& s1, const SymplecticStructure& s2, const SpacePtr& space) {
  const auto& a1 = s1.algebra();
  const auto& a2 = s2.algebra();
  const auto& t = *space->algebra();
  if (t.dim() != a1.dim() * a2.dim()) throw SpecError("derivation space is not on the product algebra");
  std::vector<Reading> reads;
  reads.reserve(space->size());
  for (int a = 0; a < space->size(); ++a) reads.push_back(read_derivation((*space)[a], *s1.space(), *s2.space()));
  const auto& w1 = s1.omega();
  const auto& w2 = s2.omega();
  Form w(space, 2, 0);
  for (int s = 0; s < w.slots(); ++s) {
    const int* idx = w.layout().tuple(s);
    const Reading& x = reads[idx[0]];
    const Reading& y = reads[idx[1]];
    Vec acc = Vec::Zero(t.dim());
    for (const auto& zj : x.first)
      for (const auto& zk : y.first) {
        const double sign = eta(a2.parity(zj.index), zk.parity);
        acc += sign * tensor_element(w1.evaluate({zj.coords, zk.coords}), sym(a2, zj.index, zk.index));
      }
    for (const auto& wi : x.second)
      for (const auto& wl : y.second) {
        const double sign = eta(a1.parity(wl.index), wi.parity);
        acc += sign * tensor_element(sym(a1, wi.index, wl.index), w2.evaluate({wi.coords, wl.coords}));
      }
    w.comps().col(s) = acc;
  }
  return w;
}

LambdaFit fit_lambda(const SymplecticStructure& s) {
  const auto& alg = s.algebra();
  const int d = alg.dim();
  const Eigen::Index len = static_cast<Eigen::Index>(d) * d * d;
  Vec p(len), q(len);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Vec ei = alg.basis_vector(i), ej = alg.basis_vector(j);
      p.segment(static_cast<Eigen::Index>(i * d + j) * d, d) = s.bracket(ei, ej);
      q.segment(static_cast<Eigen::Index>(i * d + j) * d, d) = -alg.supercommutator(ei, ej);
    }
  LambdaFit f;
  f.determined = p.norm() > s.tol();
  f.lambda = ratio_fit(p, q, &f.residual);
  return f;
}

TensorVerdict tensor_verdict(const SymplecticStructure& s1, const SymplecticStructure& s2, double tol) {
  TensorVerdict res;
  Report& r = res.report;
  r.title = "tensor product symplectic structure";
  const AlgebraPtr& a1 = s1.space()->algebra();
  const AlgebraPtr& a2 = s2.space()->algebra();
  res.product = tensor_product(a1, a2);
  const auto space = DerivationSpace::full(res.product, tol);
  const Form w = induced_two_form(s1, s2, space);
  res.omega = w;
  const bool sc1 = a1->is_supercommutative(tol), sc2 = a2->is_supercommutative(tol);
  r.data["factor1_supercommutative"] = sc1;
  r.data["factor2_supercommutative"] = sc2;
  r.data["sder_dimension"] = space->size();

  // Restrictions to lifted factor derivations.
  double res1 = 0.0, res2 = 0.0;
  const auto& sp1 = *s1.space();
  const auto& sp2 = *s2.space();
  std::vector<Vec> l1(sp1.size()), l2(sp2.size());
  for (int a = 0; a < sp1.size(); ++a) l1[a] = space->coords(lift_first(*a1, *a2, sp1[a].m));
  for (int a = 0; a < sp2.size(); ++a) l2[a] = space->coords(lift_second(*a1, sp2[a].m, sp2[a].parity));
  const Vec i1 = a1->unit_vector(), i2 = a2->unit_vector();
  for (int a = 0; a < sp1.size(); ++a)
    for (int b = 0; b < sp1.size(); ++b) {
      const Vec want = tensor_element(s1.omega().at({a, b}), i2);
      res1 = std::max(res1, linalg::max_abs(Vec(w.evaluate({l1[a], l1[b]}) - want)));
    }
  for (int a = 0; a < sp2.size(); ++a)
    for (int b = 0; b < sp2.size(); ++b) {
      const Vec want = tensor_element(i1, s2.omega().at({a, b}));
      res2 = std::max(res2, linalg::max_abs(Vec(w.evaluate({l2[a], l2[b]}) - want)));
    }
  r.add(make_check("restriction-1", "w on lifts of factor 1 = w1 (x) I2", res1, tol));
  r.add(make_check("restriction-2", "w on lifts of factor 2 = I1 (x) w2", res2, tol));

  const double dw = exterior_derivative(w).max_abs();
  r.data["closed"] = dw <= tol;
  r.data["closed_residual"] = fmt_double(dw);

  auto v = verify_symplectic(w, tol, false);
  r.data["real"] = v.report.data["real"];
  r.data["unique"] = v.unique;
  r.data["exists"] = v.exists;
  const bool nondegenerate = v.unique && v.exists;

  if (!nondegenerate) {
    res.verdict = "degenerate";
    const int k = v.witness >= 0 ? v.witness : res.product->unit();
    res.witness = res.product->label(k);
    res.witness_mode = v.witness_mode.empty() ? "not unique" : v.witness_mode;
    r.data["witness"] = res.witness;
    r.data["witness_mode"] = res.witness_mode;
  } else if (sc1 && sc2) {
    res.verdict = "both-supercommutative-valid";
    res.lambda = 0.0;
  } else {
    const LambdaFit f1 = fit_lambda(s1), f2 = fit_lambda(s2);
    r.data["lambda_fit_residual_1"] = fmt_double(f1.residual);
    r.data["lambda_fit_residual_2"] = fmt_double(f2.residual);
    const double fit_tol = 1e3 * tol;
    bool consistent = !sc1 && !sc2 && f1.determined && f2.determined && f1.residual <= fit_tol &&
                      f2.residual <= fit_tol && std::abs(f1.lambda - f2.lambda) <= fit_tol * std::abs(f1.lambda);
    res.lambda = f1.lambda;
    r.add(make_check("lambda-factor-1", "lambda {A,C}1 = -[A,C]", f1.residual, fit_tol));
    r.add(make_check("lambda-factor-2", "lambda {B,D}2 = -[B,D]", f2.residual, fit_tol));
    r.add(make_check("lambda-universal", "same lambda on both factors", std::abs(f1.lambda - f2.lambda), fit_tol));
    if (consistent) {
      const double e1 = (s1.omega() - canonical_form(s1.space(), tol) * (-res.lambda)).max_abs();
      const double e2 = (s2.omega() - canonical_form(s2.space(), tol) * (-res.lambda)).max_abs();
      r.add(make_check("quantum-form-1", "w1 = -lambda w_c", e1, fit_tol));
      r.add(make_check("quantum-form-2", "w2 = -lambda w_c", e2, fit_tol));
      consistent = e1 <= fit_tol && e2 <= fit_tol;
    }
    res.verdict = consistent ? "quantum-matched-valid" : "inconsistent";
  }
  r.data["verdict"] = res.verdict;
  if (res.verdict == "quantum-matched-valid" || res.verdict == "both-supercommutative-valid") {
    json lam = json::object();
    lam["re"] = fmt_double(res.lambda.real());
    lam["im"] = fmt_double(res.lambda.imag());
    r.data["lambda"] = lam;
    r.data["h0"] = fmt_double(std::abs(res.lambda));
  }
  if (v.valid()) res.structure = std::move(v.structure);
  return res;
}

Mat tensor_ansatz(const SymplecticStructure& s1, const SymplecticStructure& s2, const Vec& a, const Vec& b,
                  cplx lambda) {
  const auto& a1 = s1.algebra();
  const auto& a2 = s2.algebra();
  const int pa = a1.parity_of(a, s1.tol()), pb = a2.parity_of(b, s2.tol());
  if (pa < 0 || pb < 0) throw SpecError("tensor ansatz needs homogeneous factors");
  const Mat ya = s1.hamiltonian_matrix(a), yb = s2.hamiltonian_matrix(b);
  return operator_tensor(a1, ya, a2.left_mult(b), pb) + operator_tensor(a1, a1.left_mult(a), yb, pb) +
         lambda * operator_tensor(a1, ya, yb, pb);
}

TensorBracket::TensorBracket(const SymplecticStructure& s1, const SymplecticStructure& s2) {
  const auto& a1 = s1.algebra();
  const auto& a2 = s2.algebra();
  product_ = tensor_product(s1.space()->algebra(), s2.space()->algebra());
  const int d1 = a1.dim(), d2 = a2.dim(), d = d1 * d2;
  left_.assign(d, Mat::Zero(d, d));
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d2; ++j)
      for (int k = 0; k < d1; ++k)
        for (int l = 0; l < d2; ++l) {
          const Vec A = a1.basis_vector(i), C = a1.basis_vector(k);
          const Vec B = a2.basis_vector(j), D = a2.basis_vector(l);
          const double s = eta(a2.parity(j), a1.parity(k));
          const Vec v = tensor_element(s1.bracket(A, C), sym(a2, j, l)) + tensor_element(sym(a1, i, k), s2.bracket(B, D));
          left_[i * d2 + j].col(k * d2 + l) = s * v;
        }
}

TensorBracket TensorBracket::with_lambda(const SymplecticStructure& s1, const SymplecticStructure& s2, cplx lambda) {
  const auto& a1 = s1.algebra();
  const auto& a2 = s2.algebra();
  TensorBracket tb;
  tb.product_ = tensor_product(s1.space()->algebra(), s2.space()->algebra());
  const int d1 = a1.dim(), d2 = a2.dim(), d = d1 * d2;
  tb.left_.assign(d, Mat::Zero(d, d));
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d2; ++j)
      for (int k = 0; k < d1; ++k)
        for (int l = 0; l < d2; ++l) {
          const Vec A = a1.basis_vector(i), C = a1.basis_vector(k);
          const Vec B = a2.basis_vector(j), D = a2.basis_vector(l);
          const double s = eta(a2.parity(j), a1.parity(k));
          const Vec ac = s1.bracket(A, C), bd = s2.bracket(B, D);
          const Vec v = tensor_element(ac, a2.mul(B, D)) + tensor_element(a1.mul(A, C), bd) +
                        lambda * tensor_element(ac, bd);
          tb.left_[i * d2 + j].col(k * d2 + l) = s * v;
        }
  return tb;
}

Mat TensorBracket::left(const Vec& x) const {
  Mat m = Mat::Zero(left_.front().rows(), left_.front().cols());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x(i) != cplx(0.0)) m += x(i) * left_[i];
  return m;
}

Vec TensorBracket::operator()(const Vec& x, const Vec& y) const { return left(x) * y; }

Vec coupled_hamiltonian(const Superalgebra& product, const Vec& h1, const Vec& h2, const Vec& h_int) {
  const auto* f = product.factors();
  if (!f) throw SpecError("coupled Hamiltonian needs a tensor product algebra");
  return tensor_element(h1, f->second->unit_vector()) + tensor_element(f->first->unit_vector(), h2) + h_int;
}

Vec coupled_evolution(const TensorBracket& pb, const Vec& h1, const Vec& h2, const Vec& h_int, const Vec& x,
                      double t) {
  const Vec h = coupled_hamiltonian(*pb.product(), h1, h2, h_int);
  const Mat gen = pb.left(h) * cplx(t);
  return gen.exp() * x;
}

}  // namespace ncsymp
