#include "ncsymp/derivation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <mutex>
#include <random>
#include <tuple>

#include "ncsymp/linalg.hpp"

namespace ncsymp {

namespace {

Vec flatten(const Mat& m) { return Eigen::Map<const Vec>(m.data(), m.size()); }

Mat unflatten(const Vec& v, Eigen::Index n) { return Eigen::Map<const Mat>(v.data(), n, n); }

// Incrementally maintained orthonormal basis used to grow spans.
struct SpanBuilder {
  std::vector<Vec> q;
  bool add(const Vec& v) {
    const double nv = v.norm();
    if (nv == 0.0) return false;
    Vec r = v;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : q) r -= b * b.dot(r);
    if (r.norm() <= 1e-9 * nv) return false;
    q.push_back(r / r.norm());
    return true;
  }
  bool contains(const Vec& v) const {
    Vec r = v;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : q) r -= b * b.dot(r);
    return r.norm() <= 1e-9 * std::max(1.0, v.norm());
  }
};

// Words in the generators spanning the algebra, in breadth-first order. Word r
// (r > 0) is word[parent] * e_gen.
struct WordBasis {
  std::vector<Vec> word;
  std::vector<int> parent;
  std::vector<int> gen;
  std::vector<int> parity;
};

WordBasis span_words(const Superalgebra& alg, const std::vector<int>& gens) {
  WordBasis w;
  SpanBuilder span;
  const Vec u = alg.unit_vector();
  span.add(u);
  w.word.push_back(u);
  w.parent.push_back(-1);
  w.gen.push_back(-1);
  w.parity.push_back(0);
  for (size_t r = 0; r < w.word.size() && static_cast<int>(w.word.size()) < alg.dim(); ++r)
    for (int g : gens) {
      const Vec v = alg.mul(w.word[r], alg.basis_vector(g));
      if (span.add(v)) {
        w.word.push_back(v);
        w.parent.push_back(static_cast<int>(r));
        w.gen.push_back(g);
        w.parity.push_back((w.parity[r] + alg.parity(g)) % 2);
      }
    }
  return w;
}

Mat stack_rows(const std::vector<Mat>& blocks) {
  Eigen::Index rows = 0;
  const Eigen::Index cols = blocks.empty() ? 0 : blocks.front().cols();
  for (const auto& b : blocks) rows += b.rows();
  Mat out(rows, cols);
  Eigen::Index r = 0;
  for (const auto& b : blocks) {
    out.middleRows(r, b.rows()) = b;
    r += b.rows();
  }
  return out;
}

std::vector<Superderivation> to_derivations(const AlgebraPtr& alg, const Mat& flat_basis, int parity) {
  std::vector<Superderivation> out;
  for (Eigen::Index c = 0; c < flat_basis.cols(); ++c)
    out.push_back(Superderivation{alg, unflatten(flat_basis.col(c), alg->dim()), parity});
  return out;
}

}  // namespace

double leibniz_residual(const Superalgebra& alg, const Mat& x, int parity) {
  const int n = alg.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const Mat lhs = x * alg.left(i) - double(eta(parity, alg.parity(i))) * alg.left(i) * x;
    const Mat rhs = alg.left_mult(x.col(i));
    worst = std::max(worst, linalg::max_abs(Mat(lhs - rhs)));
  }
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (alg.parity(k) != (alg.parity(j) + parity) % 2) worst = std::max(worst, std::abs(x(k, j)));
  return worst;
}

Superderivation inner(const AlgebraPtr& alg, const Vec& a, double tol) {
  const int p = alg->parity_of(a, tol);
  if (p < 0) throw SpecError("inner derivation of a mixed-parity element: split it into parity parts first");
  Mat m(alg->dim(), alg->dim());
  for (int j = 0; j < alg->dim(); ++j) m.col(j) = alg->supercommutator(a, alg->basis_vector(j));
  return Superderivation{alg, m, p};
}

Mat graded_commutator(const Mat& x, int px, const Mat& y, int py) {
  return x * y - double(eta(px, py)) * y * x;
}

Superderivation bracket(const Superderivation& x, const Superderivation& y) {
  return Superderivation{x.alg, graded_commutator(x.m, x.parity, y.m, y.parity), (x.parity + y.parity) % 2};
}

Mat sder_star_matrix(const Superalgebra& alg, const Mat& x, int parity) {
  const Mat& s = alg.star_matrix();
  Mat out = s * x.conjugate() * s.conjugate();
  if (parity) out = out * alg.grading_operator();
  return out;
}

Superderivation sder_star(const Superderivation& x) {
  return Superderivation{x.alg, sder_star_matrix(*x.alg, x.m, x.parity), x.parity};
}

std::vector<int> generating_set(const Superalgebra& alg, double tol) {
  (void)tol;
  std::vector<int> gens;
  WordBasis current = span_words(alg, gens);
  SpanBuilder span;
  for (const auto& w : current.word) span.add(w);
  for (int k = 0; k < alg.dim() && static_cast<int>(span.q.size()) < alg.dim(); ++k) {
    if (k == alg.unit() || span.contains(alg.basis_vector(k))) continue;
    gens.push_back(k);
    current = span_words(alg, gens);
    span = SpanBuilder{};
    for (const auto& w : current.word) span.add(w);
  }
  return gens;
}

// A superderivation is fixed by its values on generators; the Leibniz rule on
// pairs (e_i, generator) then suffices for it to hold on all pairs.
std::vector<Superderivation> sder_basis(const AlgebraPtr& alg, double tol) {
  const int n = alg->dim();
  const std::vector<int> gens = generating_set(*alg, tol);
  const WordBasis words = span_words(*alg, gens);
  if (static_cast<int>(words.word.size()) != n) throw MathError("generator search failed to span the algebra");
  Mat wm(n, n);
  for (int r = 0; r < n; ++r) wm.col(r) = words.word[r];
  const Mat winv = wm.fullPivLu().inverse();

  std::vector<Superderivation> out;
  for (int p = 0; p < 2; ++p) {
    // Unknowns: X(e_g) restricted to components of parity |g| + p.
    std::vector<int> offset;
    std::vector<std::vector<int>> comps;
    int m = 0;
    for (int g : gens) {
      offset.push_back(m);
      std::vector<int> c;
      for (int k = 0; k < n; ++k)
        if (alg->parity(k) == (alg->parity(g) + p) % 2) c.push_back(k);
      m += static_cast<int>(c.size());
      comps.push_back(std::move(c));
    }
    auto select = [&](size_t s) {
      Mat e = Mat::Zero(n, m);
      for (size_t t = 0; t < comps[s].size(); ++t) e(comps[s][t], offset[s] + static_cast<int>(t)) = 1.0;
      return e;
    };
    auto gen_slot = [&](int g) { return static_cast<size_t>(std::find(gens.begin(), gens.end(), g) - gens.begin()); };

    std::vector<Mat> image(n, Mat::Zero(n, m));
    for (int r = 1; r < n; ++r) {
      const int par = words.parent[r];
      const int g = words.gen[r];
      image[r] = alg->right_mult(alg->basis_vector(g)) * image[par] +
                 double(eta(p, words.parity[par])) * alg->left_mult(words.word[par]) * select(gen_slot(g));
    }
    std::vector<Mat> b(n, Mat::Zero(n, m));
    for (int k = 0; k < n; ++k)
      for (int r = 0; r < n; ++r)
        if (winv(r, k) != cplx(0.0)) b[k] += winv(r, k) * image[r];

    std::vector<Mat> rows;
    for (int i = 0; i < n; ++i)
      for (size_t s = 0; s < gens.size(); ++s) {
        const int g = gens[s];
        Mat blk = -alg->right_mult(alg->basis_vector(g)) * b[i] -
                  double(eta(p, alg->parity(i))) * alg->left(i) * select(s);
        const Vec prod = alg->left(i).col(g);
        for (int k = 0; k < n; ++k)
          if (prod(k) != cplx(0.0)) blk += prod(k) * b[k];
        rows.push_back(std::move(blk));
      }
    const Mat ns = m == 0 ? Mat(0, 0) : linalg::null_space(stack_rows(rows), tol);
    Mat flat(n * n, ns.cols());
    for (Eigen::Index c = 0; c < ns.cols(); ++c) {
      Mat x(n, n);
      for (int k = 0; k < n; ++k) x.col(k) = b[k] * ns.col(c);
      flat.col(c) = flatten(x);
    }
    auto part = to_derivations(alg, linalg::canonical_basis(flat, tol), p);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::vector<Superderivation> inner_basis(const AlgebraPtr& alg, double tol) {
  const int n = alg->dim();
  std::vector<Superderivation> out;
  for (int p = 0; p < 2; ++p) {
    std::vector<Vec> cols;
    for (int i = 0; i < n; ++i)
      if (alg->parity(i) == p) cols.push_back(flatten(inner(alg, alg->basis_vector(i), tol).m));
    if (cols.empty()) continue;
    Mat flat(n * n, static_cast<Eigen::Index>(cols.size()));
    for (size_t c = 0; c < cols.size(); ++c) flat.col(static_cast<Eigen::Index>(c)) = cols[c];
    const Mat range = linalg::rank(flat, tol) == 0 ? Mat(n * n, 0) : Mat(flat);
    auto part = to_derivations(alg, linalg::canonical_basis(range, tol), p);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

Report check_isomorphism(const Superalgebra& source, const Superalgebra& target, const Mat& phi, double tol) {
  Report r;
  r.title = "isomorphism check";
  const int n = source.dim();
  if (phi.rows() != target.dim() || phi.cols() != n || target.dim() != n) {
    r.add(make_flag("shape", "phi is square of the algebra dimension", false));
    return r;
  }
  r.add(make_check("invertible", "rank phi = dim", double(n - linalg::rank(phi, tol)), 0.0));
  double prod = 0, star = 0, par = 0;
  for (int i = 0; i < n; ++i) {
    const Vec ei = source.basis_vector(i);
    const Vec pi = phi * ei;
    star = std::max(star, linalg::max_abs(Vec(phi * source.star(ei) - target.star(pi))));
    for (int k = 0; k < n; ++k)
      if (target.parity(k) != source.parity(i)) par = std::max(par, std::abs(pi(k)));
    for (int j = 0; j < n; ++j) {
      const Vec ej = source.basis_vector(j);
      prod = std::max(prod, linalg::max_abs(Vec(phi * source.mul(ei, ej) - target.mul(pi, phi * ej))));
    }
  }
  r.add(make_check("products", "phi(e_i e_j) = phi(e_i) phi(e_j)", prod, tol));
  r.add(make_check("unit", "phi(I) = I",
                   linalg::max_abs(Vec(phi * source.unit_vector() - target.unit_vector())), tol));
  r.add(make_check("parity", "|phi(e_i)| = |e_i|", par, tol));
  r.add(make_check("star", "phi(A*) = phi(A)*", star, tol));
  return r;
}

Superderivation pushforward(const AlgebraPtr& target, const Mat& phi, const Superderivation& x, double tol) {
  const Report iso = check_isomorphism(*x.alg, *target, phi, tol);
  if (!iso.ok()) throw SpecError("pushforward requires a *-isomorphism; check failed");
  return Superderivation{target, phi * x.m * phi.inverse(), x.parity};
}

TensorSplit decompose_tensor(const Superderivation& x, double tol) {
  const auto* f = x.alg->factors();
  if (!f) throw SpecError("decompose_tensor needs a derivation of a tensor product algebra");
  if (leibniz_residual(x) > tol * std::max(1.0, linalg::max_abs(x.m)))
    throw SpecError("decompose_tensor: input fails the Leibniz check");
  const auto& a1 = *f->first;
  const auto& a2 = *f->second;
  const auto& alg = *x.alg;
  const int d1 = a1.dim(), d2 = a2.dim(), n = alg.dim();
  Mat m1 = Mat::Zero(n, n), m2 = Mat::Zero(n, n);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d2; ++j) {
      const Vec left_copy = alg.basis_vector(i * d2 + a2.unit());   // e_i (x) I
      const Vec right_copy = alg.basis_vector(a1.unit() * d2 + j);  // I (x) f_j
      // X(a (x) b) = X(a (x) I)(I (x) b) + (-1)^{|X||a|} (a (x) I) X(I (x) b).
      m1.col(i * d2 + j) = alg.mul(x.m * left_copy, right_copy);
      m2.col(i * d2 + j) = double(eta(x.parity, a1.parity(i))) * alg.mul(left_copy, x.m * right_copy);
    }
  TensorSplit s;
  s.first = Superderivation{x.alg, m1, x.parity};
  s.second = Superderivation{x.alg, m2, x.parity};
  s.reconstruction = linalg::max_abs(Mat(m1 + m2 - x.m));
  s.leibniz_first = leibniz_residual(s.first);
  s.leibniz_second = leibniz_residual(s.second);
  return s;
}

std::shared_ptr<const DerivationSpace> DerivationSpace::make(AlgebraPtr alg, std::vector<Superderivation> basis,
                                                             double tol) {
  std::shared_ptr<DerivationSpace> s(new DerivationSpace());
  s->alg_ = std::move(alg);
  s->basis_ = std::move(basis);
  s->tol_ = tol;
  const int n = s->alg_->dim();
  const int k = s->size();
  s->flat_.resize(static_cast<Eigen::Index>(n) * n, k);
  // Leibniz is linear in X: test one generic combination per parity, and only
  // scan the elements one by one to name the offender.
  Mat combo[2] = {Mat::Zero(n, n), Mat::Zero(n, n)};
  double scale[2] = {0.0, 0.0};
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> unit(0.5, 1.5);
  for (int a = 0; a < k; ++a) {
    const auto& x = s->basis_[a];
    if (x.m.rows() != n || x.m.cols() != n) throw SpecError("derivation size does not match algebra");
    const int p = x.parity & 1;
    combo[p] += cplx(unit(rng), unit(rng)) * x.m;
    scale[p] += 2.0 * linalg::max_abs(x.m);
    s->flat_.col(a) = flatten(x.m);
  }
  for (int p = 0; p < 2; ++p) {
    if (leibniz_residual(*s->alg_, combo[p], p) <= tol * std::max(1.0, scale[p])) continue;
    for (int a = 0; a < k; ++a) {
      const auto& x = s->basis_[a];
      if ((x.parity & 1) != p) continue;
      const double lr = leibniz_residual(x);
      if (lr > tol * std::max(1.0, linalg::max_abs(x.m)))
        throw SpecError("basis element " + std::to_string(a) + " is not a superderivation (residual " +
                        fmt_double(lr) + ")");
    }
  }
  if (k > 0) {
    s->qr_.compute(s->flat_);
    if (s->qr_.rank() < k) throw SpecError("derivation basis is linearly dependent");
  }
  s->closure_.resize(static_cast<size_t>(k) * k);
  if (k > 0) {
    const Eigen::Index pairs = static_cast<Eigen::Index>(k) * (k + 1) / 2;
    Mat rhs(static_cast<Eigen::Index>(n) * n, pairs);
    Eigen::Index col = 0;
    for (int a = 0; a < k; ++a)
      for (int b = a; b < k; ++b, ++col)
        rhs.col(col) = flatten(
            graded_commutator(s->basis_[a].m, s->basis_[a].parity, s->basis_[b].m, s->basis_[b].parity));
    const Mat coef = s->qr_.solve(rhs);
    const Mat err = s->flat_ * coef - rhs;
    col = 0;
    for (int a = 0; a < k; ++a)
      for (int b = a; b < k; ++b, ++col) {
        const double res = err.col(col).norm() / std::max(1.0, rhs.col(col).norm());
        if (res > std::max(tol * 10, 1e-8))
          throw SpecError("derivation span is not closed under the bracket (residual " + fmt_double(res) + ")");
        const Vec c = coef.col(col);
        s->closure_[static_cast<size_t>(a) * k + b] = c;
        s->closure_[static_cast<size_t>(b) * k + a] = -double(eta(s->basis_[a].parity, s->basis_[b].parity)) * c;
      }
  }
  Mat st(k, k);
  bool closed = true;
  for (int a = 0; a < k && closed; ++a) {
    auto c = s->try_coords(sder_star_matrix(*s->alg_, s->basis_[a].m, s->basis_[a].parity));
    if (c)
      st.col(a) = *c;
    else
      closed = false;
  }
  if (closed) s->star_ = st;
  return s;
}

namespace {

// Spaces are shared per (algebra, kind, tolerance) so that forms built by
// independent calls live on the same space. Cached spaces keep their algebra
// alive, so a stored address is never reused by another algebra.
SpacePtr cached_space(const AlgebraPtr& alg, bool full, double tol) {
  static std::mutex mu;
  static std::map<std::tuple<const Superalgebra*, bool, double>, SpacePtr> cache;
  const auto key = std::make_tuple(alg.get(), full, tol);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto sp = DerivationSpace::make(alg, full ? sder_basis(alg, tol) : inner_basis(alg, tol), tol);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, std::move(sp)).first->second;
}

}  // namespace

std::shared_ptr<const DerivationSpace> DerivationSpace::full(const AlgebraPtr& alg, double tol) {
  return cached_space(alg, true, tol);
}

std::shared_ptr<const DerivationSpace> DerivationSpace::inner(const AlgebraPtr& alg, double tol) {
  return cached_space(alg, false, tol);
}

std::optional<Vec> DerivationSpace::try_coords(const Mat& x, double* residual) const {
  const Vec v = flatten(x);
  if (size() == 0) {
    const double r = v.norm();
    if (residual) *residual = r;
    if (r <= tol_ * 10) return Vec(0);
    return std::nullopt;
  }
  Vec c = qr_.solve(v);
  const double r = (flat_ * c - v).norm() / std::max(1.0, v.norm());
  if (residual) *residual = r;
  if (r > std::max(tol_ * 10, 1e-8)) return std::nullopt;
  return c;
}

Vec DerivationSpace::coords(const Mat& x) const {
  double r = 0.0;
  auto c = try_coords(x, &r);
  if (!c) throw MathError("derivation lies outside the derivation space (residual " + fmt_double(r) + ")");
  return *c;
}

Mat DerivationSpace::matrix(const Vec& c) const {
  const int n = alg_->dim();
  Mat m = Mat::Zero(n, n);
  for (int a = 0; a < size(); ++a)
    if (c(a) != cplx(0.0)) m += c(a) * basis_[a].m;
  return m;
}

int DerivationSpace::parity_of(const Vec& c) const {
  bool even = false, odd = false;
  const double thr = 1e-12 * std::max(1.0, linalg::max_abs(c));
  for (int a = 0; a < size(); ++a)
    if (std::abs(c(a)) > thr) (parity(a) ? odd : even) = true;
  if (even && odd) return -1;
  return odd ? 1 : 0;
}

Vec DerivationSpace::bracket(const Vec& x, const Vec& y) const {
  Vec r = Vec::Zero(size());
  for (int a = 0; a < size(); ++a) {
    if (x(a) == cplx(0.0)) continue;
    for (int b = 0; b < size(); ++b)
      if (y(b) != cplx(0.0)) r += x(a) * y(b) * bracket(a, b);
  }
  return r;
}

}  // namespace ncsymp
