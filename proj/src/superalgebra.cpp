#include "ncsymp/superalgebra.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

#include "ncsymp/linalg.hpp"

namespace ncsymp {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw SpecError(msg);
}

int parse_int(std::string_view s) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  require(ec == std::errc() && p == s.data() + s.size(), "expected an integer, got '" + std::string(s) + "'");
  return v;
}

// Builds an algebra from a matrix model. Coordinates are found by a QR solve
// against the flattened basis.
AlgebraPtr from_model(std::string name, std::vector<std::string> labels, std::vector<int> parity,
                      MatrixModel model) {
  const int n = static_cast<int>(model.basis.size());
  const Eigen::Index d = model.basis[0].rows();
  Mat flat(d * d, n);
  for (int i = 0; i < n; ++i) flat.col(i) = Eigen::Map<const Vec>(model.basis[i].data(), d * d);
  Eigen::ColPivHouseholderQR<Mat> qr(flat);
  auto coords = [&](const Mat& m) {
    Vec rhs = Eigen::Map<const Vec>(m.data(), d * d);
    Vec c = qr.solve(rhs);
    if ((flat * c - rhs).norm() > 1e-10 * std::max(1.0, rhs.norm()))
      throw MathError("matrix model is not closed under the requested operation");
    return c;
  };
  std::vector<Mat> left(n, Mat::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) left[i].col(j) = coords(model.basis[i] * model.basis[j]);
  Mat star(n, n);
  for (int i = 0; i < n; ++i) star.col(i) = coords(model.basis[i].adjoint());
  int unit = -1;
  for (int i = 0; i < n; ++i)
    if ((model.basis[i] - Mat::Identity(d, d)).norm() < 1e-12) unit = i;
  require(unit >= 0, "matrix model has no identity basis element");
  return std::make_shared<Superalgebra>(std::move(name), std::move(labels), std::move(parity), unit,
                                        std::move(left), std::move(star), std::move(model));
}

}  // namespace

Superalgebra::Superalgebra(std::string name, std::vector<std::string> labels, std::vector<int> parity,
                           int unit, std::vector<Mat> left, Mat star, std::optional<MatrixModel> model)
    : name_(std::move(name)),
      labels_(std::move(labels)),
      parity_(std::move(parity)),
      unit_(unit),
      left_(std::move(left)),
      star_(std::move(star)),
      model_(std::move(model)) {
  const int n = dim();
  require(n > 0, "algebra dimension must be positive");
  if (labels_.empty())
    for (int i = 0; i < n; ++i) labels_.push_back("e" + std::to_string(i));
  require(static_cast<int>(labels_.size()) == n, "labels length does not match dimension");
  require(static_cast<int>(left_.size()) == n, "structure constants do not match dimension");
  for (int p : parity_) require(p == 0 || p == 1, "parity entries must be 0 or 1");
  require(unit_ >= 0 && unit_ < n, "unit index out of range");
  for (const auto& l : left_) require(l.rows() == n && l.cols() == n, "malformed structure constants");
  require(star_.rows() == n && star_.cols() == n, "malformed involution matrix");
}

int Superalgebra::index_of(std::string_view label) const {
  for (int i = 0; i < dim(); ++i)
    if (labels_[i] == label) return i;
  throw SpecError("unknown basis label '" + std::string(label) + "' in algebra " + name_);
}

Mat Superalgebra::left_mult(const Vec& a) const {
  Mat m = Mat::Zero(dim(), dim());
  for (int i = 0; i < dim(); ++i)
    if (a(i) != cplx(0.0)) m += a(i) * left_[i];
  return m;
}

Mat Superalgebra::right_mult(const Vec& b) const {
  Mat m(dim(), dim());
  for (int i = 0; i < dim(); ++i) m.col(i) = left_[i] * b;
  return m;
}

Vec Superalgebra::mul(const Vec& a, const Vec& b) const {
  Vec r = Vec::Zero(dim());
  for (int i = 0; i < dim(); ++i)
    if (a(i) != cplx(0.0)) r += a(i) * (left_[i] * b);
  return r;
}

Vec Superalgebra::star(const Vec& a) const { return star_ * a.conjugate(); }

Vec Superalgebra::supercommutator(const Vec& a, const Vec& b) const {
  const Vec a0 = even_part(a), a1 = odd_part(a), b0 = even_part(b), b1 = odd_part(b);
  return mul(a, b) - mul(b0, a) - mul(b1, a0) + mul(b1, a1);
}

Vec Superalgebra::basis_vector(int i) const {
  Vec v = Vec::Zero(dim());
  v(i) = 1.0;
  return v;
}

Vec Superalgebra::even_part(const Vec& a) const {
  Vec r = a;
  for (int i = 0; i < dim(); ++i)
    if (parity_[i]) r(i) = 0.0;
  return r;
}

Vec Superalgebra::odd_part(const Vec& a) const { return a - even_part(a); }

int Superalgebra::parity_of(const Vec& a, double tol) const {
  const double e = linalg::max_abs(Vec(even_part(a)));
  const double o = linalg::max_abs(Vec(odd_part(a)));
  if (o <= tol) return 0;
  if (e <= tol) return 1;
  return -1;
}

Mat Superalgebra::grading_operator() const {
  Mat g = Mat::Zero(dim(), dim());
  for (int i = 0; i < dim(); ++i) g(i, i) = parity_[i] ? -1.0 : 1.0;
  return g;
}

bool Superalgebra::is_supercommutative(double tol) const {
  for (int i = 0; i < dim(); ++i)
    for (int j = i; j < dim(); ++j)
      if (linalg::max_abs(supercommutator(basis_vector(i), basis_vector(j))) > tol) return false;
  return true;
}

Mat Superalgebra::represent(const Vec& a) const {
  if (!model_) throw SpecError("algebra " + name_ + " has no matrix model");
  Mat m = Mat::Zero(model_->basis[0].rows(), model_->basis[0].cols());
  for (int i = 0; i < dim(); ++i) m += a(i) * model_->basis[i];
  return m;
}

Vec Superalgebra::from_matrix(const Mat& m) const {
  if (!model_) throw SpecError("algebra " + name_ + " has no matrix model");
  const Eigen::Index d = m.rows();
  Mat flat(d * d, dim());
  for (int i = 0; i < dim(); ++i) flat.col(i) = Eigen::Map<const Vec>(model_->basis[i].data(), d * d);
  Vec rhs = Eigen::Map<const Vec>(m.data(), d * d);
  return flat.colPivHouseholderQr().solve(rhs);
}

Element::Element(AlgebraPtr a, Vec coeffs) : alg(std::move(a)), c(std::move(coeffs)) {
  if (!alg || c.size() != alg->dim()) throw SpecError("element size does not match algebra dimension");
}

Element Element::basis(AlgebraPtr a, int i) {
  Vec v = a->basis_vector(i);
  return Element(std::move(a), std::move(v));
}

Element Element::unit(AlgebraPtr a) { return basis(a, a->unit()); }

Element Element::operator+(const Element& o) const { return Element(alg, c + o.c); }
Element Element::operator-(const Element& o) const { return Element(alg, c - o.c); }
Element Element::operator*(const Element& o) const { return Element(alg, alg->mul(c, o.c)); }
Element Element::operator*(cplx s) const { return Element(alg, s * c); }
Element Element::star() const { return Element(alg, alg->star(c)); }
int Element::parity(double tol) const { return alg->parity_of(c, tol); }
Element operator*(cplx s, const Element& e) { return e * s; }
Vec supercommutator(const Element& a, const Element& b) { return a.alg->supercommutator(a.c, b.c); }

AlgebraPtr make_matrix_algebra(int n) {
  require(n >= 1, "matrix:n needs n >= 1");
  MatrixModel model;
  model.grading = Eigen::VectorXd::Ones(n);
  std::vector<std::string> labels{"I"};
  model.basis.push_back(Mat::Identity(n, n));
  int count = 0;
  auto name_next = [&] { return "l" + std::to_string(++count); };
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      Mat s = Mat::Zero(n, n);
      s(j, k) = s(k, j) = 1.0;
      model.basis.push_back(s);
      labels.push_back(name_next());
      Mat a = Mat::Zero(n, n);
      a(j, k) = cplx(0, -1);
      a(k, j) = cplx(0, 1);
      model.basis.push_back(a);
      labels.push_back(name_next());
    }
  for (int l = 1; l < n; ++l) {
    Mat d = Mat::Zero(n, n);
    for (int j = 0; j < l; ++j) d(j, j) = 1.0;
    d(l, l) = -static_cast<double>(l);
    model.basis.push_back(d * std::sqrt(2.0 / (l * (l + 1.0))));
    labels.push_back(name_next());
  }
  if (n == 2) labels = {"I", "sx", "sy", "sz"};
  std::vector<int> parity(model.basis.size(), 0);
  return from_model("matrix:" + std::to_string(n), std::move(labels), std::move(parity), std::move(model));
}

AlgebraPtr make_supermatrix_algebra(int p, int q) {
  require(p >= 0 && q >= 0 && p + q >= 1, "supermatrix:p|q needs p, q >= 0 and p + q >= 1");
  const int n = p + q;
  auto ip = [&](int i) { return i < p ? 0 : 1; };
  MatrixModel model;
  model.grading = Eigen::VectorXd::Ones(n);
  for (int i = p; i < n; ++i) model.grading(i) = -1.0;
  model.basis.push_back(Mat::Identity(n, n));
  std::vector<std::string> labels{"I"};
  std::vector<int> parity{0};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == n - 1 && j == n - 1) continue;
      Mat e = Mat::Zero(n, n);
      e(i, j) = 1.0;
      model.basis.push_back(e);
      labels.push_back("E" + std::to_string(i + 1) + std::to_string(j + 1));
      parity.push_back((ip(i) + ip(j)) % 2);
    }
  return from_model("supermatrix:" + std::to_string(p) + "|" + std::to_string(q), std::move(labels),
                    std::move(parity), std::move(model));
}

AlgebraPtr make_grassmann_algebra(int n) {
  require(n >= 0 && n <= 10, "grassmann:n needs 0 <= n <= 10");
  std::vector<unsigned> subsets;
  for (int k = 0; k <= n; ++k)
    for (unsigned m = 0; m < (1u << n); ++m)
      if (std::popcount(m) == k) subsets.push_back(m);
  const int d = static_cast<int>(subsets.size());
  std::vector<int> index(1u << n);
  for (int i = 0; i < d; ++i) index[subsets[i]] = i;
  std::vector<Mat> left(d, Mat::Zero(d, d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const unsigned s = subsets[i], t = subsets[j];
      if (s & t) continue;
      // Sign of merging the ordered generators of s followed by those of t.
      int inversions = 0;
      for (int b = 0; b < n; ++b)
        if (t & (1u << b)) inversions += std::popcount(s >> (b + 1));
      left[i](index[s | t], j) = (inversions % 2) ? -1.0 : 1.0;
    }
  std::vector<std::string> labels;
  std::vector<int> parity;
  Mat star = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const int k = std::popcount(subsets[i]);
    std::string l;
    for (int b = 0; b < n; ++b)
      if (subsets[i] & (1u << b)) l += "t" + std::to_string(b + 1);
    labels.push_back(l.empty() ? "I" : l);
    parity.push_back(k % 2);
    star(i, i) = ((k * (k - 1) / 2) % 2) ? -1.0 : 1.0;
  }
  return std::make_shared<Superalgebra>("grassmann:" + std::to_string(n), std::move(labels),
                                        std::move(parity), 0, std::move(left), std::move(star));
}

AlgebraPtr build_algebra(std::string_view spec) {
  const auto colon = spec.find(':');
  require(colon != std::string_view::npos, "builder spec must look like 'kind:args'");
  const auto kind = spec.substr(0, colon);
  const auto arg = spec.substr(colon + 1);
  if (kind == "matrix") return make_matrix_algebra(parse_int(arg));
  if (kind == "grassmann") return make_grassmann_algebra(parse_int(arg));
  if (kind == "supermatrix") {
    const auto bar = arg.find('|');
    require(bar != std::string_view::npos, "supermatrix builder needs 'p|q'");
    return make_supermatrix_algebra(parse_int(arg.substr(0, bar)), parse_int(arg.substr(bar + 1)));
  }
  throw SpecError("unknown algebra builder '" + std::string(kind) + "'");
}

Vec tensor_element(const Vec& a, const Vec& b) {
  Vec r(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) r.segment(i * b.size(), b.size()) = a(i) * b;
  return r;
}

AlgebraPtr tensor_product(const AlgebraPtr& a, const AlgebraPtr& b) {
  const int d1 = a->dim(), d2 = b->dim(), d = d1 * d2;
  std::vector<int> parity(d);
  std::vector<std::string> labels(d);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d2; ++j) {
      parity[i * d2 + j] = (a->parity(i) + b->parity(j)) % 2;
      labels[i * d2 + j] = a->label(i) + "(x)" + b->label(j);
    }
  std::vector<Mat> left(d, Mat::Zero(d, d));
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d2; ++j)
      for (int k = 0; k < d1; ++k)
        for (int l = 0; l < d2; ++l) {
          const double s = eta(b->parity(j), a->parity(k));
          left[i * d2 + j].col(k * d2 + l) = s * tensor_element(a->left(i).col(k), b->left(j).col(l));
        }
  Mat star(d, d);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d2; ++j)
      star.col(i * d2 + j) =
          double(eta(a->parity(i), b->parity(j))) * tensor_element(a->star_matrix().col(i), b->star_matrix().col(j));

  std::optional<MatrixModel> model;
  if (a->model() && b->model()) {
    // rho(x (x) y) = rho(x) G^{|y|} (x) rho(y), G the grading operator of the first factor.
    const auto& ma = *a->model();
    const auto& mb = *b->model();
    MatrixModel m;
    const Mat g = ma.grading.cast<cplx>().asDiagonal();
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d2; ++j) {
        const Mat left_part = b->parity(j) ? Mat(ma.basis[i] * g) : ma.basis[i];
        m.basis.push_back(Eigen::kroneckerProduct(left_part, mb.basis[j]).eval());
      }
    m.grading.resize(ma.grading.size() * mb.grading.size());
    for (Eigen::Index i = 0; i < ma.grading.size(); ++i)
      for (Eigen::Index j = 0; j < mb.grading.size(); ++j)
        m.grading(i * mb.grading.size() + j) = ma.grading(i) * mb.grading(j);
    model = std::move(m);
  }
  auto out = std::make_shared<Superalgebra>(a->name() + "(x)" + b->name(), std::move(labels), std::move(parity),
                                            a->unit() * d2 + b->unit(), std::move(left), std::move(star),
                                            std::move(model));
  out->set_factors(a, b);
  return out;
}

Mat graded_center(const Superalgebra& alg, double tol) {
  const int n = alg.dim();
  std::vector<Vec> found;
  for (int p = 0; p < 2; ++p) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (alg.parity(i) == p) idx.push_back(i);
    if (idx.empty()) continue;
    const int m = static_cast<int>(idx.size());
    Mat k(n * n, m);
    for (int c = 0; c < m; ++c) {
      const Vec b = alg.basis_vector(idx[c]);
      for (int i = 0; i < n; ++i) k.block(i * n, c, n, 1) = alg.supercommutator(alg.basis_vector(i), b);
    }
    Mat ns = linalg::null_space(k, tol);
    Mat full = Mat::Zero(n, ns.cols());
    for (int c = 0; c < m; ++c) full.row(idx[c]) = ns.row(c);
    full = linalg::canonical_basis(full, tol);
    for (Eigen::Index c = 0; c < full.cols(); ++c) found.push_back(full.col(c));
  }
  Mat out(n, static_cast<Eigen::Index>(found.size()));
  for (size_t i = 0; i < found.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = found[i];
  return out;
}

Report verify_axioms(const Superalgebra& alg, double tol) {
  const int n = alg.dim();
  double assoc = 0, unit = 0, par = 0, invol = 0, anti = 0, spar = 0;
  const Vec u = alg.unit_vector();
  for (int i = 0; i < n; ++i) {
    const Vec ei = alg.basis_vector(i);
    unit = std::max({unit, linalg::max_abs(Vec(alg.mul(u, ei) - ei)), linalg::max_abs(Vec(alg.mul(ei, u) - ei))});
    invol = std::max(invol, linalg::max_abs(Vec(alg.star(alg.star(ei)) - ei)));
    const Vec si = alg.star(ei);
    for (int k = 0; k < n; ++k)
      if (alg.parity(k) != alg.parity(i)) spar = std::max(spar, std::abs(si(k)));
    for (int j = 0; j < n; ++j) {
      const Vec ej = alg.basis_vector(j);
      const Vec ij = alg.mul(ei, ej);
      for (int k = 0; k < n; ++k)
        if (alg.parity(k) != (alg.parity(i) + alg.parity(j)) % 2) par = std::max(par, std::abs(ij(k)));
      anti = std::max(anti, linalg::max_abs(Vec(alg.star(ij) - alg.mul(alg.star(ej), si))));
      for (int l = 0; l < n; ++l) {
        const Vec el = alg.basis_vector(l);
        assoc = std::max(assoc, linalg::max_abs(Vec(alg.mul(ij, el) - alg.mul(ei, alg.mul(ej, el)))));
      }
    }
  }
  Report r;
  r.title = "superalgebra axioms: " + alg.name();
  r.add(make_check("associativity", "(e_i e_j) e_k = e_i (e_j e_k)", assoc, tol));
  r.add(make_check("unit", "I e_i = e_i I = e_i", unit, tol));
  r.add(make_check("grading", "c_ij^k = 0 unless |k| = |i| + |j|", par, tol));
  r.add(make_check("star-involutive", "(A*)* = A", invol, tol));
  r.add(make_check("star-antimultiplicative", "(AB)* = B* A*", anti, tol));
  r.add(make_check("star-parity", "|A*| = |A|", spar, tol));
  r.data["dim"] = n;
  r.data["even"] = std::count(alg.parities().begin(), alg.parities().end(), 0);
  r.data["odd"] = std::count(alg.parities().begin(), alg.parities().end(), 1);
  return r;
}

}  // namespace ncsymp
