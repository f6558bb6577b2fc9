#include "ncsymp/forms.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>

#include <unsupported/Eigen/MatrixFunctions>

#include "ncsymp/linalg.hpp"

namespace ncsymp {

namespace {

constexpr long long kMaxSlots = 4'000'000;

void enumerate(const std::vector<int>& par, int degree, std::vector<int>& cur, std::vector<int>& out) {
  if (static_cast<int>(cur.size()) == degree) {
    out.insert(out.end(), cur.begin(), cur.end());
    return;
  }
  const int n = static_cast<int>(par.size());
  const int start = cur.empty() ? 0 : cur.back();
  for (int a = start; a < n; ++a) {
    if (!cur.empty() && a == cur.back() && par[a] == 0) continue;
    cur.push_back(a);
    enumerate(par, degree, cur, out);
    cur.pop_back();
    if (static_cast<long long>(out.size()) > kMaxSlots * std::max(degree, 1))
      throw SpecError("form degree too large for this derivation space");
  }
}

// Sign picked up when an argument tuple with parities `par` is permuted so
// that position k receives argument perm[k]: adjacent transposition of
// arguments X, Y contributes -(-1)^{|X||Y|}.
int permutation_sign(const std::vector<int>& perm, const std::vector<int>& par) {
  std::vector<int> seq = perm;
  int sign = 1;
  for (size_t i = 0; i < seq.size(); ++i)
    for (size_t j = 0; j + 1 < seq.size() - i; ++j)
      if (seq[j] > seq[j + 1]) {
        sign *= -eta(par[seq[j]], par[seq[j + 1]]);
        std::swap(seq[j], seq[j + 1]);
      }
  return sign;
}

long long factorial(int n) {
  long long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void require_same_space(const Form& a, const Form& b) {
  if (a.space() != b.space()) throw SpecError("forms live on different derivation spaces");
}

}  // namespace

Layout::Layout(std::vector<int> parities, int degree) : parities_(std::move(parities)), degree_(degree) {
  if (degree < 0) throw SpecError("negative form degree");
  const int n = static_cast<int>(parities_.size());
  const bool any_odd = std::any_of(parities_.begin(), parities_.end(), [](int p) { return p == 1; });
  if (!any_odd && degree > n) return;
  if (degree == 0) {
    count_ = 1;
    return;
  }
  std::vector<int> cur;
  enumerate(parities_, degree, cur, tuples_);
  count_ = static_cast<int>(tuples_.size() / degree);
  keys_.reserve(count_);
  for (int s = 0; s < count_; ++s) keys_.emplace_back(key(tuple(s)), s);
}

unsigned long long Layout::key(const int* idx) const {
  unsigned long long k = 0;
  const unsigned long long n = parities_.size();
  for (int i = 0; i < degree_; ++i) k = k * n + static_cast<unsigned long long>(idx[i]);
  return k;
}

Layout::Loc Layout::locate(const int* idx) const {
  if (degree_ == 0) return {0, 1};
  int buf[16];
  if (degree_ > 16) throw SpecError("form degree above 16 is not supported");
  std::copy(idx, idx + degree_, buf);
  int sign = 1;
  for (int i = 1; i < degree_; ++i)
    for (int j = i; j > 0 && buf[j - 1] > buf[j]; --j) {
      sign *= -eta(parities_[buf[j - 1]], parities_[buf[j]]);
      std::swap(buf[j - 1], buf[j]);
    }
  for (int i = 1; i < degree_; ++i)
    if (buf[i] == buf[i - 1] && parities_[buf[i]] == 0) return {-1, 0};
  const auto k = key(buf);
  auto it = std::lower_bound(keys_.begin(), keys_.end(), std::make_pair(k, 0));
  return {it->second, sign};
}

std::shared_ptr<const Layout> Layout::get(const std::vector<int>& parities, int degree) {
  static std::mutex mu;
  static std::map<std::pair<std::vector<int>, int>, std::shared_ptr<const Layout>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(parities, degree);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto l = std::make_shared<const Layout>(parities, degree);
  cache.emplace(std::move(key), l);
  return l;
}

Form::Form(SpacePtr space, int degree, int parity, bool allow_vanishing)
    : space_(std::move(space)), degree_(degree), parity_(parity) {
  if (!space_) throw SpecError("form needs a derivation space");
  if (parity != 0 && parity != 1) throw SpecError("form parity must be 0 or 1");
  std::vector<int> par(space_->size());
  bool any_odd = false;
  for (int a = 0; a < space_->size(); ++a) {
    par[a] = space_->parity(a);
    any_odd = any_odd || par[a] == 1;
  }
  if (!allow_vanishing && !any_odd && degree > space_->size())
    throw SpecError("form degree " + std::to_string(degree) + " exceeds the derivation-space dimension " +
                    std::to_string(space_->size()));
  layout_ = Layout::get(par, degree);
  comps_ = Mat::Zero(space_->algebra()->dim(), layout_->size());
}

Form Form::scalar(SpacePtr space, const Vec& a, double tol) {
  const int p = space->algebra()->parity_of(a, tol);
  if (p < 0) throw SpecError("0-form from a mixed-parity element: split it first");
  Form f(std::move(space), 0, p);
  f.comps_.col(0) = a;
  return f;
}

Vec Form::at(const int* idx) const {
  const auto loc = layout_->locate(idx);
  if (loc.sign == 0) return Vec::Zero(comps_.rows());
  return double(loc.sign) * comps_.col(loc.slot);
}

Vec Form::evaluate(const std::vector<Vec>& args) const {
  if (static_cast<int>(args.size()) != degree_) throw SpecError("wrong number of form arguments");
  if (degree_ == 0) return comps_.col(0);
  const int n = space_->size();
  std::vector<std::vector<int>> nz(degree_);
  for (int k = 0; k < degree_; ++k)
    for (int a = 0; a < n; ++a)
      if (args[k](a) != cplx(0.0)) nz[k].push_back(a);
  Vec out = Vec::Zero(comps_.rows());
  std::vector<int> idx(degree_);
  std::vector<size_t> pos(degree_, 0);
  for (const auto& v : nz)
    if (v.empty()) return out;
  while (true) {
    cplx c = 1.0;
    for (int k = 0; k < degree_; ++k) {
      idx[k] = nz[k][pos[k]];
      c *= args[k](idx[k]);
    }
    const auto loc = layout_->locate(idx.data());
    if (loc.sign != 0) out += (c * double(loc.sign)) * comps_.col(loc.slot);
    int k = degree_ - 1;
    while (k >= 0 && ++pos[k] == nz[k].size()) pos[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

Form Form::operator+(const Form& o) const {
  require_same_space(*this, o);
  if (degree_ != o.degree_ || parity_ != o.parity_) throw SpecError("adding forms of different degree or parity");
  Form r = *this;
  r.comps_ += o.comps_;
  return r;
}

Form Form::operator-(const Form& o) const { return *this + o * cplx(-1.0); }

Form Form::operator*(cplx s) const {
  Form r = *this;
  r.comps_ *= s;
  return r;
}

double Form::max_abs() const { return linalg::max_abs(comps_); }

Form wedge(const Form& a, const Form& b) {
  require_same_space(a, b);
  const int p = a.degree(), q = b.degree(), n = p + q;
  const auto& alg = a.algebra();
  Form out(a.space(), n, (a.parity() + b.parity()) % 2, true);
  std::vector<int> perm(n);
  std::vector<int> ia(p), ib(q), par(n);
  const double norm = 1.0 / double(factorial(p) * factorial(q));
  for (int s = 0; s < out.slots(); ++s) {
    const int* t = out.layout().tuple(s);
    for (int k = 0; k < n; ++k) par[k] = a.space()->parity(t[k]);
    std::iota(perm.begin(), perm.end(), 0);
    Vec acc = Vec::Zero(alg.dim());
    do {
      // kappa_sigma * gamma(sigma; eps) equals the graded transposition sign.
      int sign = permutation_sign(perm, par);
      int moved = 0;
      for (int j = 0; j < p; ++j) moved += par[perm[j]];
      sign *= eta(b.parity(), moved);
      for (int j = 0; j < p; ++j) ia[j] = t[perm[j]];
      for (int j = 0; j < q; ++j) ib[j] = t[perm[p + j]];
      const Vec va = a.at(ia.data());
      if (va.isZero(0.0)) continue;
      acc += double(sign) * alg.mul(va, b.at(ib.data()));
    } while (std::next_permutation(perm.begin(), perm.end()));
    out.comps().col(s) = norm * acc;
  }
  return out;
}

Mat cochain_differential(const CochainFrame& f, int degree, int parity, const Mat& comps) {
  const int p = degree;
  const int n = static_cast<int>(f.parity.size());
  const auto in = Layout::get(f.parity, std::max(p, 0));
  const auto out = Layout::get(f.parity, p + 1);
  const Eigen::Index vdim = comps.rows();
  Mat res = Mat::Zero(vdim, out->size());
  auto value = [&](const int* idx) -> Vec {
    const auto loc = in->locate(idx);
    if (loc.sign == 0) return Vec::Zero(vdim);
    return double(loc.sign) * comps.col(loc.slot);
  };
  std::vector<int> rest(std::max(p, 1)), e(p + 1);
  for (int s = 0; s < out->size(); ++s) {
    const int* t = out->tuple(s);
    for (int k = 0; k <= p; ++k) e[k] = f.parity[t[k]];
    Vec acc = Vec::Zero(vdim);
    int prefix = 0;
    for (int i = 0; i <= p; ++i) {
      const int a_i = e[i] * (parity + prefix);
      prefix += e[i];
      int r = 0;
      for (int k = 0; k <= p; ++k)
        if (k != i) rest[r++] = t[k];
      const double sign = ((i + a_i) % 2) ? -1.0 : 1.0;
      acc += sign * (f.action[t[i]] * value(rest.data()));
    }
    for (int i = 0; i <= p; ++i)
      for (int j = i + 1; j <= p; ++j) {
        int between = 0;
        for (int k = i + 1; k < j; ++k) between += e[k];
        const double sign = ((j + e[j] * between) % 2) ? -1.0 : 1.0;
        const Vec& br = f.closure[static_cast<size_t>(t[i]) * n + t[j]];
        // Arguments X_0..X_{i-1}, [X_i, X_j], X_{i+1}..(X_j omitted)..X_p.
        int r = 0;
        for (int k = 0; k <= p; ++k)
          if (k != j) rest[r++] = t[k];
        for (int c = 0; c < n; ++c) {
          if (br(c) == cplx(0.0)) continue;
          rest[i] = c;
          acc += (sign * br(c)) * value(rest.data());
        }
      }
    res.col(s) = acc;
  }
  return res;
}

Form exterior_derivative(const Form& w) {
  const auto& sp = *w.space();
  CochainFrame f;
  const int n = sp.size();
  for (int a = 0; a < n; ++a) {
    f.action.push_back(sp[a].m);
    f.parity.push_back(sp.parity(a));
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) f.closure.push_back(sp.bracket(a, b));
  Form out(w.space(), w.degree() + 1, w.parity(), true);
  if (out.slots() > 0) out.comps() = cochain_differential(f, w.degree(), w.parity(), w.comps());
  return out;
}

Form lie_derivative(const Vec& y, int y_parity, const Form& w) {
  const auto& sp = *w.space();
  const int p = w.degree();
  Form out(w.space(), p, (w.parity() + y_parity) % 2);
  const Mat ym = sp.matrix(y);
  std::vector<Vec> yx(sp.size());
  for (int b = 0; b < sp.size(); ++b) {
    yx[b] = Vec::Zero(sp.size());
    for (int a = 0; a < sp.size(); ++a)
      if (y(a) != cplx(0.0)) yx[b] += y(a) * sp.bracket(a, b);
  }
  std::vector<int> args(std::max(p, 1));
  for (int s = 0; s < out.slots(); ++s) {
    const int* t = out.layout().tuple(s);
    Vec acc = ym * w.at(t);
    int prefix = w.parity();
    for (int i = 0; i < p; ++i) {
      const double sign = eta(y_parity, prefix);
      prefix += sp.parity(t[i]);
      std::copy(t, t + p, args.begin());
      for (int c = 0; c < sp.size(); ++c) {
        if (yx[t[i]](c) == cplx(0.0)) continue;
        args[i] = c;
        acc -= (sign * yx[t[i]](c)) * w.at(args.data());
      }
    }
    out.comps().col(s) = acc;
  }
  return out;
}

Form interior(const Vec& x, int x_parity, const Form& w) {
  if (w.degree() == 0) return Form(w.space(), 0, (w.parity() + x_parity) % 2);
  const int p = w.degree();
  Form out(w.space(), p - 1, (w.parity() + x_parity) % 2);
  std::vector<int> args(p);
  for (int s = 0; s < out.slots(); ++s) {
    const int* t = out.layout().tuple(s);
    std::copy(t, t + p - 1, args.begin() + 1);
    Vec acc = Vec::Zero(w.algebra().dim());
    for (int a = 0; a < w.space()->size(); ++a) {
      if (x(a) == cplx(0.0)) continue;
      args[0] = a;
      acc += x(a) * w.at(args.data());
    }
    out.comps().col(s) = acc;
  }
  return out;
}

Form form_star(const Form& w) {
  const auto& sp = *w.space();
  const Mat* st = sp.star_matrix();
  if (!st) throw SpecError("derivation space is not closed under the involution");
  const int p = w.degree();
  Form out(w.space(), p, w.parity());
  std::vector<Vec> args(p);
  for (int s = 0; s < out.slots(); ++s) {
    const int* t = out.layout().tuple(s);
    int k = 0;
    for (int i = 0; i < p; ++i) {
      args[i] = st->col(t[i]);
      k += sp.parity(t[i]);
    }
    const int sign = (((k * (k - 1) / 2) + w.parity() * k) % 2) ? -1 : 1;
    out.comps().col(s) = double(sign) * w.algebra().star(w.evaluate(args));
  }
  return out;
}

Form pullback(const Mat& phi, const SpacePtr& source, const Form& w) {
  const auto& target = *w.space();
  const Report iso = check_isomorphism(*source->algebra(), *target.algebra(), phi, source->tol());
  if (!iso.ok()) throw SpecError("pullback requires a *-isomorphism; check failed");
  const Mat phi_inv = phi.inverse();
  std::vector<Vec> pushed(source->size());
  for (int a = 0; a < source->size(); ++a) pushed[a] = target.coords(phi * (*source)[a].m * phi_inv);
  const int p = w.degree();
  Form out(source, p, w.parity());
  std::vector<Vec> args(p);
  for (int s = 0; s < out.slots(); ++s) {
    const int* t = out.layout().tuple(s);
    for (int i = 0; i < p; ++i) args[i] = pushed[t[i]];
    out.comps().col(s) = phi_inv * w.evaluate(args);
  }
  return out;
}

Report check_center_linearity(const Form& w, double tol) {
  const auto& sp = *w.space();
  const auto& alg = w.algebra();
  Report r;
  r.title = "center linearity";
  const Mat center = graded_center(alg, tol);
  const int p = w.degree();
  double worst = 0.0;
  bool closed = true;
  for (Eigen::Index c = 0; c < center.cols() && closed; ++c) {
    const Vec k = center.col(c);
    const int kp = alg.parity_of(k, tol);
    const Mat lk = alg.left_mult(k);
    std::vector<Vec> kx(sp.size());
    for (int a = 0; a < sp.size() && closed; ++a) {
      auto co = sp.try_coords(lk * sp[a].m);
      if (!co) {
        closed = false;
        break;
      }
      kx[a] = *co;
    }
    if (!closed) break;
    for (int s = 0; s < w.slots() && p > 0; ++s) {
      const int* t = w.layout().tuple(s);
      std::vector<Vec> args(p);
      for (int i = 0; i < p; ++i) args[i] = sp.algebra()->basis_vector(0).head(0), args[i] = Vec::Unit(sp.size(), t[i]);
      const Vec base = alg.mul(k, w.at(t));
      int prefix = w.parity();
      for (int i = 0; i < p; ++i) {
        std::vector<Vec> mod = args;
        mod[i] = kx[t[i]];
        const Vec lhs = w.evaluate(mod);
        worst = std::max(worst, linalg::max_abs(Vec(lhs - double(eta(kp, prefix)) * base)));
        prefix += sp.parity(t[i]);
      }
    }
  }
  r.add(make_flag("module-closed", "K X lies in the derivation space for central K", closed));
  r.add(make_check("center-linear", "w(.., K X, ..) = (-1)^{|K|(|w|+..)} K w(.., X, ..)", worst, tol));
  return r;
}

Report check_infinitesimal_pullback(const Form& w, const Vec& y, double step, double tol) {
  const auto& sp = w.space();
  if (sp->parity_of(y) != 0) throw SpecError("infinitesimal pullback check needs an even generator");
  const Mat ym = sp->matrix(y);
  const Mat plus = (ym * cplx(step)).exp();
  const Mat minus = (ym * cplx(-step)).exp();
  const Form fd = (pullback(plus, sp, w) - pullback(minus, sp, w)) * cplx(1.0 / (2.0 * step));
  const Form expect = lie_derivative(y, 0, w) * cplx(-1.0);
  Report r;
  r.title = "infinitesimal pullback";
  r.add(make_check("first-order", "d/dt phi_t^* w at t=0 = -L_Y w", (fd - expect).max_abs(), tol));
  return r;
}

double d_squared_residual(const Form& w) { return exterior_derivative(exterior_derivative(w)).max_abs(); }

double cartan_residual(const Vec& x, int px, const Form& w) {
  Form lhs = interior(x, px, exterior_derivative(w));
  if (w.degree() > 0) lhs = lhs + exterior_derivative(interior(x, px, w));
  return (lhs - lie_derivative(x, px, w) * cplx(eta(px, w.parity()))).max_abs();
}

double lie_bracket_residual(const Vec& x, int px, const Vec& y, int py, const Form& w) {
  const Form xy = lie_derivative(x, px, lie_derivative(y, py, w));
  const Form yx = lie_derivative(y, py, lie_derivative(x, px, w));
  const Vec br = w.space()->bracket(x, y);
  return (xy - yx * cplx(eta(px, py)) - lie_derivative(br, (px + py) % 2, w)).max_abs();
}

double d_leibniz_residual(const Form& a, const Form& b) {
  const Form lhs = exterior_derivative(wedge(a, b));
  const Form rhs = wedge(exterior_derivative(a), b) + wedge(a, exterior_derivative(b)) * cplx(a.degree() % 2 ? -1.0 : 1.0);
  return (lhs - rhs).max_abs();
}

}  // namespace ncsymp
