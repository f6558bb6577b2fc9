#pragma once

#include <memory>
#include <vector>

#include "ncsymp/derivation.hpp"
#include "ncsymp/report.hpp"

namespace ncsymp {

/// Canonical argument tuples of a p-form over a homogeneous basis.
///
/// A tuple is canonical when it is non-decreasing; a repeated index is only
/// allowed for odd basis elements, since even repeats vanish by graded
/// antisymmetry. Any other tuple is located as (slot, sign).
class Layout {
 public:
  Layout(std::vector<int> parities, int degree);

  int degree() const { return degree_; }
  int size() const { return count_; }
  const int* tuple(int slot) const { return tuples_.data() + static_cast<size_t>(slot) * degree_; }
  int arg_parity(int a) const { return parities_[a]; }

  struct Loc {
    int slot = -1;
    int sign = 0;  // 0 when the tuple is identically zero
  };
  Loc locate(const int* idx) const;

  static std::shared_ptr<const Layout> get(const std::vector<int>& parities, int degree);

 private:
  std::vector<int> parities_;
  int degree_;
  int count_ = 0;
  std::vector<int> tuples_;
  std::vector<std::pair<unsigned long long, int>> keys_;  // sorted (key, slot)
  unsigned long long key(const int* idx) const;
};

/// Algebra-valued, graded-antisymmetric p-form on a derivation space, stored
/// as one algebra vector per canonical tuple.
class Form {
 public:
  Form() = default;
  /// Degrees above the dimension of an all-even space are rejected unless
  /// `allow_vanishing` is set; such forms are identically zero.
  Form(SpacePtr space, int degree, int parity, bool allow_vanishing = false);
  static Form scalar(SpacePtr space, const Vec& a, double tol = kDefaultTol);

  const SpacePtr& space() const { return space_; }
  const Superalgebra& algebra() const { return *space_->algebra(); }
  int degree() const { return degree_; }
  int parity() const { return parity_; }
  const Layout& layout() const { return *layout_; }
  int slots() const { return layout_->size(); }

  Mat& comps() { return comps_; }
  const Mat& comps() const { return comps_; }

  /// Value on basis arguments X_idx[0], ..., X_idx[p-1].
  Vec at(const int* idx) const;
  Vec at(const std::vector<int>& idx) const { return at(idx.data()); }
  /// Value on arguments given by coordinates; multilinear expansion.
  Vec evaluate(const std::vector<Vec>& args) const;

  Form operator+(const Form& o) const;
  Form operator-(const Form& o) const;
  Form operator*(cplx s) const;
  double max_abs() const;

 private:
  SpacePtr space_;
  int degree_ = 0;
  int parity_ = 0;
  std::shared_ptr<const Layout> layout_;
  Mat comps_;
};

/// Homogeneous operators X_0..X_{n-1} on a value space with
/// [X_a, X_b] = sum_c closure[a * n + b](c) X_c.
struct CochainFrame {
  std::vector<Mat> action;
  std::vector<int> parity;
  std::vector<Vec> closure;
};
/// Exterior derivative of a cochain whose components are stored over
/// Layout::get(parity, degree); the result is over degree + 1.
Mat cochain_differential(const CochainFrame& f, int degree, int parity, const Mat& comps);

Form wedge(const Form& a, const Form& b);
Form exterior_derivative(const Form& w);
Form lie_derivative(const Vec& y, int y_parity, const Form& w);
Form interior(const Vec& x, int x_parity, const Form& w);
/// w*(X_1..X_p) = (-1)^{k(k-1)/2 + |w| k} [w(X_1*, ..., X_p*)]*, k the number of odd arguments.
Form form_star(const Form& w);
/// (phi^* w)(X..) = phi^{-1}[w(phi_* X, ..)] for phi: source -> algebra of w's space.
Form pullback(const Mat& phi, const SpacePtr& source, const Form& w);

/// w(.., K X_i, ..) = (-1)^{|K|(|w| + |X_1| + .. + |X_{i-1}|)} K w(.., X_i, ..) for all
/// graded-center basis elements K.
Report check_center_linearity(const Form& w, double tol = kDefaultTol);

/// (phi_t^* w - phi_{-t}^* w) / 2t against -L_Y w for phi_t = exp(tY); Y even and real.
Report check_infinitesimal_pullback(const Form& w, const Vec& y, double step = 1e-5, double tol = 1e-6);

/// max |d d w|.
double d_squared_residual(const Form& w);
/// i_X dw + d i_X w = (-1)^{|X||w|} L_X w for homogeneous X (degree >= 1; the
/// second term is dropped for 0-forms).
double cartan_residual(const Vec& x, int px, const Form& w);
/// L_X L_Y w - (-1)^{|X||Y|} L_Y L_X w = L_{[X,Y]} w.
double lie_bracket_residual(const Vec& x, int px, const Vec& y, int py, const Form& w);
/// d(a ^ b) = da ^ b + (-1)^p a ^ db for a of degree p.
double d_leibniz_residual(const Form& a, const Form& b);

/// Random coordinates of a homogeneous element of the derivation space.
template <class Rng>
Vec random_derivation(const DerivationSpace& space, Rng& rng, int parity) {
  Vec v = random_vector(space.size(), rng);
  for (int a = 0; a < space.size(); ++a)
    if (space.parity(a) != parity) v(a) = 0.0;
  return v;
}

/// Uniform random components; value parity |w| + sum of argument parities.
template <class Rng>
Form random_form(const SpacePtr& space, int degree, int parity, Rng& rng) {
  Form f(space, degree, parity);
  const auto& alg = *space->algebra();
  for (int s = 0; s < f.slots(); ++s) {
    const int* t = f.layout().tuple(s);
    int vp = parity;
    for (int k = 0; k < degree; ++k) vp += space->parity(t[k]);
    f.comps().col(s) = random_element(alg, rng, vp % 2);
  }
  return f;
}

}  // namespace ncsymp
