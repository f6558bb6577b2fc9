#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ncsymp/report.hpp"
#include "ncsymp/types.hpp"

namespace ncsymp {

/// Faithful representation by matrices, with the grading operator on the
/// representation space. The involution is the conjugate transpose.
struct MatrixModel {
  std::vector<Mat> basis;
  Eigen::VectorXd grading;
};

class Superalgebra;
using AlgebraPtr = std::shared_ptr<const Superalgebra>;

/// Finite-dimensional associative unital *-superalgebra over C, given by
/// structure constants in a homogeneous basis: e_i e_j = sum_k c_ij^k e_k.
/// The involution acts on coefficients as a -> S conj(a).
class Superalgebra {
 public:
  Superalgebra(std::string name, std::vector<std::string> labels, std::vector<int> parity, int unit,
               std::vector<Mat> left, Mat star, std::optional<MatrixModel> model = std::nullopt);

  const std::string& name() const { return name_; }
  int dim() const { return static_cast<int>(parity_.size()); }
  int parity(int i) const { return parity_[i]; }
  const std::vector<int>& parities() const { return parity_; }
  int unit() const { return unit_; }
  const std::string& label(int i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  int index_of(std::string_view label) const;

  cplx structure(int i, int j, int k) const { return left_[i](k, j); }
  /// Matrix of left multiplication by e_i on coefficient vectors.
  const Mat& left(int i) const { return left_[i]; }
  Mat left_mult(const Vec& a) const;
  Mat right_mult(const Vec& b) const;
  Vec mul(const Vec& a, const Vec& b) const;
  Vec star(const Vec& a) const;
  const Mat& star_matrix() const { return star_; }
  /// [A, B] = AB - (-1)^{|A||B|} BA, extended bilinearly over parity parts.
  Vec supercommutator(const Vec& a, const Vec& b) const;

  Vec basis_vector(int i) const;
  Vec unit_vector() const { return basis_vector(unit_); }
  Vec even_part(const Vec& a) const;
  Vec odd_part(const Vec& a) const;
  /// 0 or 1 for homogeneous input (zero counts as even), -1 if mixed.
  int parity_of(const Vec& a, double tol = kDefaultTol) const;
  /// Diagonal +-1 operator on coefficient space.
  Mat grading_operator() const;
  bool is_supercommutative(double tol = kDefaultTol) const;

  const std::optional<MatrixModel>& model() const { return model_; }
  Mat represent(const Vec& a) const;
  Vec from_matrix(const Mat& m) const;

  /// Set for algebras produced by tensor_product.
  const std::pair<AlgebraPtr, AlgebraPtr>* factors() const { return factors_ ? &*factors_ : nullptr; }
  void set_factors(AlgebraPtr a, AlgebraPtr b) { factors_ = std::make_pair(std::move(a), std::move(b)); }

 private:
  std::string name_;
  std::vector<std::string> labels_;
  std::vector<int> parity_;
  int unit_;
  std::vector<Mat> left_;
  Mat star_;
  std::optional<MatrixModel> model_;
  std::optional<std::pair<AlgebraPtr, AlgebraPtr>> factors_;
};

/// Convenience value type pairing coefficients with their algebra.
struct Element {
  AlgebraPtr alg;
  Vec c;

  Element() = default;
  Element(AlgebraPtr a, Vec coeffs);
  static Element basis(AlgebraPtr a, int i);
  static Element unit(AlgebraPtr a);

  Element operator+(const Element& o) const;
  Element operator-(const Element& o) const;
  Element operator*(const Element& o) const;
  Element operator*(cplx s) const;
  Element star() const;
  int parity(double tol = kDefaultTol) const;
};

Element operator*(cplx s, const Element& e);
Vec supercommutator(const Element& a, const Element& b);

/// M_n(C), trivially graded, generalized Gell-Mann basis {I, ...}.
/// For n = 2 this is {I, sx, sy, sz}.
AlgebraPtr make_matrix_algebra(int n);
/// M_{p|q}: (p+q)x(p+q) supermatrices, basis {I, E_ij} without E_{nn}.
AlgebraPtr make_supermatrix_algebra(int p, int q);
/// Grassmann algebra on n generators, monomial basis ordered by degree.
AlgebraPtr make_grassmann_algebra(int n);
/// "matrix:n", "supermatrix:p|q" or "grassmann:n".
AlgebraPtr build_algebra(std::string_view spec);

/// Graded tensor product with (A x B)(C x D) = (-1)^{|B||C|} AC x BD and
/// involution (A x B)* = (-1)^{|A||B|} A* x B*.
AlgebraPtr tensor_product(const AlgebraPtr& a, const AlgebraPtr& b);
inline int tensor_index(const Superalgebra& b, int i, int j) { return i * b.dim() + j; }
/// Coefficients of a x b in the tensor basis.
Vec tensor_element(const Vec& a, const Vec& b);

/// Orthonormal homogeneous basis (columns) of the graded center.
Mat graded_center(const Superalgebra& alg, double tol = kDefaultTol);

/// Associativity, unit, parity and *-axioms.
Report verify_axioms(const Superalgebra& alg, double tol = kDefaultTol);

/// Random element; parity -1 gives a mixed element.
template <class Rng>
Vec random_element(const Superalgebra& alg, Rng& rng, int parity = -1);

}  // namespace ncsymp

#include "ncsymp/random_impl.hpp"
