#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "subhol/polynomial.hpp"

namespace subhol {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense matrix of exact rationals; only what the exact checks need.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}
  static QMatrix identity(std::size_t n);
  /// Exact conversion of every double entry (binary fractions are exact).
  static QMatrix from(const Matrix& m);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator+(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator-(const QMatrix& a, const QMatrix& b);
  QMatrix operator*(const Rational& c) const;
  QMatrix transpose() const;
  bool is_zero() const;
  friend bool operator==(const QMatrix& a, const QMatrix& b) = default;
  Rational determinant() const;
  Matrix to_double() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> data_;
};

/// Rank of a family of equally-shaped rational matrices, exactly.
std::size_t exact_rank(const std::vector<QMatrix>& mats);
/// True when every pairwise commutator lies in the rational span, exactly.
bool exact_bracket_closed(const std::vector<QMatrix>& mats);

/// Values of a nondegenerate symmetric bilinear form on a frame.
class ScalarProductSpace {
 public:
  explicit ScalarProductSpace(QMatrix gram);
  static ScalarProductSpace euclidean(std::size_t dim);
  /// Witt product on R^{1,k+1} in the basis p, e_1..e_k, q.
  static ScalarProductSpace witt(std::size_t k);

  std::size_t dim() const { return gram_.rows(); }
  const QMatrix& gram() const { return gram_; }
  const Matrix& gram_d() const { return gram_d_; }

 private:
  QMatrix gram_;
  Matrix gram_d_;
};

/// B = sum_{a<b} B^{ab} E_a ^ E_b, stored as the full antisymmetric array.
struct Bivector {
  Matrix coeffs;

  static Bivector wedge(std::size_t dim, std::size_t a, std::size_t b);
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Endomorphism of X^Y, with (X^Y)Z = g(X,Z)Y - g(Y,Z)X; as a matrix this
/// is -B*G. The convention reproduces R(X_i,U) = X_i^V for the pp-wave frame.
Matrix bivector_to_endo(const Bivector& b, const ScalarProductSpace& v);
QMatrix bivector_to_endo(const QMatrix& b, const QMatrix& gram);
/// Inverse of bivector_to_endo: the bivector whose endomorphism is m.
Bivector endo_to_bivector(const Matrix& m, const Matrix& gram);

/// <omega, B> = sum_{a,b} omega_ab B^{ab}; so <omega, X^Y> = 2 omega(X,Y).
double pair_form_bivector(const Matrix& omega, const Bivector& b);
Rational pair_form_bivector(const QMatrix& omega, const QMatrix& b);

/// exp(tA). Nilpotent inputs are summed as an exact finite series.
Matrix matrix_exp(const Matrix& a, double t = 1.0);
/// Principal logarithm; requires ||M - I|| < 0.5 (throws otherwise).
Matrix matrix_log(const Matrix& m);

inline Matrix bracket(const Matrix& a, const Matrix& b) { return a * b - b * a; }

inline constexpr double kDefaultRankTol = 1e-9;
/// Singular values below this are zero regardless of the relative test, so a
/// family of pure round-off does not acquire rank.
inline constexpr double kAbsoluteFloor = 1e-12;

class ContainmentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ClosureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Span of square matrices with a Frobenius-orthonormal basis.
class LieAlgebraSpan {
 public:
  LieAlgebraSpan() = default;
  LieAlgebraSpan(std::size_t ambient_dim, double tol) : ambient_(ambient_dim), tol_(tol) {}

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.size(); }
  double tol() const { return tol_; }
  const std::vector<Matrix>& basis() const { return basis_; }
  bool empty() const { return basis_.empty(); }

  Matrix project(const Matrix& m) const;
  Vector coordinates(const Matrix& m) const;
  /// ||m - proj(m)|| <= tol * ||m||; matrices below the absolute floor count as zero.
  bool contains(const Matrix& m, double tol) const;
  bool contains(const Matrix& m) const { return contains(m, tol_); }
  bool contains(const LieAlgebraSpan& other, double tol) const;
  bool contains(const LieAlgebraSpan& other) const { return contains(other, tol_); }
  bool same_span(const LieAlgebraSpan& other, double tol) const {
    return dim() == other.dim() && contains(other, tol) && other.contains(*this, tol);
  }
  bool is_closed(double tol) const;

  friend LieAlgebraSpan span_basis(const std::vector<Matrix>& mats, std::size_t ambient, double tol);

 private:
  std::size_t ambient_ = 0;
  double tol_ = kDefaultRankTol;
  std::vector<Matrix> basis_;
};

/// Orthonormal basis of span(mats); rank by singular values >= tol*sigma_max.
LieAlgebraSpan span_basis(const std::vector<Matrix>& mats, std::size_t ambient, double tol = kDefaultRankTol);
LieAlgebraSpan span_union(const LieAlgebraSpan& a, const std::vector<Matrix>& extra);

/// Smallest bracket-closed span containing gens; max_depth 0 means ambient^2.
LieAlgebraSpan lie_closure(const LieAlgebraSpan& gens, std::size_t max_depth = 0);

/// [g, I] subset of I. Throws ContainmentError unless I is contained in g.
bool is_ideal(const LieAlgebraSpan& ideal, const LieAlgebraSpan& g);
std::size_t codim(const LieAlgebraSpan& sub, const LieAlgebraSpan& g);
LieAlgebraSpan derived_algebra(const LieAlgebraSpan& g);
/// Orthonormal basis of the orthogonal complement of sub inside g.
std::vector<Matrix> complement_in(const LieAlgebraSpan& sub, const LieAlgebraSpan& g);
LieAlgebraSpan intersect(const LieAlgebraSpan& a, const LieAlgebraSpan& b);

/// Codimension-one ideals of g are the hyperplanes containing g'.
struct IdealFamily {
  std::size_t quotient_dim = 0;  // d = dim g - dim g'
  std::size_t parameters = 0;     // d - 1 (projective family), when d > 0
  LieAlgebraSpan derived;
  std::vector<Matrix> complement;  // orthonormal basis of g minus g'
  std::vector<LieAlgebraSpan> representatives;

  bool none() const { return quotient_dim == 0; }
  /// The hyperplane g' + (complement orthogonal to sum_i w_i c_i).
  LieAlgebraSpan member(const Vector& normal, const LieAlgebraSpan& g) const;
};

IdealFamily codim1_ideals_oracle(const LieAlgebraSpan& g);

}  // namespace subhol
