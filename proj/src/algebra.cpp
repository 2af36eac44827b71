#include "subhol/algebra.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace subhol {

// --------------------------------------------------------------------------
// QMatrix

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

QMatrix QMatrix::from(const Matrix& m) {
  QMatrix q(std::size_t(m.rows()), std::size_t(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) q(std::size_t(i), std::size_t(j)) = Rational(m(i, j));
  return q;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("QMatrix: shape mismatch in product");
  QMatrix r(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j)
        if (b(k, j) != 0) r(i, j) += a(i, k) * b(k, j);
    }
  return r;
}

QMatrix operator+(const QMatrix& a, const QMatrix& b) {
  QMatrix r = a;
  for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] += b.data_[i];
  return r;
}

QMatrix operator-(const QMatrix& a, const QMatrix& b) {
  QMatrix r = a;
  for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] -= b.data_[i];
  return r;
}

QMatrix QMatrix::operator*(const Rational& c) const {
  QMatrix r = *this;
  for (auto& v : r.data_) v *= c;
  return r;
}

QMatrix QMatrix::transpose() const {
  QMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

bool QMatrix::is_zero() const {
  for (const auto& v : data_)
    if (v != 0) return false;
  return true;
}

Rational QMatrix::determinant() const {
  if (rows_ != cols_) throw DimensionError("QMatrix::determinant: not square");
  QMatrix a = *this;
  Rational det = 1;
  const std::size_t n = rows_;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (a(r, c) == 0) continue;
      Rational f = a(r, c) / a(c, c);
      for (std::size_t j = c; j < n; ++j) a(r, j) -= f * a(c, j);
    }
  }
  return det;
}

Matrix QMatrix::to_double() const {
  Matrix m(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(Eigen::Index(i), Eigen::Index(j)) = (*this)(i, j).get_d();
  return m;
}

std::size_t exact_rank(const std::vector<QMatrix>& mats) {
  if (mats.empty()) return 0;
  const std::size_t len = mats[0].rows() * mats[0].cols();
  std::vector<std::vector<Rational>> rows;
  for (const auto& m : mats) {
    std::vector<Rational> v;
    v.reserve(len);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) v.push_back(m(i, j));
    rows.push_back(std::move(v));
  }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < len && rank < rows.size(); ++col) {
    std::size_t p = rank;
    while (p < rows.size() && rows[p][col] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      Rational f = rows[r][col] / rows[rank][col];
      for (std::size_t j = col; j < len; ++j) rows[r][j] -= f * rows[rank][j];
    }
    ++rank;
  }
  return rank;
}

bool exact_bracket_closed(const std::vector<QMatrix>& mats) {
  const std::size_t r = exact_rank(mats);
  std::vector<QMatrix> ext = mats;
  for (std::size_t i = 0; i < mats.size(); ++i)
    for (std::size_t j = i + 1; j < mats.size(); ++j) {
      ext.push_back(mats[i] * mats[j] - mats[j] * mats[i]);
      if (exact_rank(ext) != r) return false;
      ext.pop_back();
    }
  return true;
}

// --------------------------------------------------------------------------
// Scalar products and bivectors

ScalarProductSpace::ScalarProductSpace(QMatrix gram) : gram_(std::move(gram)) {
  if (gram_.rows() != gram_.cols()) throw DimensionError("ScalarProductSpace: gram must be square");
  if (!(gram_ == gram_.transpose())) throw std::invalid_argument("ScalarProductSpace: gram must be symmetric");
  if (gram_.determinant() == 0) throw std::invalid_argument("ScalarProductSpace: gram is degenerate");
  gram_d_ = gram_.to_double();
}

ScalarProductSpace ScalarProductSpace::euclidean(std::size_t dim) { return ScalarProductSpace(QMatrix::identity(dim)); }

ScalarProductSpace ScalarProductSpace::witt(std::size_t k) {
  QMatrix g(k + 2, k + 2);
  g(0, k + 1) = 1;
  g(k + 1, 0) = 1;
  for (std::size_t i = 1; i <= k; ++i) g(i, i) = 1;
  return ScalarProductSpace(std::move(g));
}

Bivector Bivector::wedge(std::size_t dim, std::size_t a, std::size_t b) {
  Bivector w{Matrix::Zero(Eigen::Index(dim), Eigen::Index(dim))};
  if (a != b) {
    w.coeffs(Eigen::Index(a), Eigen::Index(b)) = 1;
    w.coeffs(Eigen::Index(b), Eigen::Index(a)) = -1;
  }
  return w;
}

Matrix bivector_to_endo(const Bivector& b, const ScalarProductSpace& v) {
  if (b.coeffs.rows() != Eigen::Index(v.dim()) || b.coeffs.cols() != Eigen::Index(v.dim()))
    throw DimensionError("bivector_to_endo: dimension mismatch");
  return -b.coeffs * v.gram_d();
}

QMatrix bivector_to_endo(const QMatrix& b, const QMatrix& gram) {
  if (b.rows() != gram.rows() || b.cols() != gram.cols()) throw DimensionError("bivector_to_endo: dimension mismatch");
  return (b * gram) * Rational(-1);
}

Bivector endo_to_bivector(const Matrix& m, const Matrix& gram) { return Bivector{-m * gram.inverse()}; }

double pair_form_bivector(const Matrix& omega, const Bivector& b) {
  if (omega.rows() != b.coeffs.rows() || omega.cols() != b.coeffs.cols())
    throw DimensionError("pair_form_bivector: dimension mismatch");
  return omega.cwiseProduct(b.coeffs).sum();
}

Rational pair_form_bivector(const QMatrix& omega, const QMatrix& b) {
  if (omega.rows() != b.rows() || omega.cols() != b.cols()) throw DimensionError("pair_form_bivector: dimension mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < omega.rows(); ++i)
    for (std::size_t j = 0; j < omega.cols(); ++j) s += omega(i, j) * b(i, j);
  return s;
}

// --------------------------------------------------------------------------
// exp / log

Matrix matrix_exp(const Matrix& a, double t) {
  if (a.rows() != a.cols()) throw DimensionError("matrix_exp: not square");
  const Eigen::Index n = a.rows();
  // Nilpotent check on exact zero powers.
  Matrix power = a;
  for (Eigen::Index k = 1; k <= n; ++k) {
    if ((power.array() == 0.0).all()) {
      Matrix sum = Matrix::Identity(n, n);
      Matrix term = Matrix::Identity(n, n);
      for (Eigen::Index j = 1; j < k; ++j) {
        term = term * a * (t / double(j));
        sum += term;
      }
      return sum;
    }
    power = power * a;
  }
  return Matrix(a * t).exp();
}

Matrix matrix_log(const Matrix& m) {
  const Eigen::Index n = m.rows();
  const double dist = (m - Matrix::Identity(n, n)).norm();
  if (!(dist < 0.5)) throw std::domain_error("matrix_log: ||M - I|| >= 0.5, principal branch not trusted");
  return m.log();
}

// --------------------------------------------------------------------------
// Spans

namespace {

Eigen::Map<const Vector> as_vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix from_vec(const Vector& v, std::size_t n) {
  return Eigen::Map<const Matrix>(v.data(), Eigen::Index(n), Eigen::Index(n));
}

}  // namespace

Matrix LieAlgebraSpan::project(const Matrix& m) const {
  Matrix p = Matrix::Zero(m.rows(), m.cols());
  for (const auto& b : basis_) p += b * as_vec(b).dot(as_vec(m));
  return p;
}

Vector LieAlgebraSpan::coordinates(const Matrix& m) const {
  Vector c(Eigen::Index(basis_.size()));
  for (std::size_t i = 0; i < basis_.size(); ++i) c(Eigen::Index(i)) = as_vec(basis_[i]).dot(as_vec(m));
  return c;
}

bool LieAlgebraSpan::contains(const Matrix& m, double tol) const {
  const double nm = m.norm();
  if (nm <= kAbsoluteFloor) return true;
  return (m - project(m)).norm() <= tol * nm;
}

bool LieAlgebraSpan::contains(const LieAlgebraSpan& other, double tol) const {
  for (const auto& b : other.basis_)
    if (!contains(b, tol)) return false;
  return true;
}

bool LieAlgebraSpan::is_closed(double tol) const {
  for (std::size_t i = 0; i < basis_.size(); ++i)
    for (std::size_t j = i + 1; j < basis_.size(); ++j)
      if (!contains(bracket(basis_[i], basis_[j]), tol)) return false;
  return true;
}

LieAlgebraSpan span_basis(const std::vector<Matrix>& mats, std::size_t ambient, double tol) {
  LieAlgebraSpan s(ambient, tol);
  if (mats.empty()) return s;
  const Eigen::Index len = Eigen::Index(ambient * ambient);
  Matrix stacked(len, Eigen::Index(mats.size()));
  for (std::size_t i = 0; i < mats.size(); ++i) {
    if (mats[i].rows() != Eigen::Index(ambient) || mats[i].cols() != Eigen::Index(ambient))
      throw DimensionError("span_basis: matrices must share the ambient shape");
    stacked.col(Eigen::Index(i)) = as_vec(mats[i]);
  }
  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeThinU);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= kAbsoluteFloor) return s;
  const double cut = std::max(tol * sv(0), kAbsoluteFloor);
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) < cut) break;
    Vector u = svd.matrixU().col(i);
    // Deterministic sign: first significant entry positive.
    for (Eigen::Index k = 0; k < u.size(); ++k)
      if (std::abs(u(k)) > 1e-8) {
        if (u(k) < 0) u = -u;
        break;
      }
    s.basis_.push_back(from_vec(u, ambient));
  }
  return s;
}

LieAlgebraSpan span_union(const LieAlgebraSpan& a, const std::vector<Matrix>& extra) {
  std::vector<Matrix> all = a.basis();
  all.insert(all.end(), extra.begin(), extra.end());
  return span_basis(all, a.ambient_dim(), a.tol());
}

LieAlgebraSpan lie_closure(const LieAlgebraSpan& gens, std::size_t max_depth) {
  const std::size_t limit = max_depth ? max_depth : gens.ambient_dim() * gens.ambient_dim();
  LieAlgebraSpan cur = gens;
  for (std::size_t depth = 0; depth <= limit; ++depth) {
    std::vector<Matrix> fresh;
    const auto& b = cur.basis();
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = i + 1; j < b.size(); ++j) {
        Matrix c = bracket(b[i], b[j]);
        if (!cur.contains(c)) fresh.push_back(std::move(c));
      }
    if (fresh.empty()) return cur;
    const std::size_t before = cur.dim();
    cur = span_union(cur, fresh);
    if (cur.dim() == before) return cur;
  }
  throw ClosureError("lie_closure: dimension still growing after " + std::to_string(limit) + " iterations");
}

bool is_ideal(const LieAlgebraSpan& ideal, const LieAlgebraSpan& g) {
  const double tol = std::max(ideal.tol(), g.tol());
  if (!g.contains(ideal, tol)) throw ContainmentError("is_ideal: I is not contained in g");
  for (const auto& x : g.basis())
    for (const auto& y : ideal.basis())
      if (!ideal.contains(bracket(x, y), tol)) return false;
  return true;
}

std::size_t codim(const LieAlgebraSpan& sub, const LieAlgebraSpan& g) {
  if (!g.contains(sub, std::max(sub.tol(), g.tol()))) throw ContainmentError("codim: not a subspace");
  return g.dim() - sub.dim();
}

LieAlgebraSpan derived_algebra(const LieAlgebraSpan& g) {
  std::vector<Matrix> br;
  const auto& b = g.basis();
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = i + 1; j < b.size(); ++j) br.push_back(bracket(b[i], b[j]));
  LieAlgebraSpan d = span_basis(br, g.ambient_dim(), g.tol());
  return d.empty() ? d : lie_closure(d);
}

std::vector<Matrix> complement_in(const LieAlgebraSpan& sub, const LieAlgebraSpan& g) {
  const std::size_t want = g.dim() - std::min(g.dim(), sub.dim());
  std::vector<Matrix> out;
  if (want == 0) return out;
  const std::size_t n = g.ambient_dim();
  Matrix stacked(Eigen::Index(n * n), Eigen::Index(g.dim()));
  for (std::size_t i = 0; i < g.dim(); ++i) {
    const Matrix r = g.basis()[i] - sub.project(g.basis()[i]);
    stacked.col(Eigen::Index(i)) = as_vec(r);
  }
  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeThinU);
  for (std::size_t i = 0; i < want; ++i) {
    Vector u = svd.matrixU().col(Eigen::Index(i));
    for (Eigen::Index k = 0; k < u.size(); ++k)
      if (std::abs(u(k)) > 1e-8) {
        if (u(k) < 0) u = -u;
        break;
      }
    out.push_back(from_vec(u, n));
  }
  return out;
}

LieAlgebraSpan intersect(const LieAlgebraSpan& a, const LieAlgebraSpan& b) {
  const double tol = std::max(a.tol(), b.tol());
  LieAlgebraSpan empty(a.ambient_dim(), tol);
  if (a.empty() || b.empty()) return empty;
  const std::size_t n = a.ambient_dim();
  const Eigen::Index ka = Eigen::Index(a.dim()), kb = Eigen::Index(b.dim());
  Matrix m(Eigen::Index(n * n), ka + kb);
  for (Eigen::Index i = 0; i < ka; ++i) m.col(i) = as_vec(a.basis()[std::size_t(i)]);
  for (Eigen::Index j = 0; j < kb; ++j) m.col(ka + j) = -as_vec(b.basis()[std::size_t(j)]);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  std::vector<Matrix> common;
  for (Eigen::Index i = 0; i < ka + kb; ++i) {
    const double s = i < sv.size() ? sv(i) : 0.0;
    // Orthonormal inputs: singular values lie in [0, sqrt 2]; small means shared.
    if (s > std::sqrt(tol)) continue;
    const Vector v = svd.matrixV().col(i);
    Matrix x = Matrix::Zero(Eigen::Index(n), Eigen::Index(n));
    for (Eigen::Index k = 0; k < ka; ++k) x += v(k) * a.basis()[std::size_t(k)];
    common.push_back(x);
  }
  return span_basis(common, n, tol);
}

LieAlgebraSpan IdealFamily::member(const Vector& normal, const LieAlgebraSpan& g) const {
  Matrix nm = Matrix::Zero(Eigen::Index(g.ambient_dim()), Eigen::Index(g.ambient_dim()));
  for (Eigen::Index i = 0; i < normal.size(); ++i) nm += normal(i) * complement[std::size_t(i)];
  std::vector<Matrix> mats = derived.basis();
  const double nn = as_vec(nm).squaredNorm();
  for (const auto& c : complement) mats.push_back(c - nm * (as_vec(nm).dot(as_vec(c)) / nn));
  LieAlgebraSpan h = span_basis(mats, g.ambient_dim(), g.tol());
  return h;
}

IdealFamily codim1_ideals_oracle(const LieAlgebraSpan& g) {
  IdealFamily fam;
  fam.derived = derived_algebra(g);
  fam.quotient_dim = g.dim() - fam.derived.dim();
  if (fam.quotient_dim == 0) return fam;
  fam.parameters = fam.quotient_dim - 1;
  fam.complement = complement_in(fam.derived, g);
  for (std::size_t skip = 0; skip < fam.complement.size(); ++skip) {
    std::vector<Matrix> mats = fam.derived.basis();
    for (std::size_t i = 0; i < fam.complement.size(); ++i)
      if (i != skip) mats.push_back(fam.complement[i]);
    fam.representatives.push_back(span_basis(mats, g.ambient_dim(), g.tol()));
  }
  return fam;
}

}  // namespace subhol
