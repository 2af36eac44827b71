#include <numbers>
#include <random>

#include "doctest.h"
#include "subhol/algebra.hpp"

using namespace subhol;

namespace {

Matrix unit(int n, int i, int j) {
  Matrix m = Matrix::Zero(n, n);
  m(i, j) = 1;
  return m;
}

Matrix rot(int n, int i, int j) { return unit(n, i, j) - unit(n, j, i); }

// Witt-basis matrix of the triple (a, A, X) acting on R^{1,k+1}.
Matrix triple(double a, const Matrix& A, const Vector& x) {
  const int k = int(x.size());
  Matrix m = Matrix::Zero(k + 2, k + 2);
  m(0, 0) = a;
  m(k + 1, k + 1) = -a;
  m.block(0, 1, 1, k) = x.transpose();
  m.block(1, 1, k, k) = A;
  m.block(1, k + 1, k, 1) = -x;
  return m;
}

Vector e(int k, int i) { return Vector::Unit(k, i); }

bool g_skew(const Matrix& m, const Matrix& g, double tol) { return (g.transpose() * m + m.transpose() * g).norm() <= tol; }

LieAlgebraSpan so3() { return span_basis({rot(3, 0, 1), rot(3, 0, 2), rot(3, 1, 2)}, 3); }

// R a-generator together with R^k, all as triples.
LieAlgebraSpan r_ltimes_rk(int k) {
  std::vector<Matrix> g{triple(1, Matrix::Zero(k, k), Vector::Zero(k))};
  for (int i = 0; i < k; ++i) g.push_back(triple(0, Matrix::Zero(k, k), e(k, i)));
  return span_basis(g, std::size_t(k + 2));
}

}  // namespace

TEST_CASE("bivector to endomorphism") {
  const auto euc = ScalarProductSpace::euclidean(2);
  CHECK(bivector_to_endo(Bivector::wedge(2, 0, 0), euc).isZero());

  // (E1^E2)E1 = E2 and (E1^E2)E2 = -E1 with (X^Y)Z = g(X,Z)Y - g(Y,Z)X.
  const Matrix m = bivector_to_endo(Bivector::wedge(2, 0, 1), euc);
  CHECK(m.col(0).isApprox(Vector::Unit(2, 1)));
  CHECK(m.col(1).isApprox(-Vector::Unit(2, 0)));

  // Basis V, X1, U with g(V,U) = 1.
  const auto witt = ScalarProductSpace::witt(1);
  const Matrix w = bivector_to_endo(Bivector::wedge(3, 1, 0), witt);
  CHECK(w.col(2).isApprox(-Vector::Unit(3, 1)));  // (X1^V)U = -X1
  CHECK(w.col(1).isApprox(Vector::Unit(3, 0)));   // (X1^V)X1 = V
  CHECK(w.col(0).isZero());

  CHECK_THROWS_AS(bivector_to_endo(Bivector::wedge(3, 0, 1), euc), DimensionError);

  const Bivector back = endo_to_bivector(w, witt.gram_d());
  CHECK(back.coeffs.isApprox(Bivector::wedge(3, 1, 0).coeffs));
}

TEST_CASE("scalar product spaces reject bad gram matrices") {
  QMatrix sing(2, 2);
  sing(0, 0) = 1;
  CHECK_THROWS(ScalarProductSpace(sing));
  QMatrix asym = QMatrix::identity(2);
  asym(0, 1) = 1;
  CHECK_THROWS(ScalarProductSpace(asym));
}

TEST_CASE("endomorphisms of bivectors are g-skew") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> c(-5, 5);
  const auto witt = ScalarProductSpace::witt(3);
  const std::size_t n = witt.dim();
  for (int trial = 0; trial < 25; ++trial) {
    QMatrix b(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        b(i, j) = Rational(c(rng), 1 + std::abs(c(rng)));
        b(j, i) = -b(i, j);
      }
    const QMatrix m = bivector_to_endo(b, witt.gram());
    CHECK((witt.gram().transpose() * m + m.transpose() * witt.gram()).is_zero());

    Bivector bd{b.to_double()};
    CHECK(g_skew(bivector_to_endo(bd, witt), witt.gram_d(), 1e-12));
  }
}

TEST_CASE("pairing of two-forms with bivectors") {
  Matrix omega = Matrix::Random(4, 4);
  omega = (omega - omega.transpose()).eval();
  CHECK(pair_form_bivector(omega, Bivector{Matrix::Zero(4, 4)}) == 0.0);
  CHECK(pair_form_bivector(omega, Bivector::wedge(4, 1, 2)) == doctest::Approx(2 * omega(1, 2)));
  CHECK_THROWS_AS(pair_form_bivector(omega, Bivector::wedge(3, 0, 1)), DimensionError);
}

TEST_CASE("matrix exponential") {
  CHECK(matrix_exp(Matrix::Zero(3, 3), 2.0) == Matrix::Identity(3, 3));

  const Matrix a = triple(0, Matrix::Zero(2, 2), e(2, 0) + 3 * e(2, 1));
  CHECK((a * a * a).isZero());
  const double t = 0.75;
  const Matrix series = Matrix::Identity(4, 4) + t * a + t * t / 2 * a * a;
  CHECK(matrix_exp(a, t) == series);

  const Matrix r = matrix_exp(rot(2, 0, 1), std::numbers::pi);
  CHECK((r + Matrix::Identity(2, 2)).norm() <= 1e-12);
}

TEST_CASE("exponential is a one-parameter group") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 30; ++trial) {
    Matrix a(4, 4);
    for (int i = 0; i < 16; ++i) a.data()[i] = u(rng);
    a /= std::max(1.0, a.norm());
    const double s = u(rng), t = u(rng);
    CHECK((matrix_exp(a, s) * matrix_exp(a, t) - matrix_exp(a, s + t)).norm() <= 1e-10);
  }
}

TEST_CASE("principal logarithm") {
  const Matrix a = 0.1 * rot(3, 0, 2);
  CHECK((matrix_log(matrix_exp(a)) - a).norm() <= 1e-12);
  CHECK_THROWS_AS(matrix_log(-Matrix::Identity(2, 2)), std::domain_error);
}

TEST_CASE("span basis") {
  Matrix m = Matrix::Random(3, 3);
  CHECK(span_basis({m, 2 * m, Matrix::Zero(3, 3)}, 3).dim() == 1);
  CHECK(span_basis({rot(3, 0, 1), rot(3, 0, 2), rot(3, 0, 1) + rot(3, 0, 2)}, 3).dim() == 2);
  CHECK(span_basis({}, 3).empty());
  CHECK(span_basis({Matrix::Zero(2, 2)}, 2).empty());

  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd;
  std::vector<Matrix> fam;
  Matrix b[3];
  for (auto& x : b) {
    x.resize(4, 4);
    for (int i = 0; i < 16; ++i) x.data()[i] = nd(rng);
  }
  for (int i = 0; i < 10; ++i) {
    Matrix noise(4, 4);
    for (int j = 0; j < 16; ++j) noise.data()[j] = 1e-14 * nd(rng);
    fam.push_back(nd(rng) * b[0] + nd(rng) * b[1] + nd(rng) * b[2] + noise);
  }
  const auto s = span_basis(fam, 4, 1e-9);
  CHECK(s.dim() == 3);
  for (const auto& x : b) CHECK(s.contains(x, 1e-9));
  CHECK_FALSE(s.contains(Matrix::Identity(4, 4), 1e-9));
}

TEST_CASE("Lie closure") {
  const auto abel = span_basis({unit(3, 0, 0), unit(3, 1, 1)}, 3);
  CHECK(lie_closure(abel).same_span(abel, 1e-9));

  const auto g = lie_closure(span_basis({rot(3, 0, 1), rot(3, 0, 2)}, 3));
  CHECK(g.dim() == 3);
  CHECK(g.is_closed(1e-9));
  CHECK(lie_closure(g).dim() == 3);

  const auto t = lie_closure(span_basis({triple(1, Matrix::Zero(1, 1), Vector::Zero(1)),
                                         triple(0, Matrix::Zero(1, 1), e(1, 0))},
                                        3));
  CHECK(t.dim() == 2);
  CHECK(t.is_closed(1e-9));

  // gl(3) from generic generators: the closure reaches the hard bound.
  const auto gl = lie_closure(span_basis({unit(3, 0, 1), unit(3, 1, 2), unit(3, 2, 0), unit(3, 0, 0)}, 3));
  CHECK(gl.dim() == 9);
  CHECK_THROWS_AS(lie_closure(span_basis({unit(3, 0, 1), unit(3, 1, 2), unit(3, 2, 0)}, 3), 1), ClosureError);
}

TEST_CASE("ideals, codimension and derived algebra") {
  const auto g3 = so3();
  CHECK(is_ideal(g3, g3));
  CHECK(codim(g3, g3) == 0);
  CHECK(derived_algebra(g3).dim() == 3);

  const auto g = r_ltimes_rk(3);
  const auto rk = span_basis({triple(0, Matrix::Zero(3, 3), e(3, 0)), triple(0, Matrix::Zero(3, 3), e(3, 1)),
                              triple(0, Matrix::Zero(3, 3), e(3, 2))},
                             5);
  CHECK(is_ideal(rk, g));
  CHECK(codim(rk, g) == 1);
  const auto line = span_basis({triple(1, Matrix::Zero(3, 3), Vector::Zero(3))}, 5);
  CHECK_FALSE(is_ideal(line, g));
  CHECK_THROWS_AS(is_ideal(span_basis({Matrix::Identity(5, 5)}, 5), g), ContainmentError);

  CHECK(intersect(rk, g).dim() == 3);
  CHECK(intersect(rk, line).dim() == 0);
}

TEST_CASE("codimension-one ideal oracle") {
  CHECK(codim1_ideals_oracle(so3()).none());

  const auto g = r_ltimes_rk(2);
  const auto fam = codim1_ideals_oracle(g);
  REQUIRE(fam.quotient_dim == 1);
  CHECK(fam.parameters == 0);
  REQUIRE(fam.representatives.size() == 1);
  const auto rk = span_basis({triple(0, Matrix::Zero(2, 2), e(2, 0)), triple(0, Matrix::Zero(2, 2), e(2, 1))}, 4);
  CHECK(fam.representatives[0].same_span(rk, 1e-9));

  // (R + so(2)) semidirect R^2: a circle of ideals.
  const Matrix J = rot(2, 0, 1);
  const Matrix agen = triple(1, Matrix::Zero(2, 2), Vector::Zero(2));
  const Matrix jgen = triple(0, J, Vector::Zero(2));
  const auto h = span_basis({agen, jgen, triple(0, Matrix::Zero(2, 2), e(2, 0)), triple(0, Matrix::Zero(2, 2), e(2, 1))}, 4);
  const auto fh = codim1_ideals_oracle(h);
  REQUIRE(fh.quotient_dim == 2);
  CHECK(fh.parameters == 1);
  CHECK(fh.representatives.size() == 2);
  for (const auto& rep : fh.representatives) {
    CHECK(codim(rep, h) == 1);
    CHECK(is_ideal(rep, h));
  }
  for (double t : {0.0, 0.4, 1.3, 2.9}) {
    const auto ideal =
        span_basis({std::cos(t) * agen + std::sin(t) * jgen, triple(0, Matrix::Zero(2, 2), e(2, 0)),
                    triple(0, Matrix::Zero(2, 2), e(2, 1))},
                   4);
    CHECK(is_ideal(ideal, h));
    CHECK(codim(ideal, h) == 1);
  }
}

TEST_CASE("every hyperplane through the derived algebra is an ideal") {
  // so(2) + R + R^3 with a rotation acting on the first two translations.
  const int k = 3;
  Matrix J = Matrix::Zero(k, k);
  J(0, 1) = -1;
  J(1, 0) = 1;
  std::vector<Matrix> gens{triple(1, Matrix::Zero(k, k), Vector::Zero(k)), triple(0, J, Vector::Zero(k))};
  for (int i = 0; i < k; ++i) gens.push_back(triple(0, Matrix::Zero(k, k), e(k, i)));
  const auto g = lie_closure(span_basis(gens, k + 2));
  const auto fam = codim1_ideals_oracle(g);
  REQUIRE(fam.quotient_dim == 2);
  for (const auto& rep : fam.representatives) {
    CHECK(is_ideal(rep, g));
    CHECK(codim(rep, g) == 1);
  }
  std::mt19937_64 rng(13);
  std::normal_distribution<double> nd;
  int ok = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Vector w(Eigen::Index(fam.quotient_dim));
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = nd(rng);
    const auto hyper = fam.member(w, g);
    if (hyper.dim() + 1 == g.dim() && is_ideal(hyper, g) &&
        hyper.contains(fam.derived, 1e-9))
      ++ok;
  }
  CHECK(ok == 100);
}

TEST_CASE("exact rank and exact closure") {
  std::vector<QMatrix> so3q{QMatrix::from(rot(3, 0, 1)), QMatrix::from(rot(3, 0, 2)), QMatrix::from(rot(3, 1, 2))};
  CHECK(exact_rank(so3q) == 3);
  CHECK(exact_bracket_closed(so3q));
  so3q.pop_back();
  CHECK_FALSE(exact_bracket_closed(so3q));
  QMatrix a = QMatrix::identity(3);
  a(0, 1) = Rational(1, 3);
  CHECK(a.determinant() == 1);
}
