#include <random>

#include "doctest.h"
#include "subhol/chart_calculus.hpp"

using namespace subhol;

namespace {

Chart heisenberg_chart() { return Chart{{"t", "x1", "x2", "x3", "x4"}}; }

VectorField field(const Chart& c, std::initializer_list<const char*> comps) {
  VectorField v;
  for (const char* s : comps) v.components.push_back(parse_expression(s, c));
  return v;
}

// Random polynomial of total degree <= 2 with small integer coefficients.
ChartFunction random_poly(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-3, 3);
  Polynomial p(n);
  Monomial m{};
  p.add_term(m, coef(rng));
  for (std::size_t i = 0; i < n; ++i) {
    Monomial mi{};
    mi[i] = 1;
    p.add_term(mi, coef(rng));
    for (std::size_t j = i; j < n; ++j) {
      Monomial mij = mi;
      mij[j] += 1;
      if (rng() % 3 == 0) p.add_term(mij, coef(rng));
    }
  }
  return ChartFunction(p);
}

VectorField random_field(std::size_t n, std::mt19937_64& rng) {
  VectorField v;
  for (std::size_t i = 0; i < n; ++i) v.components.push_back(random_poly(n, rng));
  return v;
}

}  // namespace

TEST_CASE("polynomial exact division and monic normalization") {
  Chart c{{"x", "y"}};
  const auto p = parse_expression("(x + 2*y)*(x - y)^2", c).numerator();
  const auto d = parse_expression("x - y", c).numerator();
  auto q = p.divide_exact(d);
  REQUIRE(q);
  CHECK(*q * d == p);
  CHECK_FALSE(p.divide_exact(parse_expression("x + y", c).numerator()));
}

TEST_CASE("rational functions cancel common factors") {
  Chart c{{"x", "y"}};
  const auto f = parse_expression("(x^2 - y^2)/(x - y)", c);
  CHECK(f.is_polynomial());
  CHECK(f == parse_expression("x + y", c));
  const auto g = parse_expression("1/(1 - x^2) - 1/((1 - x)*(1 + x))", c);
  CHECK(g.is_zero());
  const auto h = parse_expression("x/(1-x^2-y^2)^2", c);
  CHECK(h.derivative(0) == parse_expression("(1 + 3*x^2 - y^2)/(1-x^2-y^2)^3", c));
}

TEST_CASE("evaluate") {
  Chart c{{"x1", "x2", "x3", "x4"}};
  const auto H = parse_expression("x1^2 + x2^2 + x3^2 + x4^2", c);
  std::vector<Rational> ones(4, Rational(1));
  CHECK(H.evaluate(std::span<const Rational>(ones)) == 4);
  CHECK(parse_expression("1", c).evaluate(std::span<const Rational>(ones)) == 1);
  Chart cx{{"x"}};
  std::vector<Rational> zero{Rational(0)};
  CHECK_THROWS_AS(parse_expression("1/x", cx).evaluate(std::span<const Rational>(zero)), PoleError);
  CompiledFunction cf(parse_expression("1/x", cx));
  std::vector<double> z{0.0};
  CHECK_THROWS_AS(cf(z), PoleError);
}

TEST_CASE("parser grammar and canonical printing") {
  Chart c{{"v", "u", "t", "x1"}};
  CHECK(parse_expression("3/2*x1^2 - -v", c) == parse_expression("v + 1.5*x1*x1", c));
  CHECK(parse_expression("x1^-2", c) == parse_expression("1/(x1*x1)", c));
  CHECK_THROWS_AS(parse_expression("x1 + y", c), ParseError);
  CHECK_THROWS_AS(parse_expression("(x1", c), ParseError);
  CHECK_THROWS_AS(parse_expression("1/(t - t)", c), ParseError);
  const auto f = parse_expression("(v + u^2)/(1 - x1^2)^2 + t", c);
  const std::string s = f.to_string(c.coords);
  CHECK(parse_expression(s, c).to_string(c.coords) == s);
}

TEST_CASE("vector field brackets") {
  Chart c{{"x", "y"}};
  const auto dx = field(c, {"1", "0"});
  const auto dy = field(c, {"0", "1"});
  CHECK(vf_bracket(dx, dy).is_zero());
  CHECK(vf_bracket(dx, field(c, {"0", "x"})) == dy);

  // Example-1 style frame: [d_x1, d_x2 - x1 d_t] = -d_t.
  Chart h = heisenberg_chart();
  const auto x1 = field(h, {"0", "1", "0", "0", "0"});
  const auto x2 = field(h, {"-x1", "0", "1", "0", "0"});
  CHECK(vf_bracket(x1, x2) == field(h, {"-1", "0", "0", "0", "0"}));
}

TEST_CASE("exterior derivative conventions") {
  Chart h = heisenberg_chart();
  const OneForm dt{{h.constant(1), h.constant(0), h.constant(0), h.constant(0), h.constant(0)}};
  const auto d1 = VectorField::coordinate(5, 1);
  const auto d2 = VectorField::coordinate(5, 2);
  CHECK(exterior_derivative(dt, d1, d2).is_zero());
  OneForm theta = dt;
  theta.components[2] = h.coordinate("x1");
  CHECK(exterior_derivative(theta, d1, d2) == h.constant(1));
  const auto dm = exterior_derivative_matrix(theta);
  CHECK(dm[1][2] == h.constant(1));
  CHECK(dm[2][1] == h.constant(-1));
}

TEST_CASE("Jacobi identity holds exactly for random quadratic fields") {
  std::mt19937_64 rng(7);
  const std::size_t n = 3;
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_field(n, rng), y = random_field(n, rng), z = random_field(n, rng);
    const auto j = vf_bracket(vf_bracket(x, y), z) + vf_bracket(vf_bracket(y, z), x) + vf_bracket(vf_bracket(z, x), y);
    CHECK(j.is_zero());
  }
}

TEST_CASE("d(d theta) = 0 and antisymmetry for random fields") {
  std::mt19937_64 rng(11);
  const std::size_t n = 3;
  for (int trial = 0; trial < 10; ++trial) {
    OneForm theta;
    for (std::size_t i = 0; i < n; ++i) theta.components.push_back(random_poly(n, rng));
    const auto x = random_field(n, rng), y = random_field(n, rng), z = random_field(n, rng);
    auto w = [&](const VectorField& a, const VectorField& b) { return exterior_derivative(theta, a, b); };
    CHECK((w(x, y) + w(y, x)).is_zero());
    const auto ddt = apply(x, w(y, z)) - apply(y, w(x, z)) + apply(z, w(x, y)) - w(vf_bracket(x, y), z) +
                     w(vf_bracket(x, z), y) - w(vf_bracket(y, z), x);
    CHECK(ddt.is_zero());
  }
}

TEST_CASE("exact inverse and determinant") {
  Chart c{{"x", "y"}};
  FunctionMatrix m{{parse_expression("1/(1-x^2)", c), parse_expression("x*y", c)},
                   {parse_expression("x*y", c), parse_expression("1 + y^2", c)}};
  const auto inv = inverse(m);
  const auto id = multiply(m, inv);
  CHECK(id[0][0] == c.constant(1));
  CHECK(id[0][1].is_zero());
  CHECK(id[1][0].is_zero());
  CHECK(id[1][1] == c.constant(1));
  CHECK(determinant(m) == m[0][0] * m[1][1] - m[0][1] * m[1][0]);
  FunctionMatrix sing{{c.constant(1), c.coordinate("x")}, {c.coordinate("y"), c.coordinate("x") * c.coordinate("y")}};
  CHECK_THROWS_AS(inverse(sing), SingularMatrixError);
}

TEST_CASE("Lie derivative of a frame metric") {
  Chart h = heisenberg_chart();
  FrameMetric g;
  g.frame = {field(h, {"0", "1", "0", "0", "0"}), field(h, {"-x1", "0", "1", "0", "0"}),
             field(h, {"0", "0", "0", "1", "0"}), field(h, {"-x3", "0", "0", "0", "1"})};
  const auto xi = VectorField::coordinate(5, 0);
  std::vector<VectorField> basis = g.frame;
  basis.push_back(xi);
  BasisDecomposer dec(basis);

  g.gram.assign(4, std::vector<ChartFunction>(4, ChartFunction(5)));
  for (int a = 0; a < 4; ++a) g.gram[a][a] = h.constant(1);
  CHECK(is_zero(lie_derivative_metric(xi, g, dec)));

  const auto s = parse_expression("(1 + t)^2", h);
  for (int a = 0; a < 4; ++a) g.gram[a][a] = s;
  const auto l = lie_derivative_metric(xi, g, dec);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) CHECK(l[a][b] == (a == b ? parse_expression("2*(1+t)", h) : h.constant(0)));
}
