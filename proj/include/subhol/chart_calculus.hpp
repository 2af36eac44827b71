#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "subhol/chart_function.hpp"

namespace subhol {

/// Coordinate names of the single global chart.
struct Chart {
  std::vector<std::string> coords;

  std::size_t dim() const { return coords.size(); }
  std::size_t index_of(std::string_view name) const;  // throws std::invalid_argument
  ChartFunction coordinate(std::string_view name) const;
  ChartFunction constant(const Rational& c) const { return ChartFunction::constant(dim(), c); }
};

/// Vector field in the coordinate frame: components[i] multiplies d/dx^i.
struct VectorField {
  std::vector<ChartFunction> components;

  std::size_t dim() const { return components.size(); }
  static VectorField zero(std::size_t n);
  static VectorField coordinate(std::size_t n, std::size_t i);

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  friend VectorField operator*(const ChartFunction& f, const VectorField& v);
  bool is_zero() const;
  friend bool operator==(const VectorField& a, const VectorField& b) { return (a - b).is_zero(); }
};

/// One-form in the coordinate coframe: components[i] multiplies dx^i.
struct OneForm {
  std::vector<ChartFunction> components;

  std::size_t dim() const { return components.size(); }
  ChartFunction operator()(const VectorField& v) const;
};

using FunctionMatrix = std::vector<std::vector<ChartFunction>>;

class SingularMatrixError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// X(f) = sum_j X^j d_j f.
ChartFunction apply(const VectorField& x, const ChartFunction& f);

/// [X,Y]^k = sum_j (X^j d_j Y^k - Y^j d_j X^k).
VectorField vf_bracket(const VectorField& x, const VectorField& y);

/// d(theta)(X,Y) = X theta(Y) - Y theta(X) - theta([X,Y]).
ChartFunction exterior_derivative(const OneForm& theta, const VectorField& x, const VectorField& y);

/// Coordinate components (d theta)_{ij} = d_i theta_j - d_j theta_i.
FunctionMatrix exterior_derivative_matrix(const OneForm& theta);

/// Exact inverse over the rational-function field (Gauss-Jordan).
FunctionMatrix inverse(const FunctionMatrix& m);
ChartFunction determinant(const FunctionMatrix& m);

FunctionMatrix multiply(const FunctionMatrix& a, const FunctionMatrix& b);
FunctionMatrix transpose(const FunctionMatrix& a);
bool is_zero(const FunctionMatrix& m);

/// Frame of a rank-r distribution together with the gram matrix of g in it.
struct FrameMetric {
  std::vector<VectorField> frame;
  FunctionMatrix gram;

  std::size_t rank() const { return frame.size(); }
};

/// Expresses vector fields in a basis of TM. The basis fields are the
/// columns of an invertible coordinate matrix; the inverse is exact.
class BasisDecomposer {
 public:
  BasisDecomposer() = default;
  explicit BasisDecomposer(const std::vector<VectorField>& basis);

  std::vector<ChartFunction> coefficients(const VectorField& z) const;
  std::size_t size() const { return inverse_.size(); }

 private:
  FunctionMatrix inverse_;
};

/// (L_xi g)(E_a,E_b) = xi(g_ab) - g(pi[xi,E_a],E_b) - g(E_a,pi[xi,E_b]),
/// where the D-projection uses `basis` = frame followed by xi.
FunctionMatrix lie_derivative_metric(const VectorField& xi, const FrameMetric& g,
                                     const BasisDecomposer& basis);

/// Parses the expression grammar: identifiers from the chart, + - * / ^
/// (integer exponents), parentheses, integer/decimal literals.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

ChartFunction parse_expression(std::string_view text, const Chart& chart);

std::vector<Rational> parse_point(std::span<const std::string> values);
Rational parse_rational(std::string_view text);

}  // namespace subhol
