#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "subhol/polynomial.hpp"

namespace subhol {

/// Raised when an exact or floating evaluation hits a vanishing denominator.
class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Polynomial evaluator in doubles, precompiled from an exact polynomial.
class CompiledPolynomial {
 public:
  CompiledPolynomial() = default;
  explicit CompiledPolynomial(const Polynomial& p);

  double operator()(std::span<const double> x) const;
  bool is_zero() const { return coeffs_.empty(); }

 private:
  std::vector<double> coeffs_;
  // Per term: offsets into powers_ as (var, exponent) pairs.
  std::vector<std::uint32_t> term_start_;
  std::vector<std::pair<std::uint8_t, std::uint8_t>> powers_;
};

/// Exact rational function of the chart coordinates. The denominator is kept
/// as a product of monic polynomial factors; factors that divide the
/// numerator are cancelled after every operation, so a function is zero
/// exactly when its numerator is.
class ChartFunction {
 public:
  using FactorList = std::vector<std::pair<Polynomial, int>>;

  ChartFunction() = default;
  explicit ChartFunction(std::size_t nvars) : nvars_(nvars), num_(nvars) {}
  explicit ChartFunction(Polynomial p) : nvars_(p.nvars()), num_(std::move(p)) {}

  static ChartFunction constant(std::size_t nvars, const Rational& c);
  static ChartFunction variable(std::size_t nvars, std::size_t index);

  std::size_t nvars() const { return nvars_; }
  const Polynomial& numerator() const { return num_; }
  const FactorList& denominator_factors() const { return den_; }
  Polynomial denominator() const;

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.empty(); }
  /// Value when the function is a constant (no variables), else nullopt.
  std::optional<Rational> constant_value() const;

  ChartFunction& operator+=(const ChartFunction& o);
  ChartFunction& operator-=(const ChartFunction& o);
  ChartFunction& operator*=(const ChartFunction& o);
  ChartFunction& operator/=(const ChartFunction& o);

  friend ChartFunction operator+(ChartFunction a, const ChartFunction& b) { return a += b; }
  friend ChartFunction operator-(ChartFunction a, const ChartFunction& b) { return a -= b; }
  friend ChartFunction operator*(ChartFunction a, const ChartFunction& b) { return a *= b; }
  friend ChartFunction operator/(ChartFunction a, const ChartFunction& b) { return a /= b; }
  friend ChartFunction operator*(ChartFunction a, const Rational& c);
  ChartFunction operator-() const;

  friend bool operator==(const ChartFunction& a, const ChartFunction& b) { return (a - b).is_zero(); }

  ChartFunction pow(int e) const;
  ChartFunction derivative(std::size_t var) const;

  Rational evaluate(std::span<const Rational> point) const;
  double evaluate(std::span<const double> point) const;

  /// Canonical text: "num" or "(num)/(den)" with the expanded denominator.
  std::string to_string(std::span<const std::string> names) const;

 private:
  void normalize();

  std::size_t nvars_ = 0;
  Polynomial num_;
  FactorList den_;
};

/// Double-precision evaluator for a ChartFunction.
class CompiledFunction {
 public:
  CompiledFunction() = default;
  explicit CompiledFunction(const ChartFunction& f);

  double operator()(std::span<const double> x) const;
  bool is_zero() const { return num_.is_zero(); }

 private:
  CompiledPolynomial num_;
  std::vector<std::pair<CompiledPolynomial, int>> den_;
};

}  // namespace subhol
