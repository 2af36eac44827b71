#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace subhol {

using Rational = mpq_class;

/// Maximum number of chart coordinates supported by the exact layer.
inline constexpr std::size_t kMaxVars = 16;

/// Exponent vector of a monomial. Ordered lexicographically; the polynomial
/// map sorts descending so that begin() is the lex-leading term.
using Monomial = std::array<std::uint8_t, kMaxVars>;

/// Sparse multivariate polynomial with rational coefficients in a fixed
/// number of variables. Zero coefficients are never stored.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rational, std::greater<>>;

  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, const Rational& c);
  static Polynomial variable(std::size_t nvars, std::size_t index);

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Constant term value when is_constant(), otherwise nullopt.
  std::optional<Rational> constant_value() const;
  int total_degree() const;
  int degree_in(std::size_t var) const;

  /// Leading term in descending lex order. Requires !is_zero().
  const std::pair<const Monomial, Rational>& leading() const { return *terms_.begin(); }

  void add_term(const Monomial& m, const Rational& c);

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  Polynomial operator-() const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  Polynomial pow(unsigned e) const;
  Polynomial derivative(std::size_t var) const;

  /// Exact quotient if `divisor` divides *this, otherwise nullopt.
  std::optional<Polynomial> divide_exact(const Polynomial& divisor) const;

  /// Scales so that the leading coefficient is 1; returns the factor removed.
  Rational make_monic();

  Rational evaluate(std::span<const Rational> point) const;
  double evaluate(std::span<const double> point) const;

  /// Substitutes polynomial values for each variable.
  Polynomial compose(std::span<const Polynomial> values) const;

  std::string to_string(std::span<const std::string> names) const;

 private:
  std::size_t nvars_ = 0;
  TermMap terms_;
};

}  // namespace subhol
