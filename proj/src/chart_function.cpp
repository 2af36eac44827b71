#include "subhol/chart_function.hpp"

#include <algorithm>
#include <cmath>

namespace subhol {

namespace {

using FactorList = ChartFunction::FactorList;

Rational rational_pow(const Rational& x, int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

// Multiplies the factored product `list` by p^e, keeping factors monic and
// free of mutual divisibility. Constants removed from p are accumulated into
// `scale` (the denominator's constant part).
void add_factor(FactorList& list, Polynomial p, int e, Rational& scale) {
  if (e == 0) return;
  while (true) {
    if (p.is_constant()) {
      scale *= rational_pow(*p.constant_value(), e);
      return;
    }
    scale *= rational_pow(p.make_monic(), e);
    bool restarted = false;
    for (std::size_t i = 0; i < list.size(); ++i) {
      auto& [q, eq] = list[i];
      if (q == p) {
        eq += e;
        return;
      }
      if (q.total_degree() < p.total_degree()) {
        if (auto quot = p.divide_exact(q)) {
          eq += e;
          p = std::move(*quot);
          restarted = true;
          break;
        }
      } else if (q.total_degree() > p.total_degree()) {
        if (auto quot = q.divide_exact(p)) {
          const int old = eq;
          q = p;
          eq = old + e;
          add_factor(list, std::move(*quot), old, scale);
          return;
        }
      }
    }
    if (!restarted) {
      list.emplace_back(std::move(p), e);
      return;
    }
  }
}

// Splits factors of `b` that are proper multiples of factors of `a`. The
// product represented by `b` is unchanged.
bool split_against(const FactorList& a, FactorList& b) {
  for (std::size_t j = 0; j < b.size(); ++j) {
    for (const auto& [f, ef] : a) {
      const auto& g = b[j].first;
      if (f.total_degree() >= g.total_degree()) continue;
      if (auto quot = g.divide_exact(f)) {
        const int e = b[j].second;
        b.erase(b.begin() + std::ptrdiff_t(j));
        Rational scale = 1;
        add_factor(b, f, e, scale);
        add_factor(b, std::move(*quot), e, scale);
        return true;
      }
    }
  }
  return false;
}

void refine(FactorList& a, FactorList& b) {
  while (split_against(a, b) || split_against(b, a)) {
  }
}

Polynomial expand(const FactorList& list, std::size_t nvars) {
  Polynomial r = Polynomial::constant(nvars, 1);
  for (const auto& [f, e] : list) r = r * f.pow(unsigned(e));
  return r;
}

int exponent_of(const FactorList& list, const Polynomial& f) {
  for (const auto& [g, e] : list)
    if (g == f) return e;
  return 0;
}

}  // namespace

ChartFunction ChartFunction::constant(std::size_t nvars, const Rational& c) {
  return ChartFunction(Polynomial::constant(nvars, c));
}

ChartFunction ChartFunction::variable(std::size_t nvars, std::size_t index) {
  return ChartFunction(Polynomial::variable(nvars, index));
}

Polynomial ChartFunction::denominator() const { return expand(den_, nvars_); }

std::optional<Rational> ChartFunction::constant_value() const {
  if (!den_.empty()) return std::nullopt;
  return num_.constant_value();
}

void ChartFunction::normalize() {
  if (num_.is_zero()) {
    den_.clear();
    return;
  }
  for (auto& [f, e] : den_) {
    while (e > 0) {
      auto q = num_.divide_exact(f);
      if (!q) break;
      num_ = std::move(*q);
      --e;
    }
  }
  std::erase_if(den_, [](const auto& fe) { return fe.second == 0; });
}

ChartFunction& ChartFunction::operator+=(const ChartFunction& o) {
  if (nvars_ == 0) nvars_ = o.nvars_;
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_.empty() && o.den_.empty()) {
    num_ += o.num_;
    return *this;
  }
  FactorList other = o.den_;
  refine(den_, other);
  FactorList common = den_;
  for (const auto& [f, e] : other) {
    bool found = false;
    for (auto& [g, eg] : common) {
      if (g == f) {
        eg = std::max(eg, e);
        found = true;
        break;
      }
    }
    if (!found) common.emplace_back(f, e);
  }
  Polynomial ma = Polynomial::constant(nvars_, 1);
  Polynomial mb = Polynomial::constant(nvars_, 1);
  for (const auto& [f, e] : common) {
    const int ea = exponent_of(den_, f);
    const int eb = exponent_of(other, f);
    if (e > ea) ma = ma * f.pow(unsigned(e - ea));
    if (e > eb) mb = mb * f.pow(unsigned(e - eb));
  }
  num_ = num_ * ma + o.num_ * mb;
  den_ = std::move(common);
  normalize();
  return *this;
}

ChartFunction& ChartFunction::operator-=(const ChartFunction& o) { return *this += -o; }

ChartFunction& ChartFunction::operator*=(const ChartFunction& o) {
  if (nvars_ == 0) nvars_ = o.nvars_;
  if (is_zero()) return *this;
  if (o.is_zero()) {
    num_ = Polynomial(nvars_);
    den_.clear();
    return *this;
  }
  num_ = num_ * o.num_;
  Rational scale = 1;
  for (const auto& [f, e] : o.den_) add_factor(den_, f, e, scale);
  if (scale != 1) num_ *= Rational(1) / scale;
  normalize();
  return *this;
}

ChartFunction& ChartFunction::operator/=(const ChartFunction& o) {
  if (o.is_zero()) throw PoleError("ChartFunction: division by the zero function");
  if (nvars_ == 0) nvars_ = o.nvars_;
  if (is_zero()) return *this;
  num_ = num_ * o.denominator();
  Rational scale = 1;
  add_factor(den_, o.num_, 1, scale);
  if (scale != 1) num_ *= Rational(1) / scale;
  normalize();
  return *this;
}

ChartFunction operator*(ChartFunction a, const Rational& c) {
  a.num_ *= c;
  if (a.num_.is_zero()) a.den_.clear();
  return a;
}

ChartFunction ChartFunction::operator-() const {
  ChartFunction r = *this;
  r.num_ *= Rational(-1);
  return r;
}

ChartFunction ChartFunction::pow(int e) const {
  if (e < 0) return ChartFunction::constant(nvars_, 1) / pow(-e);
  ChartFunction r = ChartFunction::constant(nvars_, 1);
  for (int i = 0; i < e; ++i) r *= *this;
  return r;
}

ChartFunction ChartFunction::derivative(std::size_t var) const {
  ChartFunction result(num_.derivative(var));
  result.nvars_ = nvars_;
  result.den_ = den_;
  result.normalize();
  for (std::size_t i = 0; i < den_.size(); ++i) {
    const auto& [f, e] = den_[i];
    Polynomial df = f.derivative(var);
    if (df.is_zero()) continue;
    ChartFunction term(num_ * df * Rational(e));
    term.nvars_ = nvars_;
    term.den_ = den_;
    term.den_[i].second += 1;
    term.normalize();
    result -= term;
  }
  return result;
}

Rational ChartFunction::evaluate(std::span<const Rational> point) const {
  Rational d = 1;
  for (const auto& [f, e] : den_) {
    Rational v = f.evaluate(point);
    if (v == 0) throw PoleError("ChartFunction: denominator vanishes at point");
    d *= rational_pow(v, e);
  }
  return num_.evaluate(point) / d;
}

double ChartFunction::evaluate(std::span<const double> point) const {
  double d = 1.0;
  for (const auto& [f, e] : den_) {
    const double v = f.evaluate(point);
    if (v == 0.0) throw PoleError("ChartFunction: denominator vanishes at point");
    d *= std::pow(v, e);
  }
  return num_.evaluate(point) / d;
}

std::string ChartFunction::to_string(std::span<const std::string> names) const {
  if (den_.empty()) return num_.to_string(names);
  return "(" + num_.to_string(names) + ")/(" + denominator().to_string(names) + ")";
}

CompiledPolynomial::CompiledPolynomial(const Polynomial& p) {
  for (const auto& [m, c] : p.terms()) {
    coeffs_.push_back(c.get_d());
    term_start_.push_back(std::uint32_t(powers_.size()));
    for (std::size_t i = 0; i < p.nvars(); ++i)
      if (m[i]) powers_.emplace_back(std::uint8_t(i), m[i]);
  }
  term_start_.push_back(std::uint32_t(powers_.size()));
}

double CompiledPolynomial::operator()(std::span<const double> x) const {
  double acc = 0.0;
  for (std::size_t t = 0; t < coeffs_.size(); ++t) {
    double v = coeffs_[t];
    for (std::uint32_t k = term_start_[t]; k < term_start_[t + 1]; ++k) {
      const double base = x[powers_[k].first];
      for (int e = 0; e < powers_[k].second; ++e) v *= base;
    }
    acc += v;
  }
  return acc;
}

CompiledFunction::CompiledFunction(const ChartFunction& f) : num_(f.numerator()) {
  for (const auto& [p, e] : f.denominator_factors()) den_.emplace_back(CompiledPolynomial(p), e);
}

double CompiledFunction::operator()(std::span<const double> x) const {
  if (num_.is_zero()) return 0.0;
  double d = 1.0;
  for (const auto& [p, e] : den_) {
    const double v = p(x);
    for (int i = 0; i < e; ++i) d *= v;
  }
  if (d == 0.0) throw PoleError("CompiledFunction: denominator vanishes at point");
  return num_(x) / d;
}

}  // namespace subhol
