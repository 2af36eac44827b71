#include "subhol/polynomial.hpp"

#include <cmath>
#include <stdexcept>

namespace subhol {

namespace {

bool divides(const Monomial& d, const Monomial& m, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (d[i] > m[i]) return false;
  return true;
}

}  // namespace

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term(Monomial{}, c);
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t index) {
  if (index >= nvars) throw std::out_of_range("Polynomial::variable: index out of range");
  Polynomial p(nvars);
  Monomial m{};
  m[index] = 1;
  p.add_term(m, 1);
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Monomial{});
}

std::optional<Rational> Polynomial::constant_value() const {
  if (terms_.empty()) return Rational(0);
  if (!is_constant()) return std::nullopt;
  return terms_.begin()->second;
}

int Polynomial::total_degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) {
    int s = 0;
    for (std::size_t i = 0; i < nvars_; ++i) s += m[i];
    d = std::max(d, s);
  }
  return d;
}

int Polynomial::degree_in(std::size_t var) const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, int(m[var]));
  return d;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (nvars_ == 0) nvars_ = o.nvars_;
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (nvars_ == 0) nvars_ = o.nvars_;
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r(std::max(a.nvars_, b.nvars_));
  if (a.is_zero() || b.is_zero()) return r;
  const std::size_t n = r.nvars_;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      Monomial m{};
      for (std::size_t i = 0; i < n; ++i) {
        const unsigned e = unsigned(ma[i]) + unsigned(mb[i]);
        if (e > 255) throw std::overflow_error("Polynomial: exponent overflow");
        m[i] = std::uint8_t(e);
      }
      r.add_term(m, ca * cb);
    }
  }
  return r;
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& [m, v] : r.terms_) v = -v;
  return r;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result = constant(nvars_, 1);
  Polynomial base = *this;
  while (e) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e) base = base * base;
  }
  return result;
}

Polynomial Polynomial::derivative(std::size_t var) const {
  Polynomial r(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m[var] == 0) continue;
    Monomial dm = m;
    dm[var] -= 1;
    r.add_term(dm, c * int(m[var]));
  }
  return r;
}

std::optional<Polynomial> Polynomial::divide_exact(const Polynomial& divisor) const {
  if (divisor.is_zero()) throw std::domain_error("Polynomial::divide_exact: division by zero");
  const std::size_t n = std::max(nvars_, divisor.nvars_);
  Polynomial q(n);
  if (is_zero()) return q;
  for (std::size_t i = 0; i < n; ++i)
    if (divisor.degree_in(i) > degree_in(i)) return std::nullopt;
  Polynomial r = *this;
  const auto& [dm, dc] = divisor.leading();
  while (!r.is_zero()) {
    const auto& [rm, rc] = r.leading();
    if (!divides(dm, rm, n)) return std::nullopt;
    Monomial qm{};
    for (std::size_t i = 0; i < n; ++i) qm[i] = std::uint8_t(rm[i] - dm[i]);
    Rational qc = rc / dc;
    q.add_term(qm, qc);
    Polynomial t(n);
    t.add_term(qm, qc);
    r -= t * divisor;
  }
  return q;
}

Rational Polynomial::make_monic() {
  if (is_zero()) return 1;
  Rational lc = leading().second;
  if (lc != 1) *this *= Rational(1) / lc;
  return lc;
}

Rational Polynomial::evaluate(std::span<const Rational> point) const {
  Rational acc = 0;
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < nvars_; ++i) {
      for (unsigned k = 0; k < m[i]; ++k) t *= point[i];
    }
    acc += t;
  }
  return acc;
}

double Polynomial::evaluate(std::span<const double> point) const {
  double acc = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = c.get_d();
    for (std::size_t i = 0; i < nvars_; ++i)
      if (m[i]) t *= std::pow(point[i], int(m[i]));
    acc += t;
  }
  return acc;
}

Polynomial Polynomial::compose(std::span<const Polynomial> values) const {
  const std::size_t n = values.empty() ? nvars_ : values[0].nvars();
  Polynomial r(n);
  for (const auto& [m, c] : terms_) {
    Polynomial t = constant(n, c);
    for (std::size_t i = 0; i < nvars_; ++i)
      if (m[i]) t = t * values[i].pow(m[i]);
    r += t;
  }
  return r;
}

std::string Polynomial::to_string(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational mag = abs(c);
    const bool negative = c < 0;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (!m[i]) continue;
      if (!mono.empty()) mono += "*";
      mono += names[i];
      if (m[i] > 1) mono += "^" + std::to_string(m[i]);
    }
    if (mono.empty()) {
      out += mag.get_str();
    } else if (mag == 1) {
      out += mono;
    } else {
      out += mag.get_str() + "*" + mono;
    }
  }
  return out;
}

}  // namespace subhol
