#include "subhol/chart_calculus.hpp"

#include <cctype>

namespace subhol {

std::size_t Chart::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (coords[i] == name) return i;
  throw std::invalid_argument("unknown coordinate '" + std::string(name) + "'");
}

ChartFunction Chart::coordinate(std::string_view name) const {
  return ChartFunction::variable(dim(), index_of(name));
}

VectorField VectorField::zero(std::size_t n) {
  return VectorField{std::vector<ChartFunction>(n, ChartFunction(n))};
}

VectorField VectorField::coordinate(std::size_t n, std::size_t i) {
  VectorField v = zero(n);
  v.components[i] = ChartFunction::constant(n, 1);
  return v;
}

VectorField& VectorField::operator+=(const VectorField& o) {
  for (std::size_t i = 0; i < components.size(); ++i) components[i] += o.components[i];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  for (std::size_t i = 0; i < components.size(); ++i) components[i] -= o.components[i];
  return *this;
}

VectorField operator*(const ChartFunction& f, const VectorField& v) {
  VectorField r = v;
  for (auto& c : r.components) c *= f;
  return r;
}

bool VectorField::is_zero() const {
  for (const auto& c : components)
    if (!c.is_zero()) return false;
  return true;
}

ChartFunction OneForm::operator()(const VectorField& v) const {
  ChartFunction acc(dim());
  for (std::size_t i = 0; i < components.size(); ++i)
    if (!components[i].is_zero() && !v.components[i].is_zero()) acc += components[i] * v.components[i];
  return acc;
}

ChartFunction apply(const VectorField& x, const ChartFunction& f) {
  ChartFunction acc(x.dim());
  if (f.is_zero()) return acc;
  for (std::size_t j = 0; j < x.dim(); ++j) {
    if (x.components[j].is_zero()) continue;
    ChartFunction df = f.derivative(j);
    if (!df.is_zero()) acc += x.components[j] * df;
  }
  return acc;
}

VectorField vf_bracket(const VectorField& x, const VectorField& y) {
  VectorField r = VectorField::zero(x.dim());
  for (std::size_t k = 0; k < x.dim(); ++k)
    r.components[k] = apply(x, y.components[k]) - apply(y, x.components[k]);
  return r;
}

ChartFunction exterior_derivative(const OneForm& theta, const VectorField& x, const VectorField& y) {
  return apply(x, theta(y)) - apply(y, theta(x)) - theta(vf_bracket(x, y));
}

FunctionMatrix exterior_derivative_matrix(const OneForm& theta) {
  const std::size_t n = theta.dim();
  FunctionMatrix d(n, std::vector<ChartFunction>(n, ChartFunction(n)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      d[i][j] = theta.components[j].derivative(i) - theta.components[i].derivative(j);
      d[j][i] = -d[i][j];
    }
  return d;
}

namespace {

std::size_t complexity(const ChartFunction& f) {
  std::size_t c = f.numerator().size();
  for (const auto& [p, e] : f.denominator_factors()) c += p.size() * std::size_t(e);
  return c;
}

std::size_t nvars_of(const FunctionMatrix& m) { return m.empty() ? 0 : m[0][0].nvars(); }

}  // namespace

FunctionMatrix inverse(const FunctionMatrix& m) {
  const std::size_t n = m.size();
  const std::size_t nv = nvars_of(m);
  FunctionMatrix a = m;
  FunctionMatrix inv(n, std::vector<ChartFunction>(n, ChartFunction(nv)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = ChartFunction::constant(nv, 1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t best = n;
    for (std::size_t r = col; r < n; ++r) {
      if (a[r][col].is_zero()) continue;
      if (best == n || complexity(a[r][col]) < complexity(a[best][col])) best = r;
    }
    if (best == n) throw SingularMatrixError("inverse: matrix is singular over the rational-function field");
    std::swap(a[col], a[best]);
    std::swap(inv[col], inv[best]);
    const ChartFunction pivot = a[col][col];
    if (!(pivot.constant_value() && *pivot.constant_value() == 1)) {
      for (std::size_t j = 0; j < n; ++j) {
        if (!a[col][j].is_zero()) a[col][j] /= pivot;
        if (!inv[col][j].is_zero()) inv[col][j] /= pivot;
      }
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      const ChartFunction f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        if (!a[col][j].is_zero()) a[r][j] -= f * a[col][j];
        if (!inv[col][j].is_zero()) inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

ChartFunction determinant(const FunctionMatrix& m) {
  const std::size_t n = m.size();
  const std::size_t nv = nvars_of(m);
  FunctionMatrix a = m;
  ChartFunction det = ChartFunction::constant(nv, 1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t best = n;
    for (std::size_t r = col; r < n; ++r) {
      if (a[r][col].is_zero()) continue;
      if (best == n || complexity(a[r][col]) < complexity(a[best][col])) best = r;
    }
    if (best == n) return ChartFunction(nv);
    if (best != col) {
      std::swap(a[col], a[best]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col].is_zero()) continue;
      const ChartFunction f = a[r][col] / a[col][col];
      for (std::size_t j = col; j < n; ++j)
        if (!a[col][j].is_zero()) a[r][j] -= f * a[col][j];
    }
  }
  return det;
}

FunctionMatrix multiply(const FunctionMatrix& a, const FunctionMatrix& b) {
  const std::size_t n = a.size(), k = b.size(), p = b.empty() ? 0 : b[0].size();
  const std::size_t nv = nvars_of(a);
  FunctionMatrix r(n, std::vector<ChartFunction>(p, ChartFunction(nv)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (a[i][l].is_zero()) continue;
      for (std::size_t j = 0; j < p; ++j)
        if (!b[l][j].is_zero()) r[i][j] += a[i][l] * b[l][j];
    }
  return r;
}

FunctionMatrix transpose(const FunctionMatrix& a) {
  if (a.empty()) return a;
  FunctionMatrix r(a[0].size(), std::vector<ChartFunction>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) r[j][i] = a[i][j];
  return r;
}

bool is_zero(const FunctionMatrix& m) {
  for (const auto& row : m)
    for (const auto& f : row)
      if (!f.is_zero()) return false;
  return true;
}

BasisDecomposer::BasisDecomposer(const std::vector<VectorField>& basis) {
  const std::size_t n = basis.size();
  FunctionMatrix cols(n, std::vector<ChartFunction>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (basis[i].dim() != n) throw std::invalid_argument("BasisDecomposer: basis must have n fields of dimension n");
    for (std::size_t j = 0; j < n; ++j) cols[i][j] = basis[j].components[i];
  }
  inverse_ = inverse(cols);
}

std::vector<ChartFunction> BasisDecomposer::coefficients(const VectorField& z) const {
  const std::size_t n = inverse_.size();
  std::vector<ChartFunction> c(n, ChartFunction(z.dim()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!inverse_[i][j].is_zero() && !z.components[j].is_zero()) c[i] += inverse_[i][j] * z.components[j];
  return c;
}

FunctionMatrix lie_derivative_metric(const VectorField& xi, const FrameMetric& g, const BasisDecomposer& basis) {
  const std::size_t r = g.rank();
  const std::size_t nv = xi.dim();
  // proj[a][c]: D-frame component c of [xi, E_a].
  std::vector<std::vector<ChartFunction>> proj(r);
  for (std::size_t a = 0; a < r; ++a) {
    auto c = basis.coefficients(vf_bracket(xi, g.frame[a]));
    c.resize(r);
    proj[a] = std::move(c);
  }
  FunctionMatrix out(r, std::vector<ChartFunction>(r, ChartFunction(nv)));
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = a; b < r; ++b) {
      ChartFunction v = apply(xi, g.gram[a][b]);
      for (std::size_t c = 0; c < r; ++c) {
        if (!proj[a][c].is_zero()) v -= proj[a][c] * g.gram[c][b];
        if (!proj[b][c].is_zero()) v -= g.gram[a][c] * proj[b][c];
      }
      out[a][b] = v;
      out[b][a] = v;
    }
  return out;
}

// ---------------------------------------------------------------------------
// Expression parser

namespace {

class Parser {
 public:
  Parser(std::string_view text, const Chart& chart) : s_(text), chart_(chart) {}

  ChartFunction parse() {
    ChartFunction v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ChartFunction expr() {
    ChartFunction v = term();
    while (true) {
      if (accept('+')) v += term();
      else if (accept('-')) v -= term();
      else return v;
    }
  }

  ChartFunction term() {
    ChartFunction v = unary();
    while (true) {
      if (accept('*')) v *= unary();
      else if (accept('/')) {
        ChartFunction d = unary();
        if (d.is_zero()) fail("division by zero");
        v /= d;
      } else return v;
    }
  }

  ChartFunction unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  ChartFunction power() {
    ChartFunction base = primary();
    if (accept('^')) {
      skip();
      bool neg = false;
      if (accept('-')) neg = true;
      skip();
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected integer exponent");
      const int e = std::stoi(std::string(s_.substr(start, pos_ - start)));
      if (neg && base.is_zero()) fail("zero to a negative power");
      return base.pow(neg ? -e : e);
    }
    return base;
  }

  ChartFunction primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      ChartFunction v = expr();
      if (!accept(')')) fail("expected ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      return chart_.constant(parse_rational(s_.substr(start, pos_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string_view name = s_.substr(start, pos_ - start);
      try {
        return chart_.coordinate(name);
      } catch (const std::invalid_argument&) {
        pos_ = start;
        fail("unknown identifier '" + std::string(name) + "'");
      }
    }
    fail("unexpected character");
  }

  std::string_view s_;
  const Chart& chart_;
  std::size_t pos_ = 0;
};

}  // namespace

ChartFunction parse_expression(std::string_view text, const Chart& chart) { return Parser(text, chart).parse(); }

Rational parse_rational(std::string_view text) {
  std::string t(text);
  auto trim = [](std::string& s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    s.erase(0, i);
  };
  trim(t);
  if (t.empty()) throw ParseError("empty rational literal");
  bool neg = false;
  if (t[0] == '-' || t[0] == '+') {
    neg = t[0] == '-';
    t.erase(0, 1);
  }
  Rational r;
  try {
    if (auto slash = t.find('/'); slash != std::string::npos) {
      Rational num(parse_rational(t.substr(0, slash)));
      Rational den(parse_rational(t.substr(slash + 1)));
      if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
      r = num / den;
    } else if (auto dot = t.find('.'); dot != std::string::npos) {
      std::string digits = t.substr(0, dot) + t.substr(dot + 1);
      if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("bad decimal literal '" + std::string(text) + "'");
      mpz_class num(digits);
      mpz_class den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, t.size() - dot - 1);
      r = Rational(num, den);
      r.canonicalize();
    } else {
      if (t.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("bad integer literal '" + std::string(text) + "'");
      r = Rational(mpz_class(t));
    }
  } catch (const std::invalid_argument&) {
    throw ParseError("bad rational literal '" + std::string(text) + "'");
  }
  return neg ? Rational(-r) : r;
}

std::vector<Rational> parse_point(std::span<const std::string> values) {
  std::vector<Rational> p;
  p.reserve(values.size());
  for (const auto& v : values) p.push_back(parse_rational(v));
  return p;
}

}  // namespace subhol
