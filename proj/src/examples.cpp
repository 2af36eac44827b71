#include "subhol/examples.hpp"

#include <random>

#include "json.hpp"

namespace subhol {

using ojson = nlohmann::ordered_json;

namespace {

std::string canonical(const std::string& text, const Chart& chart) {
  return parse_expression(text, chart).to_string(chart.coords);
}

std::string rational_string(const Rational& q) { return q.get_str(); }

std::vector<std::string> string_array(const ojson& j, const char* what) {
  if (!j.is_array()) throw ManifestError(std::string("manifest: '") + what + "' must be an array");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (e.is_string())
      out.push_back(e.get<std::string>());
    else if (e.is_number_integer())
      out.push_back(std::to_string(e.get<long long>()));
    else
      throw ManifestError(std::string("manifest: '") + what + "' entries must be strings");
  }
  return out;
}

std::vector<std::vector<std::string>> string_matrix(const ojson& j, const char* what) {
  if (!j.is_array()) throw ManifestError(std::string("manifest: '") + what + "' must be an array of arrays");
  std::vector<std::vector<std::string>> out;
  for (const auto& row : j) out.push_back(string_array(row, what));
  return out;
}

const ojson& field(const ojson& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw ManifestError(std::string("manifest: missing field '") + key + "'");
  return *it;
}

Chart chart_of(const Manifest& m) {
  Chart c{m.coords};
  if (c.dim() == 0 || c.dim() > kMaxVars) throw ManifestError("manifest: unsupported number of coordinates");
  for (std::size_t i = 0; i < c.dim(); ++i)
    for (std::size_t j = i + 1; j < c.dim(); ++j)
      if (c.coords[i] == c.coords[j]) throw ManifestError("manifest: duplicate coordinate " + c.coords[i]);
  return c;
}

std::vector<std::string> names_x(int count) {
  std::vector<std::string> out;
  for (int i = 1; i <= count; ++i) out.push_back("x" + std::to_string(i));
  return out;
}

// Unit vector field d_j as component strings.
std::vector<std::string> unit_field(std::size_t n, std::size_t j) {
  std::vector<std::string> f(n, "0");
  f[j] = "1";
  return f;
}

std::vector<std::string> zeros_row(std::size_t n) { return std::vector<std::string>(n, "0"); }

Manifest canonicalize(Manifest m) {
  const Chart c = chart_of(m);
  for (auto& s : m.theta) s = canonical(s, c);
  for (auto& f : m.frame)
    for (auto& s : f) s = canonical(s, c);
  for (auto& row : m.gram)
    for (auto& s : row) s = canonical(s, c);
  for (auto& b : m.basepoint) b = rational_string(parse_rational(b));
  return m;
}

}  // namespace

Manifest parse_manifest(std::string_view text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ManifestError(std::string("manifest: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ManifestError("manifest: top level must be an object");
  Manifest m;
  m.coords = string_array(field(doc, "coords"), "coords");
  const auto& n = field(doc, "n");
  if (!n.is_number_integer() || n.get<long long>() != static_cast<long long>(m.coords.size()))
    throw ManifestError("manifest: 'n' must equal the number of coordinates");
  m.theta = string_array(field(doc, "theta"), "theta");
  m.frame = string_matrix(field(doc, "frame"), "frame");
  m.gram = string_matrix(field(doc, "gram"), "gram");
  m.basepoint = string_array(field(doc, "basepoint"), "basepoint");
  if (auto it = doc.find("flags"); it != doc.end()) {
    if (!it->is_object()) throw ManifestError("manifest: 'flags' must be an object");
    if (auto k = it->find("expect_K_contact"); k != it->end()) {
      if (!k->is_boolean()) throw ManifestError("manifest: expect_K_contact must be boolean");
      m.expect_K_contact = k->get<bool>();
    }
  }
  if (auto it = doc.find("note"); it != doc.end() && it->is_string()) m.note = it->get<std::string>();

  if (m.theta.size() != m.n()) throw ManifestError("manifest: theta needs one component per coordinate");
  for (const auto& f : m.frame)
    if (f.size() != m.n()) throw ManifestError("manifest: frame fields need one component per coordinate");
  if (m.gram.size() != m.frame.size()) throw ManifestError("manifest: gram must be square of frame size");
  for (const auto& row : m.gram)
    if (row.size() != m.frame.size()) throw ManifestError("manifest: gram must be square of frame size");
  if (m.basepoint.size() != m.n()) throw ManifestError("manifest: basepoint needs one value per coordinate");
  try {
    return canonicalize(std::move(m));
  } catch (const ParseError& e) {
    throw ManifestError(std::string("manifest: ") + e.what());
  }
}

std::string emit_manifest(const Manifest& m) {
  ojson doc;
  doc["n"] = m.n();
  doc["coords"] = m.coords;
  doc["theta"] = m.theta;
  doc["frame"] = m.frame;
  doc["gram"] = m.gram;
  doc["basepoint"] = m.basepoint;
  doc["flags"] = ojson{{"expect_K_contact", m.expect_K_contact}};
  if (!m.note.empty()) doc["note"] = m.note;
  return doc.dump(2) + "\n";
}

ContactStructure to_structure(const Manifest& m) {
  ContactStructure s;
  s.chart = chart_of(m);
  try {
    for (const auto& e : m.theta) s.theta.components.push_back(parse_expression(e, s.chart));
    for (const auto& f : m.frame) {
      VectorField v;
      for (const auto& e : f) v.components.push_back(parse_expression(e, s.chart));
      s.metric.frame.push_back(std::move(v));
    }
    for (const auto& row : m.gram) {
      std::vector<ChartFunction> r;
      for (const auto& e : row) r.push_back(parse_expression(e, s.chart));
      s.metric.gram.push_back(std::move(r));
    }
    s.basepoint = parse_point(m.basepoint);
  } catch (const ParseError& e) {
    throw ManifestError(std::string("manifest: ") + e.what());
  }
  return s;
}

Manifest to_manifest(const ContactStructure& s, bool expect_K_contact, std::string note) {
  Manifest m;
  const auto& names = s.chart.coords;
  m.coords = names;
  for (const auto& f : s.theta.components) m.theta.push_back(f.to_string(names));
  for (const auto& v : s.metric.frame) {
    std::vector<std::string> comps;
    for (const auto& f : v.components) comps.push_back(f.to_string(names));
    m.frame.push_back(std::move(comps));
  }
  for (const auto& row : s.metric.gram) {
    std::vector<std::string> r;
    for (const auto& f : row) r.push_back(f.to_string(names));
    m.gram.push_back(std::move(r));
  }
  for (const auto& b : s.basepoint) m.basepoint.push_back(rational_string(b));
  m.expect_K_contact = expect_K_contact;
  m.note = std::move(note);
  return m;
}

Manifest build_example1(int s) {
  if (s < 2) throw std::invalid_argument("build_example1: s must be at least 2");
  Manifest m;
  const int k = 2 * s;
  m.coords = {"t", "v"};
  for (const auto& x : names_x(k)) m.coords.push_back(x);
  m.coords.push_back("u");
  const std::size_t n = m.coords.size();
  const std::size_t T = 0, V = 1, U = n - 1;
  auto xi = [](int i) { return std::size_t(1 + i); };  // coordinate index of x_i (t, v come first)

  m.theta = zeros_row(n);
  m.theta[T] = "1";
  for (int i = 1; i <= s - 1; ++i) m.theta[xi(2 * i)] = "x" + std::to_string(2 * i - 1);
  m.theta[xi(k - 1)] = "v";
  m.theta[xi(k)] = "u";

  m.frame.push_back(unit_field(n, V));
  for (int i = 1; i <= k; ++i) {
    auto f = unit_field(n, xi(i));
    if (i == k - 1)
      f[T] = "-v";
    else if (i == k)
      f[T] = "-u";
    else if (i % 2 == 0)
      f[T] = "-x" + std::to_string(i - 1);
    m.frame.push_back(std::move(f));
  }
  m.frame.push_back(unit_field(n, U));

  const std::size_t r = m.frame.size();
  m.gram.assign(r, zeros_row(r));
  m.gram[0][r - 1] = m.gram[r - 1][0] = "1";
  for (std::size_t a = 1; a + 1 < r; ++a) m.gram[a][a] = "1";
  std::string h;
  for (int i = 1; i <= k; ++i) h += (i > 1 ? " + x" : "x") + std::to_string(i) + "^2";
  m.gram[r - 1][r - 1] = h;
  m.basepoint.assign(n, "0");
  m.expect_K_contact = true;
  m.note = "pp-wave example, s = " + std::to_string(s);
  return canonicalize(std::move(m));
}

namespace {

struct BallData {
  Chart chart;
  std::vector<ChartFunction> theta0;  // coefficient of dx_i, i = 1..2s
  FunctionMatrix h0;
};

BallData ball(int s) {
  BallData b;
  const int k = 2 * s;
  b.chart.coords = {"t", "v"};
  for (const auto& x : names_x(k)) b.chart.coords.push_back(x);
  b.chart.coords.push_back("u");
  const std::size_t n = b.chart.dim();
  std::vector<ChartFunction> x;
  for (int i = 1; i <= k; ++i) x.push_back(ChartFunction::variable(n, std::size_t(1 + i)));
  ChartFunction w = ChartFunction::constant(n, 1);
  for (const auto& xi_ : x) w -= xi_ * xi_;
  const ChartFunction winv = ChartFunction::constant(n, 1) / w;
  const ChartFunction w2inv = winv * winv;

  // P = sum x_a dx_a, Q = sum (x_j dy_j - y_j dx_j).
  std::vector<ChartFunction> P = x, Q(k, ChartFunction(n));
  for (int j = 0; j < s; ++j) {
    Q[2 * j] = -x[2 * j + 1];
    Q[2 * j + 1] = x[2 * j];
  }
  b.h0.assign(k, std::vector<ChartFunction>(k, ChartFunction(n)));
  for (int a = 0; a < k; ++a)
    for (int c = 0; c < k; ++c) {
      ChartFunction v = (P[a] * P[c] + Q[a] * Q[c]) * w2inv;
      if (a == c) v += winv;
      b.h0[a][c] = v;
    }
  for (int a = 0; a < k; ++a) b.theta0.push_back(Q[a] * winv * Rational(1, 2));
  return b;
}

FunctionMatrix standard_j(int s, std::size_t nvars) {
  const int k = 2 * s;
  FunctionMatrix j(k, std::vector<ChartFunction>(k, ChartFunction(nvars)));
  // J d_{x_j} = d_{y_j}: column 2j maps to row 2j+1.
  for (int q = 0; q < s; ++q) {
    j[2 * q + 1][2 * q] = ChartFunction::constant(nvars, 1);
    j[2 * q][2 * q + 1] = ChartFunction::constant(nvars, -1);
  }
  return j;
}

}  // namespace

FunctionMatrix example2_complex_structure(int s) {
  const std::size_t n = std::size_t(2 * s + 3), r = n - 1;
  FunctionMatrix j(r, std::vector<ChartFunction>(r, ChartFunction(n)));
  const FunctionMatrix j0 = standard_j(s, n);
  for (int a = 0; a < 2 * s; ++a)
    for (int c = 0; c < 2 * s; ++c) j[1 + a][1 + c] = j0[a][c];
  return j;
}

Manifest build_example2(int s) {
  if (s < 1 || s > 2) throw std::invalid_argument("build_example2: shipped instantiations are s = 1, 2");
  const int k = 2 * s;
  BallData b = ball(s);
  const Chart& c = b.chart;
  const std::size_t n = c.dim();
  const std::size_t T = 0, V = 1, U = n - 1;

  // d theta_0 must equal the Kaehler form h_0(J., .).
  OneForm th0;
  th0.components.assign(n, ChartFunction(n));
  for (int a = 0; a < k; ++a) th0.components[std::size_t(2 + a)] = b.theta0[a];
  const FunctionMatrix dth0 = exterior_derivative_matrix(th0);
  const FunctionMatrix j0 = standard_j(s, n);
  for (int a = 0; a < k; ++a)
    for (int q = 0; q < k; ++q) {
      ChartFunction omega(n);
      for (int e = 0; e < k; ++e) omega += j0[e][a] * b.h0[e][q];
      if (!(dth0[std::size_t(2 + a)][std::size_t(2 + q)] == omega))
        throw std::logic_error("build_example2: d theta_0 is not the Kaehler form");
    }

  ContactStructure st;
  st.chart = c;
  st.theta.components.assign(n, ChartFunction(n));
  st.theta.components[T] = ChartFunction::constant(n, 1);
  st.theta.components[U] = ChartFunction::variable(n, V);
  for (int a = 0; a < k; ++a) st.theta.components[std::size_t(2 + a)] = b.theta0[a];

  st.metric.frame.push_back(VectorField::coordinate(n, V));
  for (int a = 0; a < k; ++a) {
    VectorField x = VectorField::coordinate(n, std::size_t(2 + a));
    x.components[T] = -b.theta0[a];
    st.metric.frame.push_back(std::move(x));
  }
  VectorField u = VectorField::coordinate(n, U);
  u.components[T] = -ChartFunction::variable(n, V);
  st.metric.frame.push_back(std::move(u));

  const std::size_t r = st.metric.frame.size();
  st.metric.gram.assign(r, std::vector<ChartFunction>(r, ChartFunction(n)));
  st.metric.gram[0][r - 1] = st.metric.gram[r - 1][0] = ChartFunction::constant(n, 1);
  for (int a = 0; a < k; ++a)
    for (int q = 0; q < k; ++q) st.metric.gram[std::size_t(1 + a)][std::size_t(1 + q)] = b.h0[a][q];
  ChartFunction h(n);
  for (int a = 0; a < k; ++a) h += ChartFunction::variable(n, std::size_t(2 + a)).pow(2);
  st.metric.gram[r - 1][r - 1] = h;
  st.basepoint.assign(n, Rational(0));
  return canonicalize(to_manifest(st, true,
                                  "complex hyperbolic ball instantiation, s = " + std::to_string(s) +
                                      "; theta_0 = (1/2) sum (x dy - y dx)/(1-|z|^2), H = sum x_i^2"));
}

Manifest build_heisenberg(int m) {
  if (m < 2) throw std::invalid_argument("build_heisenberg: m must be at least 2");
  Manifest man;
  man.coords = {"t"};
  for (const auto& x : names_x(2 * m)) man.coords.push_back(x);
  const std::size_t n = man.coords.size();
  man.theta = zeros_row(n);
  man.theta[0] = "1";
  for (int i = 1; i <= m; ++i) man.theta[std::size_t(2 * i)] = "x" + std::to_string(2 * i - 1);
  for (int i = 1; i <= 2 * m; ++i) {
    auto f = unit_field(n, std::size_t(i));
    if (i % 2 == 0) f[0] = "-x" + std::to_string(i - 1);
    man.frame.push_back(std::move(f));
  }
  man.gram.assign(2 * m, zeros_row(2 * m));
  for (int a = 0; a < 2 * m; ++a) man.gram[a][a] = "1";
  man.basepoint.assign(n, "0");
  man.note = "flat Heisenberg-type structure";
  return canonicalize(std::move(man));
}

Manifest build_perturbed_heisenberg(int m, std::uint64_t seed, int variant) {
  Manifest man = build_heisenberg(m);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(-3, 3);
  const int r = 2 * m;
  // Small t-independent polynomial with p(0) = 0.
  auto poly = [&] {
    std::string p = "0";
    for (int i = 1; i <= r; ++i) {
      const int c1 = coef(rng), c2 = coef(rng);
      if (c1) p += " + " + std::to_string(c1) + "/10*x" + std::to_string(i);
      if (c2) p += " + " + std::to_string(c2) + "/20*x" + std::to_string(i) + "^2";
    }
    return p;
  };
  std::vector<int> sign(r, 1);
  if (variant == 2)
    for (int a = r / 2; a < r; ++a) sign[a] = -1;
  for (int a = 0; a < r; ++a) man.gram[a][a] = std::to_string(sign[a]) + "*(1 + " + poly() + ")";
  if (variant == 1) {
    // Null pair on X_1, X_2 with a perturbed cross term.
    man.gram[0][0] = man.gram[1][1] = "0";
    const std::string p = "1 + " + poly();
    man.gram[0][1] = man.gram[1][0] = p;
  }
  man.note = "perturbed Heisenberg-type structure, seed " + std::to_string(seed) + ", variant " +
             std::to_string(variant);
  return canonicalize(std::move(man));
}

}  // namespace subhol
