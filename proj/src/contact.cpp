#include "subhol/contact.hpp"

#include <omp.h>

#include <string>

namespace subhol {

namespace {

FunctionMatrix zeros(std::size_t rows, std::size_t cols, std::size_t nvars) {
  return FunctionMatrix(rows, std::vector<ChartFunction>(cols, ChartFunction(nvars)));
}

ChartFunction dot(const std::vector<ChartFunction>& a, const FunctionMatrix& g, std::size_t col) {
  ChartFunction s(g.empty() ? 0 : g[0][0].nvars());
  for (std::size_t f = 0; f < a.size(); ++f)
    if (!a[f].is_zero() && !g[f][col].is_zero()) s += a[f] * g[f][col];
  return s;
}

// Frame matrix of dtheta and its inverse; throws when dtheta|D degenerates.
FunctionMatrix frame_dtheta(const ContactStructure& s) {
  const auto& fr = s.metric.frame;
  FunctionMatrix w = zeros(fr.size(), fr.size(), s.n());
  for (std::size_t a = 0; a < fr.size(); ++a)
    for (std::size_t b = a + 1; b < fr.size(); ++b) {
      w[a][b] = exterior_derivative(s.theta, fr[a], fr[b]);
      w[b][a] = -w[a][b];
    }
  return w;
}

FunctionMatrix checked_inverse(const FunctionMatrix& w, const char* what) {
  try {
    return inverse(w);
  } catch (const SingularMatrixError&) {
    throw NotContactError(std::string(what) + ": dtheta restricted to D is degenerate");
  }
}

void validate(const ContactStructure& s) {
  const std::size_t n = s.n();
  if (n < 5 || n % 2 == 0) throw StructureError("contact structure: chart dimension must be odd and at least 5");
  if (s.theta.dim() != n) throw StructureError("contact structure: theta has wrong number of components");
  if (s.rank() != n - 1) throw StructureError("contact structure: frame must have n-1 fields");
  if (s.basepoint.size() != n) throw StructureError("contact structure: basepoint has wrong dimension");
  if (s.metric.gram.size() != s.rank()) throw StructureError("contact structure: gram has wrong size");
  for (std::size_t a = 0; a < s.rank(); ++a) {
    if (s.metric.frame[a].dim() != n) throw StructureError("contact structure: frame field of wrong dimension");
    if (s.metric.gram[a].size() != s.rank()) throw StructureError("contact structure: gram has wrong size");
    if (!s.theta(s.metric.frame[a]).is_zero())
      throw StructureError("contact structure: frame field " + std::to_string(a + 1) + " is not in ker theta");
    for (std::size_t b = 0; b < s.rank(); ++b)
      if (!(s.metric.gram[a][b] == s.metric.gram[b][a])) throw StructureError("contact structure: gram not symmetric");
  }
}

}  // namespace

VectorField reeb_field(const ContactStructure& s) {
  const std::size_t n = s.n();
  const auto& fr = s.metric.frame;
  // Z = d_j / theta_j, preferring a coordinate where theta_j is constant.
  std::size_t j = n;
  for (std::size_t i = 0; i < n && j == n; ++i)
    if (s.theta.components[i].constant_value() && !s.theta.components[i].is_zero()) j = i;
  for (std::size_t i = 0; i < n && j == n; ++i)
    if (!s.theta.components[i].is_zero()) j = i;
  if (j == n) throw NotContactError("reeb_field: theta vanishes identically");
  VectorField z = VectorField::zero(n);
  z.components[j] = ChartFunction::constant(n, 1) / s.theta.components[j];

  const FunctionMatrix w = frame_dtheta(s);
  const FunctionMatrix winv = checked_inverse(w, "reeb_field");
  // Solve sum_a c^a w_ab = dtheta(Z, E_b), i.e. c = w^{-T} r.
  std::vector<ChartFunction> r(fr.size(), ChartFunction(n));
  for (std::size_t b = 0; b < fr.size(); ++b) r[b] = exterior_derivative(s.theta, z, fr[b]);
  VectorField xi = z;
  for (std::size_t a = 0; a < fr.size(); ++a) {
    ChartFunction c(n);
    for (std::size_t b = 0; b < fr.size(); ++b)
      if (!winv[b][a].is_zero() && !r[b].is_zero()) c += winv[b][a] * r[b];
    if (!c.is_zero()) xi -= c * fr[a];
  }

  if (!(s.theta(xi) == ChartFunction::constant(n, 1))) throw NotContactError("reeb_field: theta(xi) != 1");
  for (std::size_t i = 0; i < n; ++i)
    if (!exterior_derivative(s.theta, xi, VectorField::coordinate(n, i)).is_zero())
      throw NotContactError("reeb_field: dtheta(xi, .) does not vanish");
  return xi;
}

ContactGeometry::ContactGeometry(ContactStructure s) : s_(std::move(s)) {
  validate(s_);
  const std::size_t n = s_.n(), r = s_.rank();
  const auto& fr = s_.metric.frame;

  omega_ = frame_dtheta(s_);
  // Contact condition at the basepoint, exactly.
  {
    const Rational det = determinant(omega_).evaluate(std::span<const Rational>(s_.basepoint));
    if (det == 0) throw NotContactError("contact structure: dtheta|D is degenerate at the basepoint");
  }
  const FunctionMatrix omega_inv = checked_inverse(omega_, "contact structure");

  try {
    gram_inv_ = inverse(s_.metric.gram);
  } catch (const SingularMatrixError&) {
    throw MetricDegeneracyError("contact structure: gram is not invertible");
  }
  if (determinant(s_.metric.gram).evaluate(std::span<const Rational>(s_.basepoint)) == 0)
    throw MetricDegeneracyError("contact structure: gram is degenerate at the basepoint");

  xi_ = reeb_field(s_);
  std::vector<VectorField> basis = fr;
  basis.push_back(xi_);
  dec_ = BasisDecomposer(basis);

  beta_.assign(r, std::vector<std::vector<ChartFunction>>(r));
  rho_.assign(r, std::vector<ChartFunction>(r, ChartFunction(n)));
  for (std::size_t a = 0; a < r; ++a) {
    beta_[a][a].assign(r, ChartFunction(n));
    for (std::size_t b = a + 1; b < r; ++b) {
      const Projection p = project(vf_bracket(fr[a], fr[b]));
      beta_[a][b] = p.horizontal;
      rho_[a][b] = p.vertical;
      beta_[b][a].clear();
      for (const auto& f : p.horizontal) beta_[b][a].push_back(-f);
      rho_[b][a] = -p.vertical;
    }
  }
  kappa_.resize(r);
  kappa_v_.assign(r, ChartFunction(n));
  for (std::size_t b = 0; b < r; ++b) {
    const Projection p = project(vf_bracket(xi_, fr[b]));
    kappa_[b] = p.horizontal;
    kappa_v_[b] = p.vertical;
  }

  // Lowered Christoffel functions L_abc = 2 g(nabla_a E_b, E_c).
  const auto& g = s_.metric.gram;
  conn_.horizontal.assign(r, zeros(r, r, n));
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b) {
      std::vector<ChartFunction> low(r, ChartFunction(n));
      for (std::size_t c = 0; c < r; ++c) {
        ChartFunction l = apply(fr[a], g[b][c]) + apply(fr[b], g[c][a]) - apply(fr[c], g[a][b]);
        l += dot(beta_[a][b], g, c);
        l -= dot(beta_[b][c], g, a);
        l -= dot(beta_[a][c], g, b);
        low[c] = std::move(l);
      }
      for (std::size_t d = 0; d < r; ++d) {
        ChartFunction v(n);
        for (std::size_t c = 0; c < r; ++c)
          if (!gram_inv_[d][c].is_zero() && !low[c].is_zero()) v += gram_inv_[d][c] * low[c];
        conn_.horizontal[a][d][b] = v * Rational(1, 2);
      }
    }

  const FunctionMatrix lie = lie_derivative_metric(xi_, s_.metric, dec_);
  tau_ = multiply(gram_inv_, lie);
  for (auto& row : tau_)
    for (auto& f : row) f = f * Rational(1, 2);

  dtheta_inv_ = omega_inv;
  for (auto& row : dtheta_inv_)
    for (auto& f : row) f = f * Rational(2);
}

Projection ContactGeometry::project(const VectorField& z) const {
  std::vector<ChartFunction> c = dec_.coefficients(z);
  Projection p;
  p.vertical = s_.theta(z);
  c.pop_back();
  p.horizontal = std::move(c);
  return p;
}

CurvatureTable schouten_curvature(const ContactGeometry& geo, Execution ex) {
  const std::size_t r = geo.rank(), n = geo.n();
  const auto& fr = geo.frame();
  const auto& gam = geo.horizontal_connection().horizontal;
  CurvatureTable out(r, std::vector<FunctionMatrix>(r, zeros(r, r, n)));

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = a + 1; b < r; ++b) pairs.emplace_back(a, b);

  auto entry = [&](std::size_t a, std::size_t b) {
    FunctionMatrix m = zeros(r, r, n);
    const auto& beta = geo.bracket_horizontal(a, b);
    const auto& rho = geo.bracket_vertical(a, b);
    for (std::size_t e = 0; e < r; ++e)
      for (std::size_t c = 0; c < r; ++c) {
        ChartFunction v = apply(fr[a], gam[b][e][c]) - apply(fr[b], gam[a][e][c]);
        for (std::size_t d = 0; d < r; ++d) {
          if (!gam[b][d][c].is_zero() && !gam[a][e][d].is_zero()) v += gam[b][d][c] * gam[a][e][d];
          if (!gam[a][d][c].is_zero() && !gam[b][e][d].is_zero()) v -= gam[a][d][c] * gam[b][e][d];
        }
        for (std::size_t f = 0; f < r; ++f)
          if (!beta[f].is_zero() && !gam[f][e][c].is_zero()) v -= beta[f] * gam[f][e][c];
        const auto& kap = geo.reeb_bracket_horizontal(c);
        if (!rho.is_zero() && !kap[e].is_zero()) v -= rho * kap[e];
        m[e][c] = std::move(v);
      }
    return m;
  };

  std::vector<FunctionMatrix> vals(pairs.size());
  if (ex == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(pairs.size()); ++i)
      vals[std::size_t(i)] = entry(pairs[std::size_t(i)].first, pairs[std::size_t(i)].second);
  } else {
    for (std::size_t i = 0; i < pairs.size(); ++i) vals[i] = entry(pairs[i].first, pairs[i].second);
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [a, b] = pairs[i];
    out[b][a] = vals[i];
    for (auto& row : out[b][a])
      for (auto& f : row) f = -f;
    out[a][b] = std::move(vals[i]);
  }
  return out;
}

const CurvatureTable& ContactGeometry::schouten_curvature() const {
  std::call_once(curv_once_, [this] { curvature_ = subhol::schouten_curvature(*this, Execution::parallel); });
  return curvature_;
}

FunctionMatrix curvature_of_bivector(const CurvatureTable& r, const FunctionMatrix& b) {
  const std::size_t k = r.size();
  const std::size_t n = k ? r[0][0][0][0].nvars() : 0;
  FunctionMatrix out = zeros(k, k, n);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t c = 0; c < k; ++c) {
      if (a == c || b[a][c].is_zero()) continue;
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
          if (!r[a][c][i][j].is_zero()) out[i][j] += b[a][c] * r[a][c][i][j];
    }
  return out;
}

const FunctionMatrix& ContactGeometry::wagner_endomorphism() const {
  std::call_once(wagner_once_, [this] {
    wagner_ = curvature_of_bivector(schouten_curvature(), dtheta_inv_);
    const Rational f(1, 4 * long(m()));
    for (auto& row : wagner_)
      for (auto& v : row) v = v * f;
  });
  return wagner_;
}

Connection ContactGeometry::extended_connection(const FunctionMatrix& n_endo) const {
  const std::size_t r = rank();
  if (n_endo.size() != r) throw std::invalid_argument("extended_connection: endomorphism has wrong size");
  Connection c = conn_;
  c.extended = true;
  c.reeb = zeros(r, r, n());
  for (std::size_t d = 0; d < r; ++d)
    for (std::size_t b = 0; b < r; ++b) c.reeb[d][b] = kappa_[b][d] + n_endo[d][b];
  return c;
}

std::vector<FunctionMatrix> reeb_curvature(const ContactGeometry& geo, const Connection& conn) {
  if (!conn.extended) throw std::invalid_argument("reeb_curvature: connection has no Reeb direction");
  const std::size_t r = geo.rank(), n = geo.n();
  const auto& fr = geo.frame();
  const auto& xi = geo.reeb();
  const auto& gam = conn.horizontal;
  const auto& gx = conn.reeb;
  std::vector<FunctionMatrix> out;
  for (std::size_t a = 0; a < r; ++a) {
    const auto& kap = geo.reeb_bracket_horizontal(a);
    const auto& rho = geo.reeb_bracket_vertical(a);
    FunctionMatrix m = zeros(r, r, n);
    for (std::size_t e = 0; e < r; ++e)
      for (std::size_t c = 0; c < r; ++c) {
        ChartFunction v = apply(xi, gam[a][e][c]) - apply(fr[a], gx[e][c]);
        for (std::size_t d = 0; d < r; ++d) {
          v += gam[a][d][c] * gx[e][d];
          v -= gx[d][c] * gam[a][e][d];
        }
        for (std::size_t f = 0; f < r; ++f)
          if (!kap[f].is_zero()) v -= kap[f] * gam[f][e][c];
        if (!rho.is_zero()) v -= rho * gx[e][c];
        m[e][c] = std::move(v);
      }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace subhol
