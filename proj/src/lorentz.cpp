#include "subhol/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace subhol {

namespace {

Matrix null_space(const Matrix& m, double tol) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0 || m.norm() <= kAbsoluteFloor) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double cut = std::max(tol * sv(0), kAbsoluteFloor);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cut) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

// Orthonormal columns spanning the range of m.
Matrix range(const Matrix& m, double tol) {
  if (m.cols() == 0 || m.norm() <= kAbsoluteFloor) return Matrix(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const Vector& sv = svd.singularValues();
  const double cut = std::max(tol * sv(0), kAbsoluteFloor);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cut) ++rank;
  return svd.matrixU().leftCols(rank);
}

std::size_t pairs(std::size_t k) { return k * (k - 1) / 2; }

Vector skew_coords(const Matrix& a) {
  const Eigen::Index k = a.rows();
  Vector v(static_cast<Eigen::Index>(pairs(std::size_t(k))));
  Eigen::Index n = 0;
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i + 1; j < k; ++j) v(n++) = a(i, j);
  return v;
}

Matrix skew_from(const Vector& v, Eigen::Index k) {
  Matrix a = Matrix::Zero(k, k);
  Eigen::Index n = 0;
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i + 1; j < k; ++j) {
      a(i, j) = v(n);
      a(j, i) = -v(n);
      ++n;
    }
  return a;
}

Matrix rotation(const Matrix& a) { return to_matrix({0, a, Vector::Zero(a.rows())}); }
Matrix translation(const Vector& x) { return to_matrix({0, Matrix::Zero(x.size(), x.size()), x}); }
Matrix scaling(Eigen::Index k) { return to_matrix({1, Matrix::Zero(k, k), Vector::Zero(k)}); }

std::vector<Matrix> translations(const Matrix& cols) {
  std::vector<Matrix> out;
  for (Eigen::Index j = 0; j < cols.cols(); ++j) out.push_back(translation(cols.col(j)));
  return out;
}

LieAlgebraSpan so_span(const std::vector<Matrix>& gens, std::size_t k, double tol) {
  return span_basis(gens, k, tol);
}

std::size_t center_dim(const LieAlgebraSpan& h, double tol) {
  const auto& b = h.basis();
  if (b.empty()) return 0;
  const Eigen::Index k = Eigen::Index(h.ambient_dim());
  Matrix m(k * k * Eigen::Index(b.size()), Eigen::Index(b.size()));
  for (std::size_t j = 0; j < b.size(); ++j)
    for (std::size_t i = 0; i < b.size(); ++i) {
      const Matrix c = bracket(b[j], b[i]);
      m.block(Eigen::Index(i) * k * k, Eigen::Index(j), k * k, 1) = Eigen::Map<const Vector>(c.data(), k * k);
    }
  return std::size_t(null_space(m, tol).cols());
}

LieAlgebraSpan derived_or_empty(const LieAlgebraSpan& h) {
  return h.empty() ? h : derived_algebra(h);
}

// Hyperplane of h orthogonal to `normal` (Frobenius), normal inside h.
LieAlgebraSpan hyperplane(const LieAlgebraSpan& h, const Matrix& normal) {
  const double nn = normal.squaredNorm();
  std::vector<Matrix> gens;
  for (const auto& b : h.basis()) gens.push_back(b - (b.cwiseProduct(normal).sum() / nn) * normal);
  return span_basis(gens, h.ambient_dim(), h.tol());
}

// Linear functional on span(h) with prescribed values on the given matrices,
// as a skew Phi inside span(h) (minimum norm).
Matrix fit_functional(const std::vector<Matrix>& as, const Vector& values, Eigen::Index k, double tol, bool& ok) {
  const Eigen::Index q = Eigen::Index(pairs(std::size_t(k)));
  Matrix c(Eigen::Index(as.size()), q);
  for (std::size_t i = 0; i < as.size(); ++i) c.row(Eigen::Index(i)) = skew_coords(as[i]).transpose();
  const Vector phi = c.completeOrthogonalDecomposition().solve(values);
  ok = (c * phi - values).norm() <= tol * std::max(1.0, values.norm()) * 10;
  return skew_from(phi, k);
}

double small_cut(double tol) { return 1e3 * tol; }

IdealCaseLabel labeled(std::string label) {
  IdealCaseLabel l;
  l.label = std::move(label);
  return l;
}

}  // namespace

Matrix to_matrix(const SoTriple& t) {
  const Eigen::Index k = t.A.rows();
  Matrix m = Matrix::Zero(k + 2, k + 2);
  m(0, 0) = t.a;
  m.block(0, 1, 1, k) = t.X.transpose();
  m.block(1, 1, k, k) = t.A;
  m.block(1, k + 1, k, 1) = -t.X;
  m(k + 1, k + 1) = -t.a;
  return m;
}

SoTriple to_triple(const Matrix& m, double tol) {
  const Eigen::Index n = m.rows();
  if (n < 3 || m.cols() != n) throw TripleFormError("to_triple: need a square matrix of size k + 2 >= 3");
  const Eigen::Index k = n - 2;
  SoTriple t{m(0, 0), m.block(1, 1, k, k), m.block(0, 1, 1, k).transpose()};
  const double scale = std::max(1.0, m.norm());
  if ((to_matrix(t) - m).norm() > tol * scale)
    throw TripleFormError("to_triple: matrix does not fix the null line in triple form");
  if ((t.A + t.A.transpose()).norm() > tol * scale) throw TripleFormError("to_triple: A block is not skew");
  t.A = 0.5 * (t.A - t.A.transpose());
  return t;
}

SoTriple triple_bracket(const SoTriple& s, const SoTriple& t) {
  if (s.A.rows() != t.A.rows()) throw DimensionError("triple_bracket: triples of different k");
  const Matrix m = bracket(to_matrix(s), to_matrix(t));
  return to_triple(m, 1e-9);
}

double apply_functional(const Matrix& phi, const Matrix& a) { return 0.5 * phi.cwiseProduct(a).sum(); }

Vector HolonomyTypeDescriptor::psi_of(const Matrix& a) const {
  Vector v = Vector::Zero(Eigen::Index(k));
  for (std::size_t j = 0; j < psi.size() && j < k; ++j) v(Eigen::Index(j)) = apply_functional(psi[j], a);
  return v;
}

std::vector<Matrix> type_generators(const HolonomyTypeDescriptor& d, double tol) {
  if (d.k == 0) throw DescriptorError("make_type: k must be positive");
  const Eigen::Index k = Eigen::Index(d.k);
  for (const auto& a : d.h) {
    if (a.rows() != k || a.cols() != k) throw DescriptorError("make_type: h generator has the wrong size");
    if ((a + a.transpose()).norm() > tol * std::max(1.0, a.norm())) throw DescriptorError("make_type: h generator is not skew");
  }
  const LieAlgebraSpan h = so_span(d.h, d.k, tol);
  if (!h.is_closed(tol)) throw DescriptorError("make_type: h is not bracket-closed");
  const LieAlgebraSpan hd = derived_or_empty(h);
  std::vector<Matrix> out;
  const Matrix id = Matrix::Identity(k, k);
  switch (d.type) {
    case 1:
      out.push_back(scaling(k));
      [[fallthrough]];
    case 2:
      for (const auto& a : d.h) out.push_back(rotation(a));
      for (auto& t : translations(id)) out.push_back(t);
      break;
    case 3: {
      if (d.phi.rows() != k || d.phi.cols() != k) throw DescriptorError("make_type: phi has the wrong size");
      double biggest = 0;
      for (const auto& a : h.basis()) biggest = std::max(biggest, std::abs(apply_functional(d.phi, a)));
      if (biggest <= tol) throw DescriptorError("make_type: phi vanishes on h");
      for (const auto& a : hd.basis())
        if (std::abs(apply_functional(d.phi, a)) > small_cut(tol))
          throw DescriptorError("make_type: phi does not vanish on the derived algebra of h");
      for (const auto& a : d.h) out.push_back(to_matrix({apply_functional(d.phi, a), a, Vector::Zero(k)}));
      for (auto& t : translations(id)) out.push_back(t);
      break;
    }
    case 4: {
      const Eigen::Index l = Eigen::Index(d.l);
      if (l < 1 || l >= k) throw DescriptorError("make_type: type 4 needs 1 <= l < k");
      if (d.split.rows() != k || d.split.cols() != k || (d.split.transpose() * d.split - id).norm() > tol * 10)
        throw DescriptorError("make_type: split must be an orthogonal k x k matrix");
      if (d.psi.size() != d.k) throw DescriptorError("make_type: psi needs one functional per coordinate");
      const Matrix outer = d.split.rightCols(k - l);
      Matrix images(k, Eigen::Index(h.dim()));
      for (std::size_t i = 0; i < h.dim(); ++i) {
        const Matrix& a = h.basis()[i];
        if ((a * outer).norm() > small_cut(tol)) throw DescriptorError("make_type: h does not lie in so(l)");
        const Vector p = d.psi_of(a);
        if ((p - outer * (outer.transpose() * p)).norm() > small_cut(tol))
          throw DescriptorError("make_type: psi must take values in the complement of R^l");
        images.col(Eigen::Index(i)) = p;
      }
      if (range(images, tol).cols() != k - l) throw DescriptorError("make_type: psi is not surjective");
      for (const auto& a : hd.basis())
        if (d.psi_of(a).norm() > small_cut(tol))
          throw DescriptorError("make_type: psi does not vanish on the derived algebra of h");
      if (center_dim(h, tol) < std::size_t(k - l)) throw DescriptorError("make_type: centre of h is smaller than k - l");
      for (const auto& a : d.h) out.push_back(to_matrix({0, a, d.psi_of(a)}));
      for (auto& t : translations(d.split.leftCols(l))) out.push_back(t);
      break;
    }
    default:
      throw DescriptorError("make_type: type must be 1, 2, 3 or 4");
  }
  return out;
}

LieAlgebraSpan make_type(const HolonomyTypeDescriptor& d, double tol) {
  const auto gens = type_generators(d, tol);
  LieAlgebraSpan g = span_basis(gens, d.k + 2, tol);
  if (!g.is_closed(small_cut(tol))) throw DescriptorError("make_type: generated span is not bracket-closed");
  return g;
}

std::optional<HolonomyTypeDescriptor> recognize_type(const LieAlgebraSpan& g, double tol) {
  if (g.ambient_dim() < 3 || g.empty()) return std::nullopt;
  const std::size_t k = g.ambient_dim() - 2;
  const Eigen::Index K = Eigen::Index(k), q = Eigen::Index(pairs(k)), d = Eigen::Index(g.dim());
  std::vector<SoTriple> ts;
  try {
    for (const auto& m : g.basis()) ts.push_back(to_triple(m, small_cut(tol)));
  } catch (const TripleFormError&) {
    return std::nullopt;
  }
  Matrix c(1 + q + K, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto& t = ts[std::size_t(i)];
    c(0, i) = t.a;
    c.block(1, i, q, 1) = skew_coords(t.A);
    c.block(1 + q, i, K, 1) = t.X;
  }
  const Matrix top = c.topRows(1 + q);
  const Matrix z = null_space(top, tol);
  const Matrix w = range(c.bottomRows(K) * z, tol);
  const Eigen::Index l = w.cols();
  const Matrix hcoords = range(c.middleRows(1, q), tol);
  const Eigen::Index dimh = hcoords.cols();
  const Eigen::Index p = range(top, tol).cols();
  const bool has_a = c.row(0).norm() > small_cut(tol);

  HolonomyTypeDescriptor desc;
  desc.k = k;
  for (Eigen::Index i = 0; i < dimh; ++i) desc.h.push_back(skew_from(hcoords.col(i), K));
  const LieAlgebraSpan h = so_span(desc.h, k, tol);
  const LieAlgebraSpan hd = derived_or_empty(h);
  std::vector<Matrix> as;
  for (const auto& t : ts) as.push_back(t.A);

  if (l == K) {
    if (!has_a) {
      desc.type = 2;
    } else if (p == dimh + 1) {
      desc.type = 1;
    } else {
      desc.type = 3;
      bool ok = false;
      desc.phi = fit_functional(as, c.row(0).transpose(), K, small_cut(tol), ok);
      if (!ok) return std::nullopt;
    }
  } else {
    if (has_a || l == 0) return std::nullopt;
    desc.type = 4;
    desc.l = std::size_t(l);
    const Matrix outer = null_space(w.transpose(), tol);
    desc.split.resize(K, K);
    desc.split << w, outer;
    const Matrix proj = outer * outer.transpose();
    desc.psi.assign(k, Matrix::Zero(K, K));
    for (Eigen::Index j = 0; j < K; ++j) {
      Vector values(d);
      for (Eigen::Index i = 0; i < d; ++i) values(i) = proj.row(j).dot(ts[std::size_t(i)].X);
      bool ok = false;
      desc.psi[std::size_t(j)] = fit_functional(as, values, K, small_cut(tol), ok);
      if (!ok) return std::nullopt;
    }
  }
  (void)hd;
  try {
    const LieAlgebraSpan rebuilt = make_type(desc, tol);
    if (!rebuilt.same_span(g, small_cut(tol))) return std::nullopt;
  } catch (const DescriptorError&) {
    return std::nullopt;
  }
  return desc;
}

Decomposition irreducible_decomposition(const LieAlgebraSpan& h, double tol, std::uint64_t seed) {
  const Eigen::Index k = Eigen::Index(h.ambient_dim());
  const auto& b = h.basis();
  Decomposition out;
  {
    Matrix stacked(k * Eigen::Index(b.size()), k);
    for (std::size_t i = 0; i < b.size(); ++i) stacked.block(Eigen::Index(i) * k, 0, k, k) = b[i];
    out.kernel = b.empty() ? Matrix(Matrix::Identity(k, k)) : null_space(stacked, tol);
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;

  auto restricted = [&](const Matrix& basis) {
    std::vector<Matrix> r;
    for (const auto& a : b) r.push_back(basis.transpose() * a * basis);
    return r;
  };
  auto invariant = [&](const Matrix& basis) {
    for (const auto& a : b)
      if ((a * basis - basis * (basis.transpose() * a * basis)).norm() > small_cut(tol) * std::max(1.0, a.norm()))
        return false;
    return true;
  };

  std::vector<Matrix> pending;
  if (out.kernel.cols() < k) pending.push_back(null_space(out.kernel.transpose(), tol));
  while (!pending.empty()) {
    const Matrix basis = pending.back();
    pending.pop_back();
    const Eigen::Index kk = basis.cols();
    const auto rs = restricted(basis);
    // Symmetric commutant of the restriction.
    std::vector<Matrix> sym;
    for (Eigen::Index i = 0; i < kk; ++i)
      for (Eigen::Index j = i; j < kk; ++j) {
        Matrix e = Matrix::Zero(kk, kk);
        e(i, j) = 1;
        e(j, i) = 1;
        sym.push_back(e);
      }
    Matrix eqs(kk * kk * Eigen::Index(rs.size()), Eigen::Index(sym.size()));
    for (std::size_t s = 0; s < sym.size(); ++s)
      for (std::size_t i = 0; i < rs.size(); ++i) {
        const Matrix cm = bracket(sym[s], rs[i]);
        eqs.block(Eigen::Index(i) * kk * kk, Eigen::Index(s), kk * kk, 1) = Eigen::Map<const Vector>(cm.data(), kk * kk);
      }
    const Matrix comm = null_space(eqs, tol);
    if (comm.cols() <= 1) {
      out.blocks.push_back({basis, span_basis(rs, std::size_t(kk), h.tol())});
      continue;
    }
    bool split = false;
    double worst_gap = 0;
    for (int attempt = 0; attempt < 16 && !split; ++attempt) {
      Matrix s = Matrix::Zero(kk, kk);
      for (Eigen::Index c = 0; c < comm.cols(); ++c) {
        const double w = nd(rng);
        for (std::size_t t = 0; t < sym.size(); ++t) s += w * comm(Eigen::Index(t), c) * sym[t];
      }
      s /= s.norm();
      Eigen::SelfAdjointEigenSolver<Matrix> es(s);
      const Vector& ev = es.eigenvalues();
      std::vector<Eigen::Index> cuts{0};
      double min_gap = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 1; i < kk; ++i) {
        const double gap = ev(i) - ev(i - 1);
        if (gap > 1e-6) {
          cuts.push_back(i);
          min_gap = std::min(min_gap, gap);
        }
      }
      cuts.push_back(kk);
      if (cuts.size() <= 2) continue;
      worst_gap = std::max(worst_gap, min_gap);
      std::vector<Matrix> parts;
      bool ok = true;
      for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const Matrix part = basis * es.eigenvectors().middleCols(cuts[c], cuts[c + 1] - cuts[c]);
        if (!invariant(part)) {
          ok = false;
          break;
        }
        parts.push_back(part);
      }
      if (!ok || min_gap < 1e-4) continue;
      for (auto& part : parts) pending.push_back(std::move(part));
      split = true;
    }
    if (!split)
      throw DecompositionError("irreducible_decomposition: invariant blocks not separable (largest eigenvalue gap " +
                               std::to_string(worst_gap) + ")");
  }
  std::sort(out.blocks.begin(), out.blocks.end(),
            [](const IrreducibleBlock& x, const IrreducibleBlock& y) { return x.basis.cols() < y.basis.cols(); });
  return out;
}

namespace {

struct Context {
  HolonomyTypeDescriptor d;
  LieAlgebraSpan h, hd;
  std::vector<Matrix> quotient;  // complement of h' in h
  Eigen::Index k;
  double tol;
  std::size_t n;

  LieAlgebraSpan span(const std::vector<Matrix>& gens) const { return span_basis(gens, n, tol); }
  std::vector<Matrix> graph(const LieAlgebraSpan& sub) const {
    std::vector<Matrix> out;
    for (const auto& a : sub.basis()) {
      switch (d.type) {
        case 3:
          out.push_back(to_matrix({apply_functional(d.phi, a), a, Vector::Zero(k)}));
          break;
        case 4:
          out.push_back(to_matrix({0, a, d.psi_of(a)}));
          break;
        default:
          out.push_back(rotation(a));
      }
    }
    return out;
  }
  // Translations that g contains.
  Matrix translation_space() const {
    return d.type == 4 ? Matrix(d.split.leftCols(Eigen::Index(d.l))) : Matrix(Matrix::Identity(k, k));
  }
  // Common kernel of h inside the translation space.
  Matrix fixed_vectors() const {
    const Matrix t = translation_space();
    if (h.empty()) return t;
    Matrix stacked(k * Eigen::Index(h.dim()), t.cols());
    for (std::size_t i = 0; i < h.dim(); ++i) stacked.block(Eigen::Index(i) * k, 0, k, t.cols()) = h.basis()[i] * t;
    const Matrix nk = null_space(stacked, tol);
    return t * nk;
  }
};

Context context_of(const LieAlgebraSpan& g, double tol) {
  auto d = recognize_type(g, tol);
  if (!d) throw IdealPreconditionError("codimension-one ideals: algebra type not recognized");
  Context c;
  c.d = *d;
  c.k = Eigen::Index(d->k);
  c.tol = tol;
  c.n = g.ambient_dim();
  c.h = so_span(d->h, d->k, tol);
  c.hd = derived_or_empty(c.h);
  c.quotient = complement_in(c.hd, c.h);
  return c;
}

// Translations of `space` orthogonal to the unit vector e.
Matrix without(const Matrix& space, const Vector& e, double tol) {
  const Matrix coeff = null_space((space.transpose() * e).transpose(), tol);
  return space * coeff;
}

std::vector<Matrix> concat(std::vector<Matrix> a, const std::vector<Matrix>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

LieAlgebraSpan a_parts(const LieAlgebraSpan& s, std::size_t k, double tol) {
  std::vector<Matrix> out;
  for (const auto& m : s.basis()) out.push_back(to_triple(m, small_cut(tol)).A);
  return span_basis(out, k, tol);
}

void require_same(const LieAlgebraSpan& ideal, const LieAlgebraSpan& expected, const std::string& label, double tol) {
  if (!ideal.same_span(expected, small_cut(tol)))
    throw ClassificationError("classify_codim1_ideal: ideal does not have the form of case " + label);
}

void require_codim1_ideal_of_h(const Context& c, const LieAlgebraSpan& i1, const std::string& label) {
  bool ok = false;
  try {
    ok = is_ideal(i1, c.h) && codim(i1, c.h) == 1;
  } catch (const ContainmentError&) {
  }
  if (!ok) throw ClassificationError("classify_codim1_ideal: I_1 is not a codimension-one ideal of h (case " + label + ")");
}

}  // namespace

IdealCaseLabel classify_codim1_ideal(const LieAlgebraSpan& g, const LieAlgebraSpan& ideal, double tol) {
  const Context c = context_of(g, tol);
  bool ok = false;
  try {
    ok = is_ideal(ideal, g) && codim(ideal, g) == 1;
  } catch (const ContainmentError&) {
    throw IdealPreconditionError("classify_codim1_ideal: I is not contained in g");
  }
  if (!ok) throw IdealPreconditionError("classify_codim1_ideal: I is not an ideal of codimension one");

  IdealCaseLabel lab;
  lab.h_basis = c.h.basis();
  const Eigen::Index k = c.k;
  const double cut = small_cut(tol);
  const auto all_translations = translations(Matrix::Identity(k, k));
  auto contains_all = [&](const std::vector<Matrix>& ms) {
    for (const auto& m : ms)
      if (!ideal.contains(m, cut)) return false;
    return true;
  };

  if (c.d.type == 1 || c.d.type == 3) {
    double amax = 0;
    for (const auto& m : ideal.basis()) amax = std::max(amax, std::abs(m(0, 0)));
    const std::string base = c.d.type == 1 ? "1." : "3.";
    if (amax <= cut) {
      if (c.d.type == 1) {
        lab.label = "1.1";
        require_same(ideal, c.span(concat(c.graph(c.h), all_translations)), lab.label, tol);
      } else {
        lab.label = "3.1";
        Matrix kernel_normal = c.d.phi;
        const LieAlgebraSpan ker = hyperplane(c.h, c.h.project(kernel_normal));
        require_same(ideal, c.span(concat(c.graph(ker), all_translations)), lab.label, tol);
        lab.I1 = ker.basis();
      }
      return lab;
    }
    if (!contains_all(all_translations))
      throw ClassificationError("classify_codim1_ideal: I projects onto R but misses translations");
    if (c.d.type == 1 && ideal.contains(scaling(k), cut)) {
      lab.label = "1.2";
      const LieAlgebraSpan i1 = a_parts(intersect(ideal, c.span(c.graph(c.h))), std::size_t(k), tol);
      require_codim1_ideal_of_h(c, i1, lab.label);
      lab.I1 = i1.basis();
      return lab;
    }
    if (c.d.type == 1) {
      lab.label = "1.3";
      std::vector<Matrix> gens = c.graph(c.h);
      gens.push_back(scaling(k));
      const LieAlgebraSpan graph = intersect(ideal, c.span(gens));
      std::vector<Matrix> as;
      Vector values(Eigen::Index(graph.dim()));
      for (std::size_t i = 0; i < graph.dim(); ++i) {
        const auto t = to_triple(graph.basis()[i], cut);
        as.push_back(t.A);
        values(Eigen::Index(i)) = t.a;
      }
      bool fit = false;
      lab.phi = fit_functional(as, values, k, cut, fit);
      if (!fit || graph.dim() != c.h.dim()) throw ClassificationError("classify_codim1_ideal: I is not a graph over h");
      HolonomyTypeDescriptor t3 = c.d;
      t3.type = 3;
      t3.phi = lab.phi;
      try {
        require_same(ideal, make_type(t3, tol), lab.label, tol);
      } catch (const DescriptorError& e) {
        throw ClassificationError(std::string("classify_codim1_ideal: case 1.3 data invalid: ") + e.what());
      }
      return lab;
    }
    lab.label = "3.2";
    const LieAlgebraSpan i1 = a_parts(intersect(ideal, c.span(c.graph(c.h))), std::size_t(k), tol);
    require_codim1_ideal_of_h(c, i1, lab.label);
    double biggest = 0;
    for (const auto& a : i1.basis()) biggest = std::max(biggest, std::abs(apply_functional(c.d.phi, a)));
    if (biggest <= cut) throw ClassificationError("classify_codim1_ideal: phi vanishes on I_1 (case 3.2)");
    lab.I1 = i1.basis();
    lab.phi = c.d.phi;
    return lab;
  }

  // Types 2 and 4: I is the orthogonal complement of alpha inside g.
  const auto normals = complement_in(ideal, g);
  const SoTriple alpha = to_triple(normals.at(0), cut);
  const Matrix tspace = c.translation_space();
  const Vector y = tspace * (tspace.transpose() * alpha.X);
  for (const auto& a : c.h.basis())
    if ((a * y).norm() > cut)
      throw ClassificationError("classify_codim1_ideal: normal has a component on an irreducible block");
  const bool no_a = alpha.A.norm() <= cut, no_x = y.norm() <= cut;
  const std::string base = c.d.type == 2 ? "2." : "4.";
  // <(0,A,X), alpha>_F = <A, alpha_A>_F + 2 X.alpha_X
  auto level = [&](const Matrix& a) {
    const Vector x = c.d.type == 4 ? c.d.psi_of(a) : Vector(Vector::Zero(k));
    return a.cwiseProduct(alpha.A).sum() + 2 * x.dot(alpha.X);
  };
  const std::vector<Matrix> graph_h = c.graph(c.h);

  if (no_a && no_x) throw ClassificationError("classify_codim1_ideal: degenerate normal");
  if (no_a) {
    lab.label = base + "1";
    lab.fixed = y.normalized();
    require_same(ideal, c.span(concat(graph_h, translations(without(tspace, lab.fixed, tol)))), lab.label, tol);
    return lab;
  }
  if (no_x) {
    lab.label = base + "2";
    Vector f(Eigen::Index(c.h.dim()));
    for (std::size_t i = 0; i < c.h.dim(); ++i) f(Eigen::Index(i)) = level(c.h.basis()[i]);
    Matrix normal = Matrix::Zero(k, k);
    for (std::size_t i = 0; i < c.h.dim(); ++i) normal += f(Eigen::Index(i)) * c.h.basis()[i];
    const LieAlgebraSpan i1 = hyperplane(c.h, normal);
    require_codim1_ideal_of_h(c, i1, lab.label);
    require_same(ideal, c.span(concat(c.graph(i1), translations(tspace))), lab.label, tol);
    lab.I1 = i1.basis();
    return lab;
  }
  lab.label = base + "3";
  lab.fixed = y.normalized();
  std::vector<Matrix> gens = translations(without(tspace, lab.fixed, tol));
  for (const auto& a : c.h.basis()) {
    const Vector base_x = c.d.type == 4 ? c.d.psi_of(a) : Vector(Vector::Zero(k));
    const Vector x = base_x - (level(a) / (2 * y.norm())) * lab.fixed;
    lab.psi.push_back(x);
    gens.push_back(to_matrix({0, a, x}));
  }
  require_same(ideal, c.span(gens), lab.label, tol);
  return lab;
}

std::vector<std::pair<IdealCaseLabel, LieAlgebraSpan>> codim1_ideal_representatives(const LieAlgebraSpan& g,
                                                                                     double tol) {
  const Context c = context_of(g, tol);
  const Eigen::Index k = c.k;
  std::vector<std::pair<IdealCaseLabel, LieAlgebraSpan>> out;
  auto add = [&](IdealCaseLabel lab, const std::vector<Matrix>& gens) {
    LieAlgebraSpan ideal = c.span(gens);
    bool ok = false;
    try {
      ok = is_ideal(ideal, g) && codim(ideal, g) == 1;
    } catch (const ContainmentError&) {
    }
    if (!ok) throw std::logic_error("codim1_ideal_representatives: case " + lab.label + " representative is not an ideal");
    lab.h_basis = c.h.basis();
    out.emplace_back(std::move(lab), std::move(ideal));
  };
  const auto all_translations = translations(c.translation_space());
  const Matrix fixed = c.fixed_vectors();
  const bool has_quotient = !c.quotient.empty();
  // Codimension-one ideal of h leaving out the first quotient direction.
  const LieAlgebraSpan i1 = has_quotient ? hyperplane(c.h, c.quotient[0]) : c.h;
  Matrix dual;  // functional equal to 1 on quotient[0] and 0 on i1
  if (has_quotient) dual = 2 * c.quotient[0] / c.quotient[0].squaredNorm();
  const std::string t = std::to_string(c.d.type) + ".";

  switch (c.d.type) {
    case 1: {
      add(labeled("1.1"), concat(c.graph(c.h), all_translations));
      if (has_quotient) {
        auto gens = concat(c.graph(i1), all_translations);
        gens.push_back(scaling(k));
        IdealCaseLabel l2 = labeled("1.2");
        l2.I1 = i1.basis();
        add(l2, gens);
        std::vector<Matrix> g3 = all_translations;
        for (const auto& a : c.h.basis()) g3.push_back(to_matrix({apply_functional(dual, a), a, Vector::Zero(k)}));
        IdealCaseLabel l3 = labeled("1.3");
        l3.phi = dual;
        add(l3, g3);
      }
      break;
    }
    case 3: {
      const LieAlgebraSpan ker = hyperplane(c.h, c.h.project(c.d.phi));
      IdealCaseLabel l1 = labeled("3.1");
      l1.I1 = ker.basis();
      add(l1, concat(c.graph(ker), all_translations));
      if (c.quotient.size() >= 2) {
        // Normal in the quotient orthogonal to the direction where phi lives.
        Vector f(Eigen::Index(c.quotient.size()));
        for (std::size_t i = 0; i < c.quotient.size(); ++i) f(Eigen::Index(i)) = apply_functional(c.d.phi, c.quotient[i]);
        const Matrix perp = null_space(f.transpose(), tol);
        Matrix normal = Matrix::Zero(k, k);
        for (std::size_t i = 0; i < c.quotient.size(); ++i) normal += perp(Eigen::Index(i), 0) * c.quotient[i];
        const LieAlgebraSpan j1 = hyperplane(c.h, normal);
        IdealCaseLabel l2 = labeled("3.2");
        l2.I1 = j1.basis();
        l2.phi = c.d.phi;
        add(l2, concat(c.graph(j1), all_translations));
      }
      break;
    }
    case 2:
    case 4: {
      const Matrix tspace = c.translation_space();
      if (fixed.cols() > 0) {
        IdealCaseLabel l1 = labeled(t + "1");
        l1.fixed = fixed.col(0);
        add(l1, concat(c.graph(c.h), translations(without(tspace, l1.fixed, tol))));
      }
      if (has_quotient) {
        IdealCaseLabel l2 = labeled(t + "2");
        l2.I1 = i1.basis();
        add(l2, concat(c.graph(i1), all_translations));
      }
      if (has_quotient && fixed.cols() > 0) {
        IdealCaseLabel l3 = labeled(t + "3");
        l3.fixed = fixed.col(0);
        std::vector<Matrix> gens = translations(without(tspace, l3.fixed, tol));
        for (const auto& a : c.h.basis()) {
          const Vector base_x = c.d.type == 4 ? c.d.psi_of(a) : Vector(Vector::Zero(k));
          const Vector x = base_x + apply_functional(dual, a) * l3.fixed;
          l3.psi.push_back(x);
          gens.push_back(to_matrix({0, a, x}));
        }
        add(l3, gens);
      }
      break;
    }
  }
  return out;
}

}  // namespace subhol
