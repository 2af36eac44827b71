// One line per acceptance criterion; exit status is the number of failures.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "lorentz_corpus.hpp"
#include "subhol/examples.hpp"
#include "subhol/holonomy.hpp"
#include "subhol/lorentz.hpp"

using namespace subhol;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Setup {
  std::unique_ptr<ContactGeometry> geo;
  std::unique_ptr<NumericContact> nc;
  Vector x;

  explicit Setup(const Manifest& m)
      : geo(std::make_unique<ContactGeometry>(to_structure(m))),
        nc(std::make_unique<NumericContact>(*geo)),
        x(Vector::Zero(Eigen::Index(geo->n()))) {}
  Matrix gram() const { return nc->gram({x.data(), std::size_t(x.size())}); }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

ChartFunction pairing(const FunctionMatrix& omega, const FunctionMatrix& b) {
  ChartFunction s(omega[0][0].nvars());
  for (std::size_t i = 0; i < omega.size(); ++i)
    for (std::size_t j = 0; j < omega.size(); ++j) s += omega[i][j] * b[i][j];
  return s;
}

// (X^Y)Z = g(X,Z)Y - g(Y,Z)X, exactly.
FunctionMatrix wedge_endo(const FunctionMatrix& gram, std::size_t x, std::size_t y, std::size_t nvars) {
  const std::size_t r = gram.size();
  FunctionMatrix m(r, std::vector<ChartFunction>(r, ChartFunction(nvars)));
  for (std::size_t c = 0; c < r; ++c) {
    m[y][c] += gram[x][c];
    m[x][c] -= gram[y][c];
  }
  return m;
}

bool equal(const FunctionMatrix& a, const FunctionMatrix& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j)
      if (!(a[i][j] == b[i][j])) return false;
  return true;
}

struct Classified {
  std::optional<int> type;
  std::string label = "none";
  std::size_t h_orth = 0, a_orth = 0;
};

Classified classify(const HolonomyReport& rep, const Matrix& gram, double tol) {
  Classified c;
  const auto p = stabilized_null_line(rep.adapted_algebra, gram);
  if (!p) return c;
  const Matrix w = witt_basis(*p, gram);
  const auto hw = to_witt_form(rep.horizontal_algebra, w), aw = to_witt_form(rep.adapted_algebra, w);
  c.h_orth = orthogonal_part(hw).dim();
  c.a_orth = orthogonal_part(aw).dim();
  const auto d = recognize_type(aw, tol);
  if (d) c.type = d->type;
  if (d && rep.is_ideal && rep.codim == 1) {
    try {
      c.label = classify_codim1_ideal(aw, hw, tol).label;
    } catch (const std::exception& e) {
      c.label = std::string("error: ") + e.what();
    }
  }
  return c;
}

Outcome criterion1() {
  const auto start = std::chrono::steady_clock::now();
  Setup s(build_example1(2));
  SamplingOptions opt;
  opt.rank_tol = 1e-6;
  const auto rep = verify_codim_theorem(*s.geo, *s.nc, s.x, opt);
  const auto c = classify(rep, s.gram(), 1e-8);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool pass = rep.horizontal_algebra.dim() == 3 && rep.adapted_algebra.dim() == 4 && rep.is_ideal &&
                    rep.codim == 1 && c.label == "2.1" && secs < 120;
  return {pass, "horizontal " + std::to_string(rep.horizontal_algebra.dim()) + " (want 3), adapted " +
                    std::to_string(rep.adapted_algebra.dim()) + " (want 4), ideal " + (rep.is_ideal ? "yes" : "no") +
                    ", codim " + std::to_string(rep.codim) + " (want 1), label " + c.label + " (want 2.1), " +
                    fmt(secs) + " s"};
}

Outcome criterion2() {
  const auto geo = std::make_unique<ContactGeometry>(to_structure(build_example1(2)));
  const auto& r = geo->schouten_curvature();
  const std::size_t rank = geo->rank(), n = geo->n(), u = rank - 1;
  const FunctionMatrix zero(rank, std::vector<ChartFunction>(rank, ChartFunction(n)));
  std::size_t bad = 0;
  for (std::size_t a = 0; a < rank; ++a)
    for (std::size_t b = 0; b < rank; ++b) {
      FunctionMatrix want = zero;
      if (b == u && a >= 1 && a < u) want = wedge_endo(geo->gram(), a, 0, n);
      if (a == u && b >= 1 && b < u) want = wedge_endo(geo->gram(), 0, b, n);
      if (!equal(r[a][b], want)) ++bad;
    }
  return {bad == 0, std::to_string(bad) + " of " + std::to_string(rank * rank) + " frame pairs differ (exact)"};
}

Outcome criterion3() {
  std::ostringstream d;
  bool pass = true;
  for (const auto& [name, m] : {std::pair{"ex1 s=2", build_example1(2)}, std::pair{"ex2 s=1", build_example2(1)},
                                std::pair{"ex2 s=2", build_example2(2)}}) {
    const auto geo = std::make_unique<ContactGeometry>(to_structure(m));
    const bool ok = pairing(geo->dtheta(), geo->dtheta_inverse()) ==
                    ChartFunction::constant(geo->n(), -4 * Rational(long(geo->m())));
    pass &= ok;
    d << name << " dtheta(dtheta^-1)=-4m " << (ok ? "ok" : "no") << "; ";
  }
  for (int s = 1; s <= 2; ++s) {
    const auto geo = std::make_unique<ContactGeometry>(to_structure(build_example2(s)));
    const std::size_t r = geo->rank(), n = geo->n();
    FunctionMatrix bj = multiply(example2_complex_structure(s), geo->gram_inverse());
    for (auto& row : bj)
      for (auto& f : row) f = f * Rational(-1);
    FunctionMatrix dth0 = geo->dtheta();
    dth0[0][r - 1] = dth0[r - 1][0] = ChartFunction(n);
    const bool ok = pairing(dth0, bj) == ChartFunction::constant(n, 2 * s);
    pass &= ok;
    d << "dtheta0(J)=2s at s=" << s << " " << (ok ? "ok" : "no") << "; ";
  }
  return {pass, d.str()};
}

Outcome criterion4() {
  Setup s(build_example1(2));
  double worst = 0;
  for (double r : {0.1, 0.5, 1.0}) worst = std::max(worst, verify_reeb_transport(*s.geo, *s.nc, s.x, r, 1e-9, 1e-6).defect);
  return {worst <= 1e-6, "max defect " + fmt(worst) + " (tol 1e-6, ode tol 1e-9)"};
}

Outcome criterion5() {
  Setup s(build_example1(2));
  SamplingOptions opt;
  opt.rank_tol = 1e-6;
  const auto h = ambrose_singer_algebra(*s.geo, *s.nc, s.x, HolonomyMode::horizontal, opt);
  const NumericConnection w(s.geo->extended_connection(s.geo->wagner_endomorphism()));
  const auto ws = holonomy_by_sampling(*s.nc, w, s.x, opt);
  const bool pass = ws.algebra.contains(h.algebra, 1e-6) && h.algebra.contains(ws.algebra, 1e-6);
  return {pass, "Wagner sampling dim " + std::to_string(ws.algebra.dim()) + ", horizontal Ambrose-Singer dim " +
                    std::to_string(h.algebra.dim())};
}

Outcome criterion6() {
  std::vector<std::pair<std::string, Manifest>> corpus = {{"ex1 s=2", build_example1(2)},
                                                          {"ex2 s=1", build_example2(1)},
                                                          {"ex2 s=2", build_example2(2)},
                                                          {"flat", build_heisenberg(2)}};
  for (std::uint64_t seed : {51, 52, 53})
    corpus.push_back({"perturbed " + std::to_string(seed), build_perturbed_heisenberg(2, seed, int(seed % 3))});
  std::ostringstream d;
  bool pass = true;
  for (const auto& [name, m] : corpus) {
    Setup s(m);
    const auto rep = verify_codim_theorem(*s.geo, *s.nc, s.x, SamplingOptions{});
    const bool ok = rep.contained && rep.is_ideal && rep.codim <= 1 && (rep.codim == 0 || rep.C_in_complement);
    pass &= ok;
    d << name << ": " << rep.horizontal_algebra.dim() << "/" << rep.adapted_algebra.dim() << (ok ? "" : " FAIL") << "; ";
  }
  return {pass, d.str()};
}

Outcome criterion7() {
  std::size_t algebras = 0, reps = 0, classified = 0, errors = 0, bad_reps = 0;
  std::set<int> types;
  bool so3_empty = false;
  for (const auto& entry : corpus::entries()) {
    ++algebras;
    types.insert(entry.desc.type);
    const auto g = make_type(entry.desc);
    const auto gd = derived_algebra(g);
    const auto list = codim1_ideal_representatives(g);
    if (entry.name == "g2 h=so(3) k=3") so3_empty = list.empty();
    for (const auto& [lab, ideal] : list) {
      ++reps;
      if (!is_ideal(ideal, g) || codim(ideal, g) != 1 || !ideal.contains(gd, 1e-9)) ++bad_reps;
    }
    const auto fam = codim1_ideals_oracle(g);
    std::vector<LieAlgebraSpan> ideals = fam.representatives;
    std::mt19937_64 rng(std::hash<std::string>{}(entry.name));
    std::normal_distribution<double> nd;
    for (int i = 0; i < 4 && fam.quotient_dim > 0; ++i) {
      Vector w(Eigen::Index(fam.quotient_dim));
      for (Eigen::Index t = 0; t < w.size(); ++t) w(t) = nd(rng);
      ideals.push_back(fam.member(w, g));
    }
    for (const auto& ideal : ideals) {
      try {
        classify_codim1_ideal(g, ideal);
        ++classified;
      } catch (const std::exception&) {
        ++errors;
      }
    }
  }
  const bool pass = algebras >= 12 && types.size() == 4 && bad_reps == 0 && errors == 0 && so3_empty;
  return {pass, std::to_string(algebras) + " algebras, " + std::to_string(types.size()) + " types, " +
                    std::to_string(reps) + " representatives (" + std::to_string(bad_reps) + " not ideals), " +
                    std::to_string(classified) + " oracle ideals labelled, " + std::to_string(errors) +
                    " classification errors, g^{2,so(3)} list " + (so3_empty ? "empty" : "NOT empty")};
}

Outcome criterion8() {
  const double tol = 1e-9;
  std::size_t count = 0, iso_bad = 0, comp_bad = 0;
  double worst_comp = 0;
  for (const auto& m : {build_example1(2), build_example2(1), build_perturbed_heisenberg(2, 42, 1)}) {
    Setup s(m);
    for (bool extended : {false, true}) {
      const NumericConnection conn(extended ? s.geo->extended_connection(s.geo->tau()) : s.geo->horizontal_connection());
      std::vector<Path> paths;
      for (std::uint64_t i = 0; i < 17; ++i)
        paths.push_back(random_frame_path(*s.nc, s.x, 0.15, extended, stream_seed(101, i)));
      for (const auto& res : transport_batch(*s.nc, conn, paths, tol, Execution::parallel)) {
        if (!res) {
          ++iso_bad;
          continue;
        }
        const Matrix g0 = s.gram(), g1 = s.nc->gram({res->end.data(), std::size_t(res->end.size())});
        if ((res->matrix.transpose() * g1 * res->matrix - g0).norm() > 10 * res->est_error) ++iso_bad;
        ++count;
      }
      for (std::uint64_t i = 0; i < 4; ++i) {
        const Path g1 = random_frame_path(*s.nc, s.x, 0.2, extended, stream_seed(102, i));
        const auto t1 = parallel_transport(*s.nc, conn, g1, tol);
        const Path g2 = random_frame_path(*s.nc, t1.end, 0.2, extended, stream_seed(103, i));
        const auto t2 = parallel_transport(*s.nc, conn, g2, tol);
        Path both = g1;
        both.segments.insert(both.segments.end(), g2.segments.begin(), g2.segments.end());
        const auto t12 = parallel_transport(*s.nc, conn, both, tol);
        const auto back = parallel_transport(*s.nc, conn, reverse(*s.nc, g1), tol);
        const double e1 = (t12.matrix - t2.matrix * t1.matrix).norm();
        const double e2 = (back.matrix * t1.matrix - Matrix::Identity(t1.matrix.rows(), t1.matrix.cols())).norm();
        worst_comp = std::max({worst_comp, e1, e2});
        if (e1 > 2 * tol || e2 > 2 * tol) ++comp_bad;
      }
    }
  }
  std::mt19937_64 rng(104);
  std::normal_distribution<double> nd;
  double worst_exp = 0;
  for (int i = 0; i < 20; ++i) {
    Matrix a(5, 5);
    for (Eigen::Index t = 0; t < a.size(); ++t) a(t) = 0.5 * nd(rng);
    const double s = std::abs(nd(rng)), t = std::abs(nd(rng));
    const Matrix lhs = matrix_exp(a, s + t);
    worst_exp = std::max(worst_exp, (lhs - matrix_exp(a, s) * matrix_exp(a, t)).norm() / std::max(1.0, lhs.norm()));
  }
  const bool pass = count >= 100 && iso_bad == 0 && comp_bad == 0 && worst_exp <= 1e-10;
  return {pass, std::to_string(count) + " transports, " + std::to_string(iso_bad) + " isometry violations, " +
                    "composition/inversion worst " + fmt(worst_comp) + " (tol " + fmt(2 * tol) + "), exp additivity " +
                    fmt(worst_exp) + " (tol 1e-10)"};
}

Outcome criterion9() {
  SamplingOptions opt;
  opt.rank_tol = 1e-5;
  Setup s1(build_example2(1));
  const auto r1 = verify_codim_theorem(*s1.geo, *s1.nc, s1.x, opt);
  Setup s2(build_example2(2));
  const auto r2 = verify_codim_theorem(*s2.geo, *s2.nc, s2.x, opt);
  const auto c2 = classify(r2, s2.gram(), 1e-8);
  const bool pass = r1.horizontal_algebra.dim() == 2 && r1.adapted_algebra.dim() == 3 && r1.codim == 1 &&
                    c2.h_orth == 3 && c2.a_orth == 4;
  return {pass, "s=1: horizontal " + std::to_string(r1.horizontal_algebra.dim()) + " (want 2), adapted " +
                    std::to_string(r1.adapted_algebra.dim()) + " (want 3), codim " + std::to_string(r1.codim) +
                    " (want 1); s=2: orthogonal parts " + std::to_string(c2.h_orth) + " vs " +
                    std::to_string(c2.a_orth) + " (want 3 vs 4)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"Example 1 regression", criterion1},    {"Example 1 curvature table", criterion2},
      {"pairing anchors", criterion3},         {"Reeb-orbit transport", criterion4},
      {"Wagner cross-check", criterion5},      {"codimension theorem suite", criterion6},
      {"classifier soundness and completeness", criterion7},
      {"numerical hygiene", criterion8},       {"Example 2", criterion9}};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] %zu. %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures;
}
