#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "subhol/examples.hpp"
#include "subhol/holonomy.hpp"
#include "subhol/lorentz.hpp"
#include "subhol/numeric.hpp"

namespace subhol::cli {
namespace {

using json = nlohmann::ordered_json;

struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Globals {
  std::uint64_t seed = SamplingOptions{}.seed;
  double tol = SamplingOptions{}.rank_tol;
  double ode_tol = SamplingOptions{}.ode_tol;
  int budget = SamplingOptions{}.budget;
  std::string out;
  bool timing = false;

  SamplingOptions sampling() const {
    SamplingOptions o;
    o.seed = seed;
    o.rank_tol = tol;
    o.ode_tol = ode_tol;
    o.budget = budget;
    return o;
  }
};

constexpr double kClassifierTol = 1e-10;
// Holonomy output carries integration error; the classifier reads it at a looser cut.
constexpr double kNumericClassifierTol = 1e-8;
constexpr double kReebOdeTol = 1e-9;
constexpr double kReebTol = 1e-6;

std::string read_input(const std::string& path, std::istream& in) {
  std::ostringstream ss;
  if (path == "-") {
    ss << in.rdbuf();
  } else {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open " + path);
    ss << f.rdbuf();
  }
  return ss.str();
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

/// A manifest, or a report that embeds one (so `example1 | verify` works).
Manifest load_manifest(const std::string& path, std::istream& in) {
  json doc = parse_json(read_input(path, in));
  if (doc.is_object() && doc.contains("manifest")) doc = doc["manifest"];
  return parse_manifest(doc.dump());
}

double number(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return Rational(v.get<std::string>()).get_d();
    } catch (const std::invalid_argument&) {
    }
  }
  throw InputError("algebra file: expected a number or a rational string, got " + v.dump());
}

struct AlgebraInput {
  std::size_t k = 0;
  LieAlgebraSpan g;
};

AlgebraInput load_algebra(const std::string& path, std::istream& in) {
  json doc = parse_json(read_input(path, in));
  if (doc.is_object() && doc.contains("algebra")) doc = doc["algebra"];
  if (!doc.is_object() || !doc.contains("k") || !doc.contains("triples") || !doc["triples"].is_array())
    throw InputError("algebra file: expected {k, triples}");
  const long kk = doc["k"].get<long>();
  if (kk < 1) throw InputError("algebra file: k must be positive");
  const auto k = Eigen::Index(kk);
  std::vector<Matrix> mats;
  for (const auto& t : doc["triples"]) {
    SoTriple s{number(t.value("a", json(0))), Matrix::Zero(k, k), Vector::Zero(k)};
    if (t.contains("A")) {
      std::vector<double> flat;
      for (const auto& row : t["A"]) {
        if (row.is_array())
          for (const auto& v : row) flat.push_back(number(v));
        else
          flat.push_back(number(row));
      }
      if (flat.size() != std::size_t(k * k)) throw InputError("algebra file: A must have k*k entries");
      for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) s.A(i, j) = flat[std::size_t(i * k + j)];
      if ((s.A + s.A.transpose()).norm() > kClassifierTol) throw InputError("algebra file: A is not skew");
    }
    if (t.contains("X")) {
      if (t["X"].size() != std::size_t(k)) throw InputError("algebra file: X must have k entries");
      for (Eigen::Index i = 0; i < k; ++i) s.X(i) = number(t["X"][std::size_t(i)]);
    }
    mats.push_back(to_matrix(s));
  }
  AlgebraInput a{std::size_t(k), span_basis(mats, std::size_t(k) + 2, kClassifierTol)};
  if (!a.g.is_closed(kClassifierTol * 1e2)) throw InputError("algebra file: the triples do not span a Lie algebra");
  return a;
}

json triple_json(const Matrix& m, double tol) {
  const SoTriple t = to_triple(m, tol);
  json A = json::array();
  for (Eigen::Index i = 0; i < t.A.rows(); ++i)
    for (Eigen::Index j = 0; j < t.A.cols(); ++j) A.push_back(t.A(i, j));
  json X = json::array();
  for (Eigen::Index i = 0; i < t.X.size(); ++i) X.push_back(t.X(i));
  return {{"a", t.a}, {"A", A}, {"X", X}};
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

json vector_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

/// Nonzero entries of a function matrix as {row, col, value}.
json sparse_json(const FunctionMatrix& m, const std::vector<std::string>& names) {
  json out = json::array();
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j)
      if (!m[i][j].is_zero()) out.push_back({{"row", i}, {"col", j}, {"value", m[i][j].to_string(names)}});
  return out;
}

json span_json(const LieAlgebraSpan& s, double tol) {
  json basis = json::array();
  for (const auto& b : s.basis()) basis.push_back(matrix_json(b));
  return {{"tol", tol}, {"dim", s.dim()}, {"basis", basis}};
}

/// Everything derived from a manifest, built lazily in the order commands need.
struct Session {
  Manifest manifest;
  std::unique_ptr<ContactGeometry> geo;
  std::unique_ptr<NumericContact> nc;
  Vector x;

  explicit Session(Manifest m) : manifest(std::move(m)) {
    geo = std::make_unique<ContactGeometry>(to_structure(manifest));
    const auto& bp = geo->structure().basepoint;
    x = Vector(Eigen::Index(bp.size()));
    for (std::size_t i = 0; i < bp.size(); ++i) x(Eigen::Index(i)) = bp[i].get_d();
  }
  NumericContact& numeric() {
    if (!nc) nc = std::make_unique<NumericContact>(*geo);
    return *nc;
  }
  const std::vector<std::string>& names() const { return geo->structure().chart.coords; }
  Matrix gram() { return numeric().gram({x.data(), std::size_t(x.size())}); }
};

json k_contact_json(const Session& s) {
  const bool k = s.geo->is_K_contact();
  return {{"K_contact", k}, {"expected", s.manifest.expect_K_contact}, {"tol", 0}, {"exact", true}};
}

json lorentz_json(const LieAlgebraSpan& horizontal, const LieAlgebraSpan& adapted, const Matrix& gram,
                  std::size_t codimension, bool ideal) {
  json out = {{"tol", kNumericClassifierTol}};
  const auto p = stabilized_null_line(adapted, gram);
  if (!p) {
    out["null_line"] = nullptr;
    return out;
  }
  out["null_line"] = vector_json(*p);
  const Matrix w = witt_basis(*p, gram);
  const auto hw = to_witt_form(horizontal, w), aw = to_witt_form(adapted, w);
  out["orthogonal_part"] = {{"horizontal", orthogonal_part(hw).dim()}, {"adapted", orthogonal_part(aw).dim()}};
  const std::size_t k = std::size_t(gram.rows()) - 2;
  json triples = json::array();
  for (const auto& b : aw.basis()) triples.push_back(triple_json(b, 1e-6));
  out["algebra"] = {{"k", k}, {"triples", triples}};
  const auto d = recognize_type(aw, kNumericClassifierTol);
  out["type"] = d ? json(d->type) : json(nullptr);
  if (d && ideal && codimension == 1) {
    try {
      out["case"] = classify_codim1_ideal(aw, hw, kNumericClassifierTol).label;
    } catch (const std::exception& e) {
      out["case"] = nullptr;
      out["case_error"] = e.what();
    }
  } else {
    out["case"] = nullptr;
  }
  return out;
}

json algebra_result_json(const AlgebraResult& r, double tol) {
  json j = span_json(r.algebra, tol);
  j["generators"] = r.generators;
  j["discarded"] = r.discarded;
  j["stable"] = r.stable;
  j["dimension_trace"] = r.dimension_trace;
  return j;
}

// Commands. Each fills `rep` and returns its exit code.

int cmd_reeb(Session& s, json& rep) {
  const auto& names = s.names();
  json xi = json::array();
  for (const auto& c : s.geo->reeb().components) xi.push_back(c.to_string(names));
  rep["reeb"] = {{"tol", 0}, {"exact", true}, {"components", xi}};
  rep["dtheta"] = {{"tol", 0}, {"entries", sparse_json(s.geo->dtheta(), names)}};
  rep["K_contact"] = k_contact_json(s);
  return ok;
}

int cmd_connection(Session& s, json& rep) {
  const auto& names = s.names();
  const auto& conn = s.geo->horizontal_connection();
  json gam = json::array();
  for (std::size_t a = 0; a < conn.horizontal.size(); ++a)
    if (const auto e = sparse_json(conn.horizontal[a], names); !e.empty()) gam.push_back({{"direction", a}, {"entries", e}});
  rep["connection"] = {{"tol", 0}, {"exact", true}, {"christoffel", gam}};
  rep["tau"] = {{"tol", 0}, {"entries", sparse_json(s.geo->tau(), names)}};
  rep["K_contact"] = k_contact_json(s);
  return ok;
}

int cmd_curvature(Session& s, json& rep) {
  const auto& names = s.names();
  const auto& r = s.geo->schouten_curvature();
  json table = json::array();
  for (std::size_t a = 0; a < r.size(); ++a)
    for (std::size_t b = a + 1; b < r.size(); ++b)
      if (const auto e = sparse_json(r[a][b], names); !e.empty()) table.push_back({{"a", a}, {"b", b}, {"endomorphism", e}});
  rep["curvature"] = {{"tol", 0}, {"exact", true}, {"nonzero_pairs", table}};
  return ok;
}

int cmd_wagner(Session& s, json& rep) {
  const auto& names = s.names();
  const auto& omega = s.geo->dtheta();
  const auto& inv = s.geo->dtheta_inverse();
  ChartFunction pairing(s.geo->n());
  for (std::size_t i = 0; i < omega.size(); ++i)
    for (std::size_t j = 0; j < omega.size(); ++j) pairing += omega[i][j] * inv[i][j];
  rep["dtheta_inverse"] = {{"tol", 0}, {"entries", sparse_json(inv, names)}, {"pairing", pairing.to_string(names)}};
  rep["C"] = {{"tol", 0}, {"exact", true}, {"entries", sparse_json(s.geo->wagner_endomorphism(), names)}};
  rep["K_contact"] = k_contact_json(s);
  return ok;
}

int cmd_holonomy(Session& s, const Globals& g, const std::string& mode, json& rep) {
  const auto opt = g.sampling();
  auto& nc = s.numeric();
  AlgebraResult r;
  if (mode == "horizontal") {
    r = ambrose_singer_algebra(*s.geo, nc, s.x, HolonomyMode::horizontal, opt);
  } else if (mode == "adapted") {
    r = ambrose_singer_algebra(*s.geo, nc, s.x, HolonomyMode::adapted, opt);
  } else {
    const NumericConnection w(s.geo->extended_connection(s.geo->wagner_endomorphism()));
    r = holonomy_by_sampling(nc, w, s.x, opt);
  }
  rep["holonomy"] = algebra_result_json(r, opt.rank_tol);
  rep["holonomy"]["mode"] = mode;
  rep["holonomy"]["method"] = mode == "wagner" ? "loop sampling" : "Ambrose-Singer";
  return ok;
}

int cmd_verify(Session& s, const Globals& g, json& rep) {
  const auto opt = g.sampling();
  auto& nc = s.numeric();
  std::vector<std::string> failures;
  rep["K_contact"] = k_contact_json(s);
  if (s.geo->is_K_contact() != s.manifest.expect_K_contact)
    failures.push_back("K-contact verdict differs from the manifest flag");
  if (!s.geo->is_K_contact()) {
    rep["theorem"] = {{"skipped", "structure is not K-contact"}};
    rep["failures"] = failures;
    return failures.empty() ? ok : verification_failure;
  }

  const auto t = verify_codim_theorem(*s.geo, nc, s.x, opt);
  json th = {{"tol", opt.rank_tol},
             {"horizontal", span_json(t.horizontal_algebra, opt.rank_tol)},
             {"adapted", span_json(t.adapted_algebra, opt.rank_tol)},
             {"contained", t.contained},
             {"is_ideal", t.is_ideal},
             {"codim", t.codim},
             {"C_in_complement", t.C_in_complement},
             {"horizontal_stable", t.horizontal_stable},
             {"adapted_stable", t.adapted_stable},
             {"notes", t.notes}};
  th["classification"] = lorentz_json(t.horizontal_algebra, t.adapted_algebra, s.gram(), t.codim, t.is_ideal);
  rep["theorem"] = th;
  failures.insert(failures.end(), t.failures.begin(), t.failures.end());

  json reeb = json::array();
  for (double r : {0.1, 0.5, 1.0}) {
    const auto c = verify_reeb_transport(*s.geo, nc, s.x, r, kReebOdeTol, kReebTol);
    reeb.push_back({{"r", r}, {"defect", c.defect}, {"pass", c.pass}});
    if (!c.pass) failures.push_back("Reeb transport identity fails at r = " + std::to_string(r));
  }
  rep["reeb_transport"] = {{"tol", kReebTol}, {"ode_tol", kReebOdeTol}, {"checks", reeb}};

  const NumericConnection w(s.geo->extended_connection(s.geo->wagner_endomorphism()));
  const auto ws = holonomy_by_sampling(nc, w, s.x, opt);
  const bool same = ws.algebra.same_span(t.horizontal_algebra, opt.rank_tol);
  rep["wagner"] = {{"tol", opt.rank_tol}, {"dim", ws.algebra.dim()}, {"equals_horizontal", same}};
  if (!same) failures.push_back("Wagner holonomy differs from the horizontal holonomy");

  rep["failures"] = failures;
  return failures.empty() ? ok : verification_failure;
}

int cmd_classify(const AlgebraInput& a, json& rep) {
  rep["algebra"] = {{"tol", kClassifierTol}, {"k", a.k}, {"dim", a.g.dim()}};
  const auto d = recognize_type(a.g, kClassifierTol);
  if (!d) {
    rep["type"] = nullptr;
    return ok;
  }
  const auto h = span_basis(d->h, d->k, kClassifierTol);
  json t = {{"tol", kClassifierTol}, {"type", d->type}, {"k", d->k}, {"h_dim", h.dim()}};
  if (d->type == 3) t["phi"] = matrix_json(d->phi);
  if (d->type == 4) {
    t["l"] = d->l;
    t["split"] = matrix_json(d->split);
  }
  const auto dec = irreducible_decomposition(h, kClassifierTol);
  json blocks = json::array();
  for (const auto& b : dec.blocks) blocks.push_back({{"dim", b.basis.cols()}, {"h_dim", b.h.dim()}});
  t["decomposition"] = {{"k0", dec.k0()}, {"blocks", blocks}};
  rep["type"] = t;
  return ok;
}

int cmd_ideals(const AlgebraInput& a, json& rep) {
  const auto fam = codim1_ideals_oracle(a.g);
  rep["oracle"] = {{"tol", kClassifierTol}, {"quotient_dim", fam.quotient_dim}, {"parameters", fam.parameters}};
  json list = json::array();
  for (const auto& [lab, ideal] : codim1_ideal_representatives(a.g, kClassifierTol)) {
    json basis = json::array();
    for (const auto& b : ideal.basis()) basis.push_back(triple_json(b, 1e-8));
    json item = {{"label", lab.label}, {"dim", ideal.dim()}, {"triples", basis}};
    if (lab.fixed.size()) item["fixed"] = vector_json(lab.fixed);
    if (!lab.I1.empty()) item["I1_dim"] = lab.I1.size();
    list.push_back(item);
  }
  rep["ideals"] = {{"tol", kClassifierTol}, {"representatives", list}};
  return ok;
}

void emit(const json& rep, const Globals& g, std::ostream& out) {
  const std::string text = rep.dump(2) + "\n";
  if (g.out.empty() || g.out == "-") {
    out << text;
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw InputError("cannot write " + g.out);
  f << text;
}

}  // namespace

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Holonomy of contact sub-pseudo-Riemannian structures"};
  Globals g;
  app.add_option("--seed", g.seed, "random seed for sample curves and loops");
  app.add_option("--tol", g.tol, "rank tolerance for spans")->check(CLI::PositiveNumber);
  app.add_option("--ode-tol", g.ode_tol, "transport integration tolerance")->check(CLI::PositiveNumber);
  app.add_option("--budget", g.budget, "sample curves for Ambrose-Singer")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "write the report here instead of stdout");
  app.add_flag("--timing", g.timing, "include wall-clock timing (makes reports non-reproducible)");
  app.require_subcommand(1);

  std::string input = "-", mode = "horizontal";
  int s_param = 2;
  auto manifest_cmd = [&](const char* name, const char* help) {
    auto* c = app.add_subcommand(name, help);
    c->add_option("manifest", input, "manifest path, - for stdin");
    return c;
  };
  auto* reeb = manifest_cmd("reeb", "Reeb field and K-contact verdict");
  auto* conn = manifest_cmd("connection", "horizontal connection and tau");
  auto* curv = manifest_cmd("curvature", "nonzero curvature on frame pairs");
  auto* wag = manifest_cmd("wagner", "(dtheta)^-1 and the endomorphism C");
  auto* hol = manifest_cmd("holonomy", "holonomy algebra");
  hol->add_option("--mode", mode)->check(CLI::IsMember({"horizontal", "adapted", "wagner"}));
  auto* ver = manifest_cmd("verify", "theorem, Reeb transport and Wagner checks");
  auto* cls = app.add_subcommand("classify", "holonomy type of an algebra file");
  cls->add_option("algebra", input, "algebra file, - for stdin");
  auto* ids = app.add_subcommand("ideals", "codimension-one ideals of an algebra file");
  ids->add_option("algebra", input, "algebra file, - for stdin");
  auto* ex1 = app.add_subcommand("example1", "emit the pp-wave example manifest");
  ex1->add_option("--s", s_param)->default_val(2);
  auto* ex2 = app.add_subcommand("example2", "emit the ball example manifest");
  ex2->add_option("--s", s_param)->default_val(1);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : input_error;
  }

  json rep;
  rep["command"] = app.get_subcommands().front()->get_name();
  rep["seed"] = g.seed;
  const auto start = std::chrono::steady_clock::now();
  int code = ok;
  try {
    if (ex1->parsed() || ex2->parsed()) {
      const Manifest m = ex1->parsed() ? build_example1(s_param) : build_example2(s_param);
      const std::string text = emit_manifest(m);
      rep["manifest_hash"] = fnv1a_hex(text);
      rep["manifest"] = json::parse(text);
    } else if (cls->parsed() || ids->parsed()) {
      const auto a = load_algebra(input, in);
      code = cls->parsed() ? cmd_classify(a, rep) : cmd_ideals(a, rep);
    } else {
      Session s(load_manifest(input, in));
      rep["manifest_hash"] = fnv1a_hex(emit_manifest(s.manifest));
      rep["sampling"] = {{"rank_tol", g.tol}, {"ode_tol", g.ode_tol}, {"budget", g.budget}};
      if (reeb->parsed()) code = cmd_reeb(s, rep);
      if (conn->parsed()) code = cmd_connection(s, rep);
      if (curv->parsed()) code = cmd_curvature(s, rep);
      if (wag->parsed()) code = cmd_wagner(s, rep);
      if (hol->parsed()) code = cmd_holonomy(s, g, mode, rep);
      if (ver->parsed()) code = cmd_verify(s, g, rep);
    }
    if (code == verification_failure) rep["error"] = {{"kind", "verification"}, {"message", "a check failed"}};
  } catch (const std::invalid_argument& e) {
    // Malformed input and invalid geometry (ManifestError, StructureError, DescriptorError, ...).
    rep["error"] = {{"kind", "input"}, {"message", e.what()}};
    code = input_error;
  } catch (const std::domain_error& e) {
    rep["error"] = {{"kind", "input"}, {"message", e.what()}};
    code = input_error;
  } catch (const std::exception& e) {
    rep["error"] = {{"kind", "computation"}, {"message", e.what()}};
    code = verification_failure;
  }
  rep["exit_code"] = code;
  if (g.timing)
    rep["timing_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  try {
    emit(rep, g, out);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return input_error;
  }
  return code;
}

}  // namespace subhol::cli
