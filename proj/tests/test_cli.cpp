#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "lorentz_corpus.hpp"
#include "subhol/examples.hpp"

using nlohmann::json;
using namespace subhol;

namespace {

struct Run {
  int code;
  json report;
  std::string text;
};

Run run(std::vector<std::string> args, const std::string& stdin_text = {}) {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  const int code = cli::run(args, in, out, err);
  Run r{code, json(), out.str()};
  if (!r.text.empty() && r.text.front() == '{') r.report = json::parse(r.text);
  return r;
}

std::string algebra_file(const HolonomyTypeDescriptor& d) {
  json triples = json::array();
  for (const auto& m : type_generators(d)) {
    const SoTriple t = to_triple(m);
    json A = json::array(), X = json::array();
    for (Eigen::Index i = 0; i < t.A.rows(); ++i)
      for (Eigen::Index j = 0; j < t.A.cols(); ++j) A.push_back(t.A(i, j));
    for (Eigen::Index i = 0; i < t.X.size(); ++i) X.push_back(t.X(i));
    triples.push_back({{"a", t.a}, {"A", A}, {"X", X}});
  }
  return json{{"k", d.k}, {"triples", triples}}.dump();
}

}  // namespace

TEST_CASE("fnv1a") {
  CHECK(cli::fnv1a_hex("") == "cbf29ce484222325");
  CHECK(cli::fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(cli::fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("manifest round trip") {
  for (const Manifest& m : {build_example1(2), build_example1(3), build_example2(1), build_example2(2),
                            build_heisenberg(2), build_perturbed_heisenberg(2, 51, 1)}) {
    const std::string once = emit_manifest(m);
    CHECK(emit_manifest(parse_manifest(once)) == once);
  }
  // Through the command line too.
  const auto r = run({"example1", "--s", "2"});
  REQUIRE(r.code == cli::ok);
  const std::string text = r.report["manifest"].dump();
  CHECK(emit_manifest(parse_manifest(emit_manifest(parse_manifest(text)))) == emit_manifest(parse_manifest(text)));
  CHECK(r.report["manifest_hash"] == cli::fnv1a_hex(emit_manifest(build_example1(2))));
}

TEST_CASE("example1 piped into verify") {
  const auto ex = run({"example1", "--s", "2"});
  REQUIRE(ex.code == cli::ok);
  const auto v = run({"verify", "-"}, ex.text);
  CHECK(v.code == cli::ok);
  const auto& th = v.report["theorem"];
  CHECK(th["contained"] == true);
  CHECK(th["is_ideal"] == true);
  CHECK(th["codim"].get<int>() <= 1);
  CHECK(th["adapted"]["dim"] == 4);
  CHECK(th["classification"]["type"] == 2);
  for (const auto& c : v.report["reeb_transport"]["checks"]) CHECK(c["pass"] == true);
  CHECK(v.report["wagner"]["equals_horizontal"] == true);
  CHECK(v.report["failures"].empty());

  // The algebra block of the report feeds the classifier.
  json wrapped = {{"algebra", th["classification"]["algebra"]}};
  const auto c = run({"classify", "-"}, wrapped.dump());
  CHECK(c.code == cli::ok);
  CHECK(c.report["type"]["type"] == 2);
  CHECK(c.report["type"]["h_dim"] == 0);
}

TEST_CASE("verify on Example 2") {
  for (const char* s : {"1", "2"}) {
    const auto ex = run({"example2", "--s", s});
    REQUIRE(ex.code == cli::ok);
    const auto v = run({"verify", "-"}, ex.text);
    CHECK(v.code == cli::ok);
    CHECK(v.report["failures"].empty());
  }
}

TEST_CASE("flat holonomy is zero") {
  const std::string m = emit_manifest(build_heisenberg(2));
  for (const char* mode : {"horizontal", "adapted", "wagner"}) {
    const auto r = run({"holonomy", "-", "--mode", mode}, m);
    CHECK(r.code == cli::ok);
    CHECK(r.report["holonomy"]["dim"] == 0);
    CHECK(r.report["holonomy"]["tol"] == 1e-6);
  }
}

TEST_CASE("classify and ideals on g^{2,so(3)}") {
  const std::string file = algebra_file(corpus::simple(2, 3, corpus::so_block(3, 0, 3)));
  const auto c = run({"classify", "-"}, file);
  CHECK(c.code == cli::ok);
  CHECK(c.report["type"]["type"] == 2);
  CHECK(c.report["type"]["h_dim"] == 3);
  const auto i = run({"ideals", "-"}, file);
  CHECK(i.code == cli::ok);
  CHECK(i.report["ideals"]["representatives"].empty());
  CHECK(i.report["oracle"]["quotient_dim"] == 0);

  const auto t1 = run({"ideals", "-"}, algebra_file(corpus::simple(1, 3, {})));
  REQUIRE(t1.report["ideals"]["representatives"].size() == 1);
  CHECK(t1.report["ideals"]["representatives"][0]["label"] == "1.1");
}

TEST_CASE("rational strings in algebra files") {
  const std::string file = R"({"k": 2, "triples": [{"a": "1/2"}, {"X": ["1", 0]}, {"X": [0, "2/3"]}]})";
  const auto c = run({"classify", "-"}, file);
  CHECK(c.code == cli::ok);
  CHECK(c.report["type"]["type"] == 1);
}

TEST_CASE("other manifest commands") {
  const std::string m = emit_manifest(build_example1(2));
  const auto r = run({"reeb", "-"}, m);
  CHECK(r.code == cli::ok);
  CHECK(r.report["reeb"]["components"] == json({"1", "0", "0", "0", "0", "0", "0"}));
  CHECK(r.report["K_contact"]["K_contact"] == true);
  CHECK(run({"connection", "-"}, m).code == cli::ok);
  const auto cv = run({"curvature", "-"}, m);
  CHECK(cv.code == cli::ok);
  // R(X_i, U) for i = 1..4 and nothing else.
  CHECK(cv.report["curvature"]["nonzero_pairs"].size() == 4);
  const auto w = run({"wagner", "-"}, m);
  CHECK(w.code == cli::ok);
  CHECK(w.report["dtheta_inverse"]["pairing"] == "-12");
}

TEST_CASE("input errors exit 2") {
  CHECK(run({"verify", "-"}, "{not json").code == cli::input_error);
  CHECK(run({"verify", "/nonexistent/manifest.json"}).code == cli::input_error);
  CHECK(run({"verify", "-"}, R"({"n": 2})").code == cli::input_error);
  CHECK(run({"example1", "--s", "1"}).code == cli::input_error);
  CHECK(run({"holonomy", "-", "--mode", "sideways"}).code == cli::input_error);
  CHECK(run({}).code == cli::input_error);
  // so(2) plus a single translation is not closed.
  const auto r = run({"classify", "-"}, R"({"k": 2, "triples": [{"A": [[0, -1], [1, 0]]}, {"X": [1, 0]}]})");
  CHECK(r.code == cli::input_error);
  CHECK(r.report["error"]["kind"] == "input");
  CHECK(run({"classify", "-"}, R"({"k": 2, "triples": [{"A": [1, 0, 0, 0]}]})").code == cli::input_error);
}

TEST_CASE("non-K-contact manifests") {
  Manifest m = build_heisenberg(2);
  m.gram[0][0] = "(1 + t)^2";
  m.expect_K_contact = false;
  const auto skip = run({"verify", "-"}, emit_manifest(m));
  CHECK(skip.code == cli::ok);
  CHECK(skip.report["theorem"].contains("skipped"));
  m.expect_K_contact = true;
  const auto bad = run({"verify", "-"}, emit_manifest(m));
  CHECK(bad.code == cli::verification_failure);
  CHECK(bad.report["error"]["kind"] == "verification");
}

TEST_CASE("reports are deterministic and --out writes them") {
  const std::string m = emit_manifest(build_example1(2));
  const auto a = run({"--seed", "7", "holonomy", "-", "--mode", "wagner"}, m);
  const auto b = run({"--seed", "7", "holonomy", "-", "--mode", "wagner"}, m);
  CHECK(a.code == cli::ok);
  CHECK(a.text == b.text);
  CHECK(a.report["seed"] == 7);

  const auto path = std::filesystem::temp_directory_path() / "subhol_cli_report.json";
  const auto c = run({"--out", path.string(), "--seed", "7", "holonomy", "-", "--mode", "wagner"}, m);
  CHECK(c.code == cli::ok);
  CHECK(c.text.empty());
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == a.text);
  std::filesystem::remove(path);
}
