// Exercises the shared-library C surface end to end.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <fstream>
#include <string>

#include <json.hpp>

#include "abelgen.h"

namespace {

struct Str {
  char* p = nullptr;
  ~Str() { ag_string_free(p); }
  std::string s() const { return p ? std::string(p) : std::string(); }
};

const double kPeriodsI[4] = {0.0, 1.0, 1.0, 0.0};       // (i, 1)
const double kPeriods2I[4] = {0.0, 2.0, 1.0, 0.0};      // (2i, 1)
const double kHermOne[2] = {1.0, 0.0};
const double kHermTwo[2] = {2.0, 0.0};
const double kHermHalf[2] = {0.5, 0.0};

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(ag_version()) == "0.1.0");
  CHECK(std::string(ag_status_name(AG_OK)) == "ok");
  CHECK(std::string(ag_status_name(AG_ERR_NOT_AMPLE)) == "not_ample");
}

TEST_CASE("torus and bundle lifecycle") {
  ag_torus* t = nullptr;
  REQUIRE(ag_torus_create(1, kPeriodsI, &t) == AG_OK);
  CHECK(ag_torus_dim(t) == 1);

  double v[2] = {2.5, 3.0};
  double out[2];
  REQUIRE(ag_torus_reduce(t, v, out) == AG_OK);
  CHECK(out[0] == doctest::Approx(0.5));
  CHECK(out[1] == doctest::Approx(0.0));

  int64_t count = 0;
  REQUIRE(ag_torus_torsion_count(t, 2, &count) == AG_OK);
  CHECK(count == 4);

  ag_bundle* l = nullptr;
  REQUIRE(ag_bundle_create(t, kHermTwo, nullptr, &l) == AG_OK);
  int ample = 0;
  REQUIRE(ag_bundle_is_ample(l, &ample) == AG_OK);
  CHECK(ample == 1);
  int64_t h0 = 0;
  REQUIRE(ag_bundle_h0(l, &h0) == AG_OK);
  CHECK(h0 == 2);
  int64_t divisors[1] = {0};
  REQUIRE(ag_bundle_type(l, divisors) == AG_OK);
  CHECK(divisors[0] == 2);

  ag_bundle* sq = nullptr;
  REQUIRE(ag_bundle_tensor(l, l, &sq) == AG_OK);
  REQUIRE(ag_bundle_h0(sq, &h0) == AG_OK);
  CHECK(h0 == 4);

  double vals[4];
  double point[2] = {0.2, 0.3};
  REQUIRE(ag_bundle_eval_sections(l, point, 1e-12, 0, vals) == AG_OK);

  Str info;
  REQUIRE(ag_bundle_info_json(l, &info.p) == AG_OK);
  auto j = nlohmann::json::parse(info.s());
  CHECK(j["h0"] == 2);

  ag_bundle_free(sq);
  ag_bundle_free(l);
  ag_torus_free(t);
}

TEST_CASE("error reporting carries codes and messages") {
  ag_torus* t = nullptr;
  double bad[4] = {2.0, 0.0, 1.0, 0.0};  // dependent columns
  CHECK(ag_torus_create(1, bad, &t) == AG_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(ag_last_error()) > 0);

  REQUIRE(ag_torus_create(1, kPeriodsI, &t) == AG_OK);
  ag_bundle* flat = nullptr;
  double zero[2] = {0.0, 0.0};
  REQUIRE(ag_bundle_create(t, zero, nullptr, &flat) == AG_OK);
  int64_t h0 = 0;
  CHECK(ag_bundle_h0(flat, &h0) == AG_ERR_NOT_AMPLE);
  ag_bundle_free(flat);
  ag_torus_free(t);

  CHECK(ag_torus_create(1, nullptr, &t) == AG_ERR_INVALID_ARGUMENT);
}

TEST_CASE("normal form of an alternating form") {
  int64_t e[16] = {0, 0, 1, 0,
                   0, 0, 0, 2,
                   -1, 0, 0, 0,
                   0, -2, 0, 0};
  int64_t divisors[2] = {0, 0};
  REQUIRE(ag_alt_form_normal_form(4, e, divisors, nullptr) == AG_OK);
  CHECK(divisors[0] == 1);
  CHECK(divisors[1] == 2);

  int64_t zero[4] = {0, 0, 0, 0};
  CHECK(ag_alt_form_normal_form(2, zero, divisors, nullptr) == AG_ERR_DEGENERATE_FORM);
}

TEST_CASE("isogeny, pushforward, and global generation through the C API") {
  ag_torus* cover = nullptr;
  ag_torus* base = nullptr;
  REQUIRE(ag_torus_create(1, kPeriods2I, &cover) == AG_OK);
  REQUIRE(ag_torus_create(1, kPeriodsI, &base) == AG_OK);

  double alpha[2] = {1.0, 0.0};
  int64_t m[4] = {2, 0, 0, 1};
  ag_isogeny* p = nullptr;
  REQUIRE(ag_isogeny_create(cover, base, alpha, m, &p) == AG_OK);
  CHECK(ag_isogeny_degree(p) == 2);
  Str kernel;
  REQUIRE(ag_isogeny_kernel_json(p, &kernel.p) == AG_OK);
  auto kj = nlohmann::json::parse(kernel.s());
  CHECK(kj["degree"] == 2);
  CHECK(kj["points_lattice_coords"].size() == 2);

  ag_bundle* up = nullptr;
  REQUIRE(ag_bundle_create(cover, kHermOne, nullptr, &up) == AG_OK);
  ag_sh_bundle* e = nullptr;
  REQUIRE(ag_sh_from_pushforward(p, up, &e) == AG_OK);
  CHECK(ag_sh_rank(e) == 2);
  int64_t h0 = 0;
  REQUIRE(ag_sh_h0(e, &h0) == AG_OK);
  CHECK(h0 == 2);

  ag_gg_options opt{};
  opt.grid = 8;
  opt.refine = 1;
  opt.tail_bound = 1e-12;
  opt.threads = 1;
  Str rep;
  REQUIRE(ag_gg_check_bundle(e, 2, &opt, &rep.p) == AG_OK);
  auto rj = nlohmann::json::parse(rep.s());
  CHECK(rj["verdict"] == "GENERATED_AT_ALL_SAMPLES");
  CHECK(rj["sections"] == 8);
  CHECK(rj["fiber_rank"] == 4);

  // principal upstairs: everywhere rank-deficient
  ag_bundle* theta = nullptr;
  REQUIRE(ag_bundle_create(cover, kHermHalf, nullptr, &theta) == AG_OK);
  ag_sh_bundle* eprim = nullptr;
  REQUIRE(ag_sh_from_pushforward(p, theta, &eprim) == AG_OK);
  Str rep2;
  REQUIRE(ag_gg_check_bundle(eprim, 1, &opt, &rep2.p) == AG_OK);
  auto rj2 = nlohmann::json::parse(rep2.s());
  CHECK(rj2["verdict"] == "BASE_POINT_FOUND");
  CHECK(rj2["exact_dimension_deficiency"] == true);

  ag_sh_free(eprim);
  ag_bundle_free(theta);
  ag_sh_free(e);
  ag_bundle_free(up);
  ag_isogeny_free(p);
  ag_torus_free(base);
  ag_torus_free(cover);
}

TEST_CASE("lefschetz suite through the C API") {
  ag_torus* t = nullptr;
  REQUIRE(ag_torus_create(1, kPeriodsI, &t) == AG_OK);
  ag_bundle* l = nullptr;
  REQUIRE(ag_bundle_create(t, kHermOne, nullptr, &l) == AG_OK);
  ag_gg_options opt{};
  opt.grid = 12;
  opt.torsion = 2;
  opt.refine = 1;
  opt.tail_bound = 1e-12;
  opt.threads = 1;
  Str rep;
  REQUIRE(ag_lefschetz_suite(l, &opt, &rep.p) == AG_OK);
  auto j = nlohmann::json::parse(rep.s());
  CHECK(j["pass"] == true);
  CHECK(j["base"]["verdict"] == "BASE_POINT_FOUND");
  ag_bundle_free(l);
  ag_torus_free(t);
}

TEST_CASE("mukai and fujita arithmetic through the C API") {
  int64_t gram[1] = {2};
  int64_t v[3] = {1, 0, -3};
  int64_t out = 0;
  REQUIRE(ag_mukai_pair(1, gram, v, v, &out) == AG_OK);
  CHECK(out == 6);
  REQUIRE(ag_mukai_moduli_dim(1, gram, v, &out) == AG_OK);
  CHECK(out == 8);
  int64_t n = 0, fd = 0;
  REQUIRE(ag_mukai_albanese_fiber(1, gram, v, &n, &fd) == AG_OK);
  CHECK(n == 2);
  CHECK(fd == 4);
  int prim = 0;
  REQUIRE(ag_mukai_is_primitive(1, v, &prim) == AG_OK);
  CHECK(prim == 1);

  int64_t v2[3] = {1, 0, -2};
  CHECK(ag_mukai_albanese_fiber(1, gram, v2, &n, &fd) == AG_ERR_HYPOTHESIS_NOT_MET);
  Str gate;
  REQUIRE(ag_mukai_theorem_b_gate(1, gram, v2, 2, 1, &gate.p) == AG_OK);
  auto gj = nlohmann::json::parse(gate.s());
  CHECK(gj["verdict"] == "GG");

  Str hyp;
  REQUIRE(ag_fujita_hypersurface(4, 2, 0, &hyp.p) == AG_OK);
  CHECK(nlohmann::json::parse(hyp.s())["k"] == 3);
  CHECK(ag_fujita_hypersurface(3, 3, 0, &hyp.p) == AG_ERR_HYPOTHESIS_NOT_MET);

  Str cat;
  REQUIRE(ag_fujita_catalog_json(&cat.p) == AG_OK);
  CHECK(nlohmann::json::parse(cat.s())["entries"].size() > 3);

  Str verdict;
  REQUIRE(ag_fujita_conjecture_check("{\"kind\":\"upper\",\"k\":3}", "{\"kind\":\"exact\",\"k\":2}",
                                     "{\"kind\":\"exact\",\"k\":2}", &verdict.p) == AG_OK);
  CHECK(nlohmann::json::parse(verdict.s())["verdict"] == "CONSISTENT");

  int64_t min_m = 0;
  REQUIRE(ag_fujita_theorem_a("{\"kind\":\"exact\",\"k\":2}", &min_m) == AG_OK);
  CHECK(min_m == 2);
  CHECK(ag_fujita_theorem_a("{\"kind\":\"lower\",\"k\":3}", &min_m) == AG_ERR_UNBOUNDED_ENTRY);
}

TEST_CASE("scenes and selftest through the C API") {
  const char* scene_text = R"(
[tori.E]
g = 1
periods = [[0.0, 1.0], [1.0, 0.0]]

[bundles.L]
torus = "E"
hermitian = [[2.0, 0.0]]

[[suites]]
name = "sq"
kind = "gg_line"
bundle = "L"
grid = 8
expect = "GENERATED_AT_ALL_SAMPLES"
)";
  ag_scene* scene = nullptr;
  REQUIRE(ag_scene_parse(scene_text, 1, &scene) == AG_OK);
  Str names;
  REQUIRE(ag_scene_names_json(scene, &names.p) == AG_OK);
  CHECK(nlohmann::json::parse(names.s())["bundles"][0] == "L");

  ag_bundle* l = nullptr;
  REQUIRE(ag_scene_get_bundle(scene, "L", &l) == AG_OK);
  int64_t h0 = 0;
  REQUIRE(ag_bundle_h0(l, &h0) == AG_OK);
  CHECK(h0 == 2);
  ag_bundle_free(l);
  CHECK(ag_scene_get_bundle(scene, "missing", &l) == AG_ERR_REFERENCE);

  ag_run_options opt{};
  opt.tail_bound = 1e-12;
  opt.torsion_override = -1;
  opt.threads = 1;
  Str report;
  int ok = 0;
  REQUIRE(ag_scene_run(scene, &opt, &report.p, &ok) == AG_OK);
  CHECK(ok == 1);
  CHECK(std::strlen(ag_last_run_summary()) > 0);
  ag_scene_free(scene);

  // malformed scenes surface as parse errors
  CHECK(ag_scene_parse("x = [", 1, &scene) == AG_ERR_PARSE);

  Str list;
  REQUIRE(ag_selftest_list(&list.p) == AG_OK);
  CHECK(nlohmann::json::parse(list.s()).size() >= 20);
}
