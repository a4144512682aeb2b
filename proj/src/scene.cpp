#include "abelgen/scene.hpp"

#include <chrono>
#include <numbers>
#include <cinttypes>
#include <cstdio>
#include <random>

#include <openssl/evp.h>

#include "abelgen/toml.hpp"

namespace abelgen {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;

const json& need(const json& j, const char* key, const std::string& ctx) {
  if (!j.is_object() || !j.contains(key))
    fail(errc::parse_error, ctx + ": missing key '" + key + "'");
  return j.at(key);
}

std::string need_string(const json& j, const char* key, const std::string& ctx) {
  const json& v = need(j, key, ctx);
  if (!v.is_string()) fail(errc::parse_error, ctx + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

int64_t need_int(const json& j, const char* key, const std::string& ctx) {
  const json& v = need(j, key, ctx);
  if (!v.is_number_integer()) fail(errc::parse_error, ctx + ": '" + key + "' must be an integer");
  return v.get<int64_t>();
}

cplx parse_cplx(const json& j, const std::string& ctx) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return cplx(j[0].get<double>(), j[1].get<double>());
  fail(errc::parse_error, ctx + ": expected [re, im]");
}

// Accepts nested rows or a flat row-major list of [re, im] pairs.
cmat parse_cmat(const json& j, int rows, int cols, const std::string& ctx) {
  cmat m(rows, cols);
  if (!j.is_array()) fail(errc::parse_error, ctx + ": expected a matrix");
  bool nested = !j.empty() && j[0].is_array() && !j[0].empty() && j[0][0].is_array();
  if (rows == 1 && static_cast<int>(j.size()) == cols && !nested) {
    for (int c = 0; c < cols; ++c) m(0, c) = parse_cplx(j[c], ctx);
    return m;
  }
  if (nested || (static_cast<int>(j.size()) == rows && rows > 1)) {
    if (static_cast<int>(j.size()) != rows) fail(errc::parse_error, ctx + ": row count mismatch");
    for (int r = 0; r < rows; ++r) {
      if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols)
        fail(errc::parse_error, ctx + ": column count mismatch");
      for (int c = 0; c < cols; ++c) m(r, c) = parse_cplx(j[r][c], ctx);
    }
    return m;
  }
  if (static_cast<int>(j.size()) == rows * cols) {
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) m(r, c) = parse_cplx(j[r * cols + c], ctx);
    return m;
  }
  fail(errc::parse_error, ctx + ": matrix shape mismatch");
}

imat parse_imat(const json& j, int rows, int cols, const std::string& ctx) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    fail(errc::parse_error, ctx + ": expected " + std::to_string(rows) + " integer rows");
  imat m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols)
      fail(errc::parse_error, ctx + ": integer row length mismatch");
    for (int c = 0; c < cols; ++c) {
      if (!j[r][c].is_number_integer()) fail(errc::parse_error, ctx + ": expected an integer");
      m(r, c) = j[r][c].get<int64_t>();
    }
  }
  return m;
}

ivec parse_ivec(const json& j, const std::string& ctx) {
  if (!j.is_array()) fail(errc::parse_error, ctx + ": expected an integer list");
  ivec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer()) fail(errc::parse_error, ctx + ": expected an integer");
    v(static_cast<int>(i)) = j[i].get<int64_t>();
  }
  return v;
}

MukaiVector parse_mukai(const json& j, const std::string& ctx) {
  ivec all = parse_ivec(j, ctx);
  require(all.size() >= 3, errc::parse_error, ctx + ": Mukai vector needs r, c1..., ch2");
  MukaiVector v;
  v.r = all(0);
  v.c1 = all.segment(1, all.size() - 2);
  v.ch2 = all(all.size() - 1);
  return v;
}

FujitaEntry parse_fujita_entry(const json& j, const std::string& ctx) {
  std::string kind = need_string(j, "kind", ctx);
  std::string fam = j.value("family_id", std::string("inline"));
  int dim = static_cast<int>(j.value("dim", 0));
  std::string prov = j.value("provenance", std::string("scene input"));
  if (kind == "exact") return make_exact(fam, dim, need_int(j, "k", ctx), prov);
  if (kind == "lower") return make_lower(fam, dim, need_int(j, "k", ctx), prov);
  if (kind == "upper") return make_upper(fam, dim, need_int(j, "k", ctx), prov);
  if (kind == "interval")
    return make_interval(fam, dim, need_int(j, "a", ctx), need_int(j, "b", ctx), prov);
  fail(errc::parse_error, ctx + ": unknown entry kind '" + kind + "'");
}

ojson fujita_entry_json(const FujitaEntry& e) {
  ojson out;
  out["family_id"] = e.family_id;
  out["dim"] = e.dim;
  switch (e.kind) {
    case FujitaEntry::Kind::exact: out["kind"] = "exact"; out["k"] = e.a; break;
    case FujitaEntry::Kind::lower_bound: out["kind"] = "lower"; out["k"] = e.a; break;
    case FujitaEntry::Kind::upper_bound: out["kind"] = "upper"; out["k"] = e.a; break;
    case FujitaEntry::Kind::interval:
      out["kind"] = "interval";
      out["a"] = e.a;
      out["b"] = e.b;
      break;
  }
  out["provenance"] = e.provenance;
  return out;
}

ojson coords_json(const rvec& x) {
  ojson a = ojson::array();
  for (int i = 0; i < x.size(); ++i) a.push_back(x(i));
  return a;
}

ojson gg_json(const EvaluationReport& r) {
  ojson out;
  out["samples"] = r.samples;
  out["sections"] = r.sections;
  out["fiber_rank"] = r.fiber_rank;
  out["verdict"] = gg_verdict_name(r.verdict);
  out["min_margin"] = r.min_margin;
  out["median_margin"] = r.median_margin;
  out["normalizer"] = r.normalizer;
  out["cert_floor"] = r.cert_floor;
  out["exact_dimension_deficiency"] = r.exact_dimension_deficiency;
  ojson ws = ojson::array();
  for (const auto& w : r.witnesses) {
    ojson wj;
    wj["coords"] = coords_json(w.coords);
    wj["margin"] = w.margin;
    wj["refined_margin"] = w.refined_margin;
    wj["refined_coords"] = coords_json(w.refined_coords);
    ws.push_back(std::move(wj));
  }
  out["witnesses"] = std::move(ws);
  return out;
}

struct SuiteContext {
  const SceneDocument& scene;
  const json& suite;
  const RunOptions& opt;
  std::string ctx;

  SampleStrategy strategy(int default_grid, int default_torsion) const {
    SampleStrategy s;
    s.grid_n = opt.grid_override.value_or(static_cast<int>(suite.value("grid", default_grid)));
    s.torsion_order =
        opt.torsion_override.value_or(static_cast<int>(suite.value("torsion", default_torsion)));
    s.refinement = suite.value("refine", true);
    return s;
  }
  TruncationParams truncation() const { return TruncationParams{opt.tail_bound, opt.radius}; }
  uint64_t seed() const { return suite.value("seed", static_cast<uint64_t>(20240801)); }
};

rvec random_centered_coords(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> unif(-0.5, 0.5);
  rvec x(dim);
  for (int i = 0; i < dim; ++i) x(i) = unif(rng);
  return x;
}

ivec random_small_lattice(std::mt19937_64& rng, int dim) {
  std::uniform_int_distribution<int> d(-1, 1);
  ivec n(dim);
  for (int i = 0; i < dim; ++i) n(i) = d(rng);
  return n;
}

// ---------------------------------------------------------------- suites --

std::pair<ojson, bool> run_lefschetz(const SuiteContext& c) {
  const LineBundleData& l = c.scene.bundle(need_string(c.suite, "bundle", c.ctx));
  SampleStrategy s = c.strategy(20, 4);
  double min_margin = c.suite.value("min_margin", 1e-4);
  double witness_margin = c.suite.value("witness_margin", 1e-8);
  LefschetzReport rep = lefschetz_suite(l, s, c.truncation());
  bool witness_ok = !rep.base.witnesses.empty();
  double best_witness = 1.0;
  for (const auto& w : rep.base.witnesses) best_witness = std::min(best_witness, w.refined_margin);
  bool ok = rep.pass && witness_ok && best_witness < witness_margin &&
            rep.square.min_margin > min_margin && rep.cube.min_margin > min_margin;
  ojson out;
  out["base"] = gg_json(rep.base);
  out["square"] = gg_json(rep.square);
  out["cube"] = gg_json(rep.cube);
  out["pass"] = rep.pass;
  out["best_witness_margin"] = best_witness;
  return {out, ok};
}

bool apply_gg_expectations(const SuiteContext& c, const EvaluationReport& rep, ojson& out) {
  bool ok = true;
  if (c.suite.contains("expect")) {
    std::string expect = c.suite.at("expect").get<std::string>();
    out["expected_verdict"] = expect;
    ok = ok && (expect == gg_verdict_name(rep.verdict));
  }
  if (c.suite.contains("min_margin")) {
    double m = c.suite.at("min_margin").get<double>();
    out["expected_min_margin"] = m;
    ok = ok && rep.min_margin > m;
  }
  if (c.suite.contains("witness_margin")) {
    double m = c.suite.at("witness_margin").get<double>();
    double best = 1.0;
    for (const auto& w : rep.witnesses) best = std::min(best, w.refined_margin);
    out["expected_witness_margin"] = m;
    ok = ok && !rep.witnesses.empty() && best < m;
  }
  if (c.suite.contains("expect_sections"))
    ok = ok && rep.sections == c.suite.at("expect_sections").get<int64_t>();
  if (c.suite.contains("expect_fiber_rank"))
    ok = ok && rep.fiber_rank == c.suite.at("expect_fiber_rank").get<int64_t>();
  if (c.suite.contains("expect_exact_deficiency"))
    ok = ok && rep.exact_dimension_deficiency == c.suite.at("expect_exact_deficiency").get<bool>();
  return ok;
}

std::pair<ojson, bool> run_gg_line(const SuiteContext& c) {
  LineBundleData l = c.scene.bundle(need_string(c.suite, "bundle", c.ctx));
  int power = static_cast<int>(c.suite.value("power", 1));
  if (power > 1) l = tensor_power(l, power);
  EvaluationReport rep = check_gg_line(l, c.strategy(8, 0), c.truncation(), GGThresholds{},
                                       c.opt.threads);
  ojson out = gg_json(rep);
  bool ok = apply_gg_expectations(c, rep, out);
  return {out, ok};
}

std::pair<ojson, bool> run_gg_bundle(const SuiteContext& c) {
  const SHBundle& e = c.scene.pushforward(need_string(c.suite, "pushforward", c.ctx));
  int power = static_cast<int>(c.suite.value("power", 1));
  EvaluationReport rep = check_gg_bundle(e, power, c.strategy(8, 0), c.truncation(),
                                         GGThresholds{}, c.opt.threads);
  ojson out = gg_json(rep);
  out["rank"] = e.rank();
  out["power"] = power;
  bool ok = apply_gg_expectations(c, rep, out);
  return {out, ok};
}

std::pair<ojson, bool> run_identities_line(const SuiteContext& c, const LineBundleData& l) {
  int samples = static_cast<int>(c.suite.value("samples", 100));
  double max_auto = c.suite.value("max_automorphy", 1e-9);
  double max_pair = c.suite.value("max_pairing", 1e-8);
  double max_curv = c.suite.value("max_curvature", 1e-5);
  TruncationParams tp = c.truncation();
  ThetaBasis basis = ThetaBasis::build(l);
  const Torus& t = *l.torus;
  const int dim = 2 * t.dim();
  std::mt19937_64 rng(c.seed());
  std::uniform_int_distribution<int> pick(0, basis.h0() - 1);

  double worst_auto = 0.0, worst_pair = 0.0;
  for (int s = 0; s < samples; ++s) {
    cvec v = t.from_lattice_coords(random_centered_coords(rng, dim));
    ivec lam = random_small_lattice(rng, dim);
    worst_auto = std::max(worst_auto, check_automorphy(basis, v, lam, tp));
    int i = pick(rng), j = pick(rng);
    worst_pair = std::max(worst_pair, pairing_periodicity_check(basis, i, j, v, lam, tp));
  }
  double worst_curv = 0.0;
  for (int s = 0; s < 5; ++s) {
    cvec v = t.from_lattice_coords(random_centered_coords(rng, dim));
    worst_curv = std::max(worst_curv, curvature_fd_error(l.hermitian, 1, v));
  }
  ojson out;
  out["samples"] = samples;
  out["h0"] = basis.h0();
  out["max_automorphy_residual"] = worst_auto;
  out["max_pairing_residual"] = worst_pair;
  out["max_curvature_rel_error"] = worst_curv;
  bool ok = worst_auto < max_auto && worst_pair < max_pair && worst_curv < max_curv;
  return {out, ok};
}

std::pair<ojson, bool> run_identities_push(const SuiteContext& c, const SHBundle& e) {
  int samples = static_cast<int>(c.suite.value("samples", 100));
  double max_auto = c.suite.value("max_automorphy", 1e-9);
  double max_pair = c.suite.value("max_pairing", 1e-8);
  double max_curv = c.suite.value("max_curvature", 1e-5);
  double max_cocycle = c.suite.value("max_cocycle", 1e-10);
  TruncationParams tp = c.truncation();

  const Torus& base = *e.base();
  const int dim = 2 * base.dim();
  const int r = e.rank();
  ThetaBasis basis = ThetaBasis::build(e.upstairs());
  SemiRep rep = explicit_semirep(e);
  double cocycle = semirep_cocycle_residual(rep, base);

  std::mt19937_64 rng(c.seed());
  std::uniform_int_distribution<int> pick(0, basis.h0() - 1);
  double worst_auto = 0.0, worst_pair = 0.0;
  for (int s = 0; s < samples; ++s) {
    cvec v = base.from_lattice_coords(random_centered_coords(rng, dim));
    ivec lam = random_small_lattice(rng, dim);
    cvec lv = base.lattice_vector(lam);
    cmat m0 = fiber_eval_reduced(e, basis, v, tp, /*reduce_lift=*/false);
    cmat m1 = fiber_eval_reduced(e, basis, v + lv, tp, /*reduce_lift=*/false);
    double im = e.descended_form()(v, lv).imag();
    cmat j_hat = semirep_value(rep, base, lam) * std::exp(cplx(0.0, kPi / r * im));
    worst_auto = std::max(worst_auto, (m1 - m0 * j_hat.transpose()).cwiseAbs().maxCoeff());
    int i = pick(rng), j = pick(rng);
    worst_pair = std::max(worst_pair,
                          sh_pairing_periodicity_check(e, basis, i, j, v, lam, tp));
  }
  double worst_curv = 0.0;
  for (int s = 0; s < 5; ++s) {
    cvec v = base.from_lattice_coords(random_centered_coords(rng, dim));
    worst_curv = std::max(worst_curv, curvature_fd_error(e.descended_form(), r, v));
  }
  ojson out;
  out["samples"] = samples;
  out["rank"] = r;
  out["h0"] = basis.h0();
  out["semirep_cocycle_residual"] = cocycle;
  out["max_automorphy_residual"] = worst_auto;
  out["max_pairing_residual"] = worst_pair;
  out["max_curvature_rel_error"] = worst_curv;
  bool ok = worst_auto < max_auto && worst_pair < max_pair && worst_curv < max_curv &&
            cocycle < max_cocycle;
  return {out, ok};
}

std::pair<ojson, bool> run_identities(const SuiteContext& c) {
  if (c.suite.contains("pushforward"))
    return run_identities_push(c, c.scene.pushforward(need_string(c.suite, "pushforward", c.ctx)));
  return run_identities_line(c, c.scene.bundle(need_string(c.suite, "bundle", c.ctx)));
}

std::pair<ojson, bool> run_semihomogeneity(const SuiteContext& c) {
  SHBundle explicit_bundle = [&]() {
    if (c.suite.contains("pushforward")) {
      const SHBundle& e = c.scene.pushforward(need_string(c.suite, "pushforward", c.ctx));
      return SHBundle::from_semirep(e.base(), explicit_semirep(e));
    }
    const LineBundleData& l = c.scene.bundle(need_string(c.suite, "bundle", c.ctx));
    return SHBundle::from_semirep(l.torus, semirep_from_line_bundle(l));
  }();
  int samples = static_cast<int>(c.suite.value("samples", 50));
  double max_residual = c.suite.value("max_residual", 1e-9);
  const Torus& t = *explicit_bundle.base();
  const int dim = 2 * t.dim();
  std::mt19937_64 rng(c.seed());

  const int translates = 10;
  int per = std::max(1, samples / translates);
  double worst = 0.0;
  for (int i = 0; i < translates; ++i) {
    cvec a = t.from_lattice_coords(random_centered_coords(rng, dim));
    worst = std::max(worst, verify_semihomogeneity(explicit_bundle, a, per, c.seed() + i));
  }
  double at_zero = verify_semihomogeneity(explicit_bundle, cvec::Zero(t.dim()), 1, c.seed());

  ojson out;
  out["rank"] = explicit_bundle.rank();
  out["samples"] = translates * per;
  out["max_residual"] = worst;
  out["residual_at_zero"] = at_zero;
  bool ok = worst < max_residual && at_zero <= 1e-14;
  return {out, ok};
}

std::pair<ojson, bool> run_chern_chi(const SuiteContext& c) {
  const SHBundle& e = c.scene.pushforward(need_string(c.suite, "pushforward", c.ctx));
  ChiSurfaceReport rep = chi_surface_consistency(e.isogeny(), e.upstairs());
  ojson out;
  out["rank"] = rep.rank;
  out["chi_upstairs"] = rep.chi_upstairs;
  out["c1_l_squared"] = rep.c1_l_squared;
  out["c1_e_squared"] = rep.c1_e_squared;
  out["chi_downstairs"] = rep.chi_downstairs;
  bool ok = true;
  if (c.suite.contains("expect_chi")) ok = ok && rep.chi_downstairs == c.suite.at("expect_chi").get<int64_t>();
  if (c.suite.contains("expect_c1e_sq"))
    ok = ok && rep.c1_e_squared == c.suite.at("expect_c1e_sq").get<int64_t>();
  if (c.suite.contains("expect_rank")) ok = ok && rep.rank == c.suite.at("expect_rank").get<int64_t>();
  return {out, ok};
}

ojson gate_json(const GateReport& rep) {
  ojson out;
  out["verdict"] = gate_verdict_name(rep.verdict);
  ojson checklist = ojson::array();
  for (const auto& h : rep.checklist) {
    ojson hj;
    hj["hypothesis"] = h.name;
    switch (h.status) {
      case HypothesisStatus::verified: hj["status"] = "VERIFIED"; break;
      case HypothesisStatus::assumed: hj["status"] = "ASSUMED"; break;
      case HypothesisStatus::failed: hj["status"] = "FAILED"; break;
    }
    hj["detail"] = h.detail;
    checklist.push_back(std::move(hj));
  }
  out["checklist"] = std::move(checklist);
  return out;
}

std::pair<ojson, bool> run_mukai_pair(const SuiteContext& c) {
  NSLattice ns = make_ns_lattice(parse_imat(need(c.suite, "gram", c.ctx),
                                            static_cast<int>(need(c.suite, "gram", c.ctx).size()),
                                            static_cast<int>(need(c.suite, "gram", c.ctx).size()),
                                            c.ctx));
  MukaiVector v = parse_mukai(need(c.suite, "v", c.ctx), c.ctx);
  MukaiVector w = c.suite.contains("w") ? parse_mukai(c.suite.at("w"), c.ctx) : v;
  int64_t val = mukai_pair(ns, v, w);
  ojson out;
  out["pair"] = val;
  out["primitive"] = is_primitive(v);
  bool ok = !c.suite.contains("expect") || val == c.suite.at("expect").get<int64_t>();
  return {out, ok};
}

std::pair<ojson, bool> run_mukai_dim(const SuiteContext& c) {
  const json& gj = need(c.suite, "gram", c.ctx);
  NSLattice ns = make_ns_lattice(
      parse_imat(gj, static_cast<int>(gj.size()), static_cast<int>(gj.size()), c.ctx));
  MukaiVector v = parse_mukai(need(c.suite, "v", c.ctx), c.ctx);
  ojson out;
  out["dim"] = moduli_dim(ns, v);
  bool ok = true;
  try {
    AlbaneseFiber fib = albanese_fiber(ns, v);
    out["kummer_index"] = fib.kummer_index;
    out["fiber_dim"] = fib.fiber_dim;
    out["albanese_base_dim"] = moduli_dim(ns, v) - fib.fiber_dim;
    if (c.suite.contains("expect_fiber_dim"))
      ok = ok && fib.fiber_dim == c.suite.at("expect_fiber_dim").get<int64_t>();
  } catch (const error& e) {
    if (e.code() != errc::hypothesis_not_met) throw;
    out["albanese_fiber"] = "HYPOTHESIS_NOT_MET";
    ok = ok && c.suite.value("expect_hypothesis_not_met", false);
  }
  if (c.suite.contains("expect_dim"))
    ok = ok && out["dim"].get<int64_t>() == c.suite.at("expect_dim").get<int64_t>();
  return {out, ok};
}

std::pair<ojson, bool> run_mukai_gate(const SuiteContext& c) {
  const json& gj = need(c.suite, "gram", c.ctx);
  NSLattice ns = make_ns_lattice(
      parse_imat(gj, static_cast<int>(gj.size()), static_cast<int>(gj.size()), c.ctx));
  MukaiVector v = parse_mukai(need(c.suite, "v", c.ctx), c.ctx);
  int64_t m = need_int(c.suite, "m", c.ctx);
  bool fixed_det = c.suite.value("fixed_determinant", false);
  std::optional<int64_t> hn;
  if (c.suite.contains("hilbert_case_n")) hn = c.suite.at("hilbert_case_n").get<int64_t>();
  GateReport rep = theorem_b_gate(ns, v, m, fixed_det, hn);
  ojson out = gate_json(rep);
  bool ok = !c.suite.contains("expect") ||
            std::string(gate_verdict_name(rep.verdict)) == c.suite.at("expect").get<std::string>();
  return {out, ok};
}

std::pair<ojson, bool> run_mukai_suite(const SuiteContext& c) {
  int64_t n_max = c.suite.value("n_max", static_cast<int64_t>(10));
  NSLattice ns = make_ns_lattice((imat(1, 1) << 2).finished());
  bool ok = true;
  ojson rows = ojson::array();
  for (int64_t n = 1; n <= n_max; ++n) {
    MukaiVector v{1, ivec::Zero(1), -n};
    int64_t pr = mukai_pair(ns, v, v);
    int64_t dim = moduli_dim(ns, v);
    ojson row;
    row["n"] = n;
    row["pair"] = pr;
    row["dim"] = dim;
    ok = ok && pr == 2 * n && dim == 2 * n + 2;
    if (2 * n >= 6) {
      AlbaneseFiber fib = albanese_fiber(ns, v);
      row["kummer_index"] = fib.kummer_index;
      row["fiber_dim"] = fib.fiber_dim;
      ok = ok && fib.kummer_index == n - 1 && dim - fib.fiber_dim == 4;
    }
    rows.push_back(std::move(row));
  }

  auto gate = [&](int64_t n, int64_t m, bool fixed_det) {
    MukaiVector v{1, ivec::Zero(1), -n};
    return theorem_b_gate(ns, v, m, fixed_det).verdict;
  };
  bool gates_ok = gate(2, 2, true) == GateVerdict::gg && gate(2, 3, true) == GateVerdict::gg &&
                  gate(2, 2, false) == GateVerdict::not_covered &&
                  gate(2, 1, true) == GateVerdict::not_covered &&
                  gate(3, 2, false) == GateVerdict::gg_codim_one &&
                  gate(3, 2, true) == GateVerdict::gg_codim_one &&
                  gate(5, 2, false) == GateVerdict::gg_codim_one;
  MukaiVector imprimitive{2, ivec::Zero(1), -4};
  gates_ok = gates_ok &&
             theorem_b_gate(ns, imprimitive, 2, false).verdict == GateVerdict::not_covered;
  MukaiVector small{1, ivec::Zero(1), -2};
  gates_ok = gates_ok && mukai_pair(ns, small, small) == 4;

  ojson out;
  out["hilbert_rows"] = std::move(rows);
  out["gates_ok"] = gates_ok;
  return {out, ok && gates_ok};
}

std::pair<ojson, bool> run_fujita_suite(const SuiteContext& c) {
  bool ok = true;
  ojson out;

  auto expect_exact = [&](int64_t n, int64_t d, bool vg, int64_t want) {
    FujitaEntry e = hypersurface_fujita(n, d, vg);
    ok = ok && e.kind == FujitaEntry::Kind::exact && e.a == want;
    return fujita_entry_json(e);
  };
  ojson hyp = ojson::array();
  hyp.push_back(expect_exact(4, 2, false, 3));
  hyp.push_back(expect_exact(5, 6, false, 1));
  hyp.push_back(expect_exact(4, 5, false, 1));
  bool gate_hit = false;
  try {
    hypersurface_fujita(3, 3, false);
  } catch (const error& e) {
    gate_hit = e.code() == errc::hypothesis_not_met;
  }
  ok = ok && gate_hit;
  out["hypersurface"] = std::move(hyp);

  ojson blow = ojson::array();
  for (int64_t n = 2; n <= 6; ++n) {
    FujitaEntry e = blowup_lower_bound(n);
    ok = ok && e.kind == FujitaEntry::Kind::lower_bound && e.a == n - 1;
    blow.push_back(fujita_entry_json(e));
  }
  bool blow_gate = false;
  try {
    blowup_lower_bound(1);
  } catch (const error& e) {
    blow_gate = e.code() == errc::hypothesis_not_met;
  }
  ok = ok && blow_gate;
  out["blowup"] = std::move(blow);

  FibrationEntry surface_over_curve{
      make_upper("surface", 2, 3, "Reider's theorem"),
      make_exact("curve-fibre", 1, 2, "curve Fujita number"),
      make_exact("curve-base", 1, 2, "curve Fujita number"),
  };
  ConjectureVerdict cv = conjecture_check(surface_over_curve);
  out["surface_over_curve"] = conjecture_verdict_name(cv);
  ok = ok && cv == ConjectureVerdict::consistent;

  FibrationEntry artificial{
      make_exact("artificial-total", 2, 5, "test"),
      make_exact("artificial-fibre", 1, 2, "test"),
      make_exact("artificial-base", 1, 2, "test"),
  };
  ok = ok && conjecture_check(artificial) == ConjectureVerdict::violation;
  FibrationEntry undecided{
      make_lower("only-lower", 2, 2, "test"),
      make_lower("only-lower-f", 1, 2, "test"),
      make_lower("only-lower-b", 1, 2, "test"),
  };
  ok = ok && conjecture_check(undecided) == ConjectureVerdict::undecided;

  ExponentRule rule = theorem_a_bound(make_exact("k3-fibre", 2, 2, "K3 Fujita number"));
  out["theorem_a_min_m"] = rule.min_m;
  ok = ok && rule.min_m == 2;
  bool unbounded_hit = false;
  try {
    theorem_a_bound(make_lower("lb", 2, 3, "test"));
  } catch (const error& e) {
    unbounded_hit = e.code() == errc::unbounded_entry;
  }
  ok = ok && unbounded_hit;

  ojson cat = ojson::array();
  for (const auto& e : standard_entries()) {
    ok = ok && e.lower() >= 1;
    cat.push_back(fujita_entry_json(e));
  }
  out["catalog_version"] = fujita_catalog_version();
  out["catalog"] = std::move(cat);
  return {out, ok};
}

std::pair<ojson, bool> run_fujita_hypersurface(const SuiteContext& c) {
  FujitaEntry e = hypersurface_fujita(need_int(c.suite, "n", c.ctx), need_int(c.suite, "d", c.ctx),
                                      c.suite.value("very_general", false));
  ojson out = fujita_entry_json(e);
  bool ok = !c.suite.contains("expect_exact") ||
            (e.kind == FujitaEntry::Kind::exact && e.a == c.suite.at("expect_exact").get<int64_t>());
  return {out, ok};
}

std::pair<ojson, bool> run_fujita_blowup(const SuiteContext& c) {
  FujitaEntry e = blowup_lower_bound(need_int(c.suite, "n", c.ctx));
  ojson out = fujita_entry_json(e);
  bool ok = !c.suite.contains("expect_lower") ||
            (e.kind == FujitaEntry::Kind::lower_bound &&
             e.a == c.suite.at("expect_lower").get<int64_t>());
  return {out, ok};
}

std::pair<ojson, bool> run_fujita_conjecture(const SuiteContext& c) {
  FibrationEntry e{parse_fujita_entry(need(c.suite, "total", c.ctx), c.ctx),
                   parse_fujita_entry(need(c.suite, "fiber", c.ctx), c.ctx),
                   parse_fujita_entry(need(c.suite, "base", c.ctx), c.ctx)};
  ConjectureVerdict v = conjecture_check(e);
  ojson out;
  out["verdict"] = conjecture_verdict_name(v);
  bool ok = !c.suite.contains("expect") ||
            std::string(conjecture_verdict_name(v)) == c.suite.at("expect").get<std::string>();
  return {out, ok};
}

std::pair<ojson, bool> run_fujita_catalog(const SuiteContext&) {
  ojson out;
  out["catalog_version"] = fujita_catalog_version();
  ojson cat = ojson::array();
  for (const auto& e : standard_entries()) cat.push_back(fujita_entry_json(e));
  out["catalog"] = std::move(cat);
  return {out, true};
}

std::pair<ojson, bool> run_rr_monotone(const SuiteContext& c) {
  const json& cj = need(c.suite, "coeffs", c.ctx);
  std::vector<rational> coeffs;
  for (const auto& item : cj) {
    if (item.is_number_integer()) {
      coeffs.emplace_back(item.get<int64_t>());
    } else if (item.is_array() && item.size() == 2) {
      coeffs.emplace_back(item[0].get<int64_t>(), item[1].get<int64_t>());
    } else {
      fail(errc::parse_error, c.ctx + ": coefficients are integers or [num, den]");
    }
  }
  int n = static_cast<int>(c.suite.value("n", static_cast<int64_t>(coeffs.size() - 1)));
  RRPolynomial p = make_rr_polynomial(n, std::move(coeffs));
  int64_t from = c.suite.value("from", static_cast<int64_t>(1));
  int64_t to = c.suite.value("to", static_cast<int64_t>(10));
  std::vector<int64_t> range;
  for (int64_t x = from; x <= to; ++x) range.push_back(x);
  bool increasing = need(c.suite, "direction", c.ctx).get<std::string>() == "increasing";
  bool mono = rr_monotone(p, range, increasing);
  ojson out;
  out["monotone"] = mono;
  out["direction"] = increasing ? "increasing" : "decreasing";
  out["note"] = "monotonicity direction is a caller-supplied input";
  bool ok = !c.suite.contains("expect") || mono == c.suite.at("expect").get<bool>();
  return {out, ok};
}

using SuiteFn = std::pair<ojson, bool> (*)(const SuiteContext&);

std::pair<ojson, bool> dispatch_suite(const SuiteContext& c, const std::string& kind) {
  static const std::map<std::string, SuiteFn> table = {
      {"lefschetz", run_lefschetz},
      {"gg_line", run_gg_line},
      {"gg_bundle", run_gg_bundle},
      {"identities", run_identities},
      {"semihomogeneity", run_semihomogeneity},
      {"chern_chi", run_chern_chi},
      {"mukai_pair", run_mukai_pair},
      {"mukai_dim", run_mukai_dim},
      {"mukai_gate", run_mukai_gate},
      {"mukai_suite", run_mukai_suite},
      {"fujita_suite", run_fujita_suite},
      {"fujita_hypersurface", run_fujita_hypersurface},
      {"fujita_blowup", run_fujita_blowup},
      {"fujita_conjecture", run_fujita_conjecture},
      {"fujita_catalog", run_fujita_catalog},
      {"rr_monotone", run_rr_monotone},
  };
  auto it = table.find(kind);
  if (it == table.end()) fail(errc::parse_error, c.ctx + ": unknown suite kind '" + kind + "'");
  return it->second(c);
}

void append_number(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

void serialize(const ojson& j, std::string& out) {
  switch (j.type()) {
    case ojson::value_t::null: out += "null"; break;
    case ojson::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
    case ojson::value_t::number_integer: out += std::to_string(j.get<int64_t>()); break;
    case ojson::value_t::number_unsigned: out += std::to_string(j.get<uint64_t>()); break;
    case ojson::value_t::number_float: append_number(out, j.get<double>()); break;
    case ojson::value_t::string: out += json(j.get<std::string>()).dump(); break;
    case ojson::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& item : j) {
        if (!first) out += ',';
        first = false;
        serialize(item, out);
      }
      out += ']';
      break;
    }
    case ojson::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        serialize(it.value(), out);
      }
      out += '}';
      break;
    }
    default: fail(errc::internal, "unserializable report value");
  }
}

}  // namespace

const char* version_string() { return "0.1.0"; }

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  require(EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) == 1,
          errc::internal, "digest computation failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::string report_to_string(const ojson& report) {
  std::string out;
  serialize(report, out);
  out += '\n';
  return out;
}

SceneDocument SceneDocument::from_json(const nlohmann::json& doc) {
  require(doc.is_object(), errc::parse_error, "scene document must be a table");
  SceneDocument scene;
  scene.raw_ = doc;

  if (doc.contains("tori")) {
    for (const auto& [name, spec] : doc.at("tori").items()) {
      std::string ctx = "tori." + name;
      int g = static_cast<int>(need_int(spec, "g", ctx));
      cmat periods = parse_cmat(need(spec, "periods", ctx), g, 2 * g, ctx);
      scene.tori_[name] = std::make_shared<Torus>(g, std::move(periods));
    }
  }
  if (doc.contains("bundles")) {
    for (const auto& [name, spec] : doc.at("bundles").items()) {
      std::string ctx = "bundles." + name;
      const TorusPtr& t = scene.torus(need_string(spec, "torus", ctx));
      int g = t->dim();
      HermitianForm h(parse_cmat(need(spec, "hermitian", ctx), g, g, ctx));
      if (spec.contains("chi")) {
        const json& cj = spec.at("chi");
        require(cj.is_array() && static_cast<int>(cj.size()) == 2 * g, errc::parse_error,
                ctx + ": chi needs 2g unit values");
        cvec chi(2 * g);
        for (int i = 0; i < 2 * g; ++i) chi(i) = parse_cplx(cj[i], ctx);
        scene.bundles_.emplace(name, make_line_bundle(t, std::move(h), std::move(chi)));
      } else {
        scene.bundles_.emplace(name, make_line_bundle(t, std::move(h)));
      }
    }
  }
  if (doc.contains("isogenies")) {
    for (const auto& [name, spec] : doc.at("isogenies").items()) {
      std::string ctx = "isogenies." + name;
      const TorusPtr& src = scene.torus(need_string(spec, "source", ctx));
      const TorusPtr& dst = scene.torus(need_string(spec, "target", ctx));
      int g = src->dim();
      cmat alpha = parse_cmat(need(spec, "alpha", ctx), g, g, ctx);
      imat m = parse_imat(need(spec, "lattice_map", ctx), 2 * g, 2 * g, ctx);
      scene.isogenies_[name] =
          std::make_shared<Isogeny>(src, dst, std::move(alpha), std::move(m));
    }
  }
  if (doc.contains("pushforwards")) {
    for (const auto& [name, spec] : doc.at("pushforwards").items()) {
      std::string ctx = "pushforwards." + name;
      const auto& p = scene.isogeny(need_string(spec, "isogeny", ctx));
      const LineBundleData& l = scene.bundle(need_string(spec, "bundle", ctx));
      scene.pushforwards_.emplace(name, SHBundle::from_pushforward(p, l));
    }
  }
  if (doc.contains("suites")) {
    const json& suites = doc.at("suites");
    require(suites.is_array(), errc::parse_error, "suites must be an array of tables");
    for (const auto& s : suites) scene.suites_.push_back(s);
  }
  return scene;
}

SceneDocument SceneDocument::load(const std::string& path) {
  return from_json(load_document(path));
}

const TorusPtr& SceneDocument::torus(const std::string& name) const {
  auto it = tori_.find(name);
  if (it == tori_.end()) fail(errc::reference_error, "unknown torus '" + name + "'");
  return it->second;
}

const LineBundleData& SceneDocument::bundle(const std::string& name) const {
  auto it = bundles_.find(name);
  if (it == bundles_.end()) fail(errc::reference_error, "unknown bundle '" + name + "'");
  return it->second;
}

const std::shared_ptr<const Isogeny>& SceneDocument::isogeny(const std::string& name) const {
  auto it = isogenies_.find(name);
  if (it == isogenies_.end()) fail(errc::reference_error, "unknown isogeny '" + name + "'");
  return it->second;
}

const SHBundle& SceneDocument::pushforward(const std::string& name) const {
  auto it = pushforwards_.find(name);
  if (it == pushforwards_.end()) fail(errc::reference_error, "unknown pushforward '" + name + "'");
  return it->second;
}

RunResult run_scene(const SceneDocument& scene, const RunOptions& opt) {
  RunResult rr;
  ojson report;
  ojson tool;
  tool["name"] = "abelgen";
  tool["version"] = version_string();
  report["tool"] = std::move(tool);
  report["input_digest"] = sha256_hex(scene.raw().dump());
  ojson params;
  params["tail_bound"] = opt.tail_bound;
  params["radius"] = opt.radius;
  if (opt.grid_override) params["grid"] = *opt.grid_override;
  if (opt.torsion_override) params["torsion"] = *opt.torsion_override;
  params["threads"] = opt.threads;
  report["parameters"] = std::move(params);

  bool all_ok = true;
  ojson suites = ojson::array();
  int index = 0;
  for (const auto& suite : scene.suites()) {
    std::string kind = need_string(suite, "kind", "suite #" + std::to_string(index));
    std::string name = suite.value("name", kind + "#" + std::to_string(index));
    SuiteContext ctx{scene, suite, opt, "suite '" + name + "'"};

    ojson entry;
    entry["name"] = name;
    entry["kind"] = kind;
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      auto [result, suite_ok] = dispatch_suite(ctx, kind);
      entry["result"] = std::move(result);
      ok = suite_ok;
    } catch (const error& e) {
      if (e.code() == errc::parse_error || e.code() == errc::reference_error) throw;
      ojson err;
      err["code"] = errc_name(e.code());
      err["message"] = e.what();
      entry["error"] = std::move(err);
      ok = false;
    }
    auto t1 = std::chrono::steady_clock::now();
    entry["ok"] = ok;
    all_ok = all_ok && ok;
    double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    rr.outcomes.push_back(SuiteOutcome{name, kind, ok, ms});
    suites.push_back(std::move(entry));
    ++index;
  }
  report["suites"] = std::move(suites);
  report["ok"] = all_ok;
  rr.report = std::move(report);
  rr.ok = all_ok;
  return rr;
}

RunResult selftest(const RunOptions& opt) { return run_scene(SceneDocument::builtin(), opt); }

std::vector<std::string> selftest_suite_names() {
  SceneDocument scene = SceneDocument::builtin();
  std::vector<std::string> names;
  int index = 0;
  for (const auto& suite : scene.suites()) {
    std::string kind = suite.value("kind", std::string("unknown"));
    names.push_back(suite.value("name", kind + "#" + std::to_string(index)));
    ++index;
  }
  return names;
}

SceneDocument SceneDocument::builtin() { return from_json(parse_toml(builtin_text())); }

const char* SceneDocument::builtin_text() {
  return R"TOML(
# Built-in verification corpus: every selftest suite with pinned parameters.

[tori.E_i]
g = 1
periods = [[0.0, 1.0], [1.0, 0.0]]

[tori.E_tau]
g = 1
periods = [[0.3, 1.2], [1.0, 0.0]]

[tori.E_rho]
g = 1
periods = [[0.5, 0.8660254037844386], [1.0, 0.0]]

[tori.E_cov2]
g = 1
periods = [[0.0, 2.0], [1.0, 0.0]]

[tori.ExE]
g = 2
periods = [
  [[0.0, 1.0], [0.0, 0.0], [1.0, 0.0], [0.0, 0.0]],
  [[0.0, 0.0], [0.0, 1.0], [0.0, 0.0], [1.0, 0.0]],
]

[tori.ExE_cov2]
g = 2
periods = [
  [[0.0, 2.0], [0.0, 0.0], [1.0, 0.0], [0.0, 0.0]],
  [[0.0, 0.0], [0.0, 1.0], [0.0, 0.0], [1.0, 0.0]],
]

[tori.ExE_cov3]
g = 2
periods = [
  [[0.0, 3.0], [0.0, 0.0], [1.0, 0.0], [0.0, 0.0]],
  [[0.0, 0.0], [0.0, 1.0], [0.0, 0.0], [1.0, 0.0]],
]

[bundles.P_i]
torus = "E_i"
hermitian = [[1.0, 0.0]]

[bundles.L2_i]
torus = "E_i"
hermitian = [[2.0, 0.0]]

[bundles.L3_i]
torus = "E_i"
hermitian = [[3.0, 0.0]]

[bundles.P_tau]
torus = "E_tau"
hermitian = [[0.8333333333333333, 0.0]]

[bundles.P_rho]
torus = "E_rho"
hermitian = [[1.1547005383792515, 0.0]]

[bundles.P_ExE]
torus = "ExE"
hermitian = [
  [[1.0, 0.0], [0.0, 0.0]],
  [[0.0, 0.0], [1.0, 0.0]],
]

[bundles.L2_cov]
torus = "E_cov2"
hermitian = [[1.0, 0.0]]

[bundles.Theta_cov]
torus = "E_cov2"
hermitian = [[0.5, 0.0]]

[bundles.L12_cov]
torus = "ExE_cov2"
hermitian = [
  [[0.5, 0.0], [0.0, 0.0]],
  [[0.0, 0.0], [2.0, 0.0]],
]

[bundles.L13_cov]
torus = "ExE_cov3"
hermitian = [
  [[0.3333333333333333, 0.0], [0.0, 0.0]],
  [[0.0, 0.0], [3.0, 0.0]],
]

[isogenies.p2]
source = "E_cov2"
target = "E_i"
alpha = [[1.0, 0.0]]
lattice_map = [[2, 0], [0, 1]]

[isogenies.p2s]
source = "ExE_cov2"
target = "ExE"
alpha = [
  [[1.0, 0.0], [0.0, 0.0]],
  [[0.0, 0.0], [1.0, 0.0]],
]
lattice_map = [
  [2, 0, 0, 0],
  [0, 1, 0, 0],
  [0, 0, 1, 0],
  [0, 0, 0, 1],
]

[isogenies.p3s]
source = "ExE_cov3"
target = "ExE"
alpha = [
  [[1.0, 0.0], [0.0, 0.0]],
  [[0.0, 0.0], [1.0, 0.0]],
]
lattice_map = [
  [3, 0, 0, 0],
  [0, 1, 0, 0],
  [0, 0, 1, 0],
  [0, 0, 0, 1],
]

[pushforwards.E2]
isogeny = "p2"
bundle = "L2_cov"

[pushforwards.E_prim]
isogeny = "p2"
bundle = "Theta_cov"

[pushforwards.E2s]
isogeny = "p2s"
bundle = "L12_cov"

[pushforwards.E3s]
isogeny = "p3s"
bundle = "L13_cov"

[[suites]]
name = "c1.lefschetz.tau_i"
kind = "lefschetz"
bundle = "P_i"
grid = 20
torsion = 4
min_margin = 1e-4
witness_margin = 1e-8

[[suites]]
name = "c1.lefschetz.tau_generic"
kind = "lefschetz"
bundle = "P_tau"
grid = 20
torsion = 4
min_margin = 1e-4
witness_margin = 1e-8

[[suites]]
name = "c1.lefschetz.tau_hexagonal"
kind = "lefschetz"
bundle = "P_rho"
grid = 20
torsion = 4
min_margin = 1e-4
witness_margin = 1e-8

[[suites]]
name = "c1.lefschetz.product_11"
kind = "lefschetz"
bundle = "P_ExE"
grid = 20
torsion = 4
min_margin = 1e-4
witness_margin = 1e-8

[[suites]]
name = "c2.tensor_square.deg2"
kind = "gg_bundle"
pushforward = "E2"
power = 2
grid = 20
expect = "GENERATED_AT_ALL_SAMPLES"
min_margin = 1e-5
expect_sections = 8
expect_fiber_rank = 4

[[suites]]
name = "c3.gg_prim.deg2_principal"
kind = "gg_bundle"
pushforward = "E_prim"
power = 1
grid = 8
expect = "BASE_POINT_FOUND"
expect_sections = 1
expect_fiber_rank = 2
expect_exact_deficiency = true

[[suites]]
name = "c4.chern_chi.deg2_type12"
kind = "chern_chi"
pushforward = "E2s"
expect_rank = 2
expect_chi = 2
expect_c1e_sq = 8

[[suites]]
name = "c4.chern_chi.deg3_type13"
kind = "chern_chi"
pushforward = "E3s"
expect_rank = 3
expect_chi = 3
expect_c1e_sq = 18

[[suites]]
name = "c5.identities.P_i"
kind = "identities"
bundle = "P_i"
samples = 100

[[suites]]
name = "c5.identities.L2_i"
kind = "identities"
bundle = "L2_i"
samples = 100

[[suites]]
name = "c5.identities.L3_i"
kind = "identities"
bundle = "L3_i"
samples = 100

[[suites]]
name = "c5.identities.P_tau"
kind = "identities"
bundle = "P_tau"
samples = 100

[[suites]]
name = "c5.identities.P_rho"
kind = "identities"
bundle = "P_rho"
samples = 100

[[suites]]
name = "c5.identities.P_ExE"
kind = "identities"
bundle = "P_ExE"
samples = 100

[[suites]]
name = "c5.identities.L12_cov"
kind = "identities"
bundle = "L12_cov"
samples = 100

[[suites]]
name = "c5.identities.push_E2"
kind = "identities"
pushforward = "E2"
samples = 100

[[suites]]
name = "c5.identities.push_E2s"
kind = "identities"
pushforward = "E2s"
samples = 100

[[suites]]
name = "c6.semihomogeneity.rank1"
kind = "semihomogeneity"
bundle = "L2_i"
samples = 50

[[suites]]
name = "c6.semihomogeneity.E2"
kind = "semihomogeneity"
pushforward = "E2"
samples = 50

[[suites]]
name = "c6.semihomogeneity.E2s"
kind = "semihomogeneity"
pushforward = "E2s"
samples = 50

[[suites]]
name = "c6.semihomogeneity.E3s"
kind = "semihomogeneity"
pushforward = "E3s"
samples = 50

[[suites]]
name = "c7.mukai.arithmetic"
kind = "mukai_suite"
n_max = 10

[[suites]]
name = "c8.fujita.catalog"
kind = "fujita_suite"
)TOML";
}

}  // namespace abelgen
