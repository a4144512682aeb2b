#include "abelgen.h"

#include <cstdlib>
#include <cstring>
#include <sstream>

#include "abelgen/fujita.hpp"
#include "abelgen/gg.hpp"
#include "abelgen/mukai.hpp"
#include "abelgen/scene.hpp"
#include "abelgen/toml.hpp"

using namespace abelgen;

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_summary;

ag_status map_code(errc c) {
  switch (c) {
    case errc::ok: return AG_OK;
    case errc::invalid_argument: return AG_ERR_INVALID_ARGUMENT;
    case errc::degenerate_form: return AG_ERR_DEGENERATE_FORM;
    case errc::not_ample: return AG_ERR_NOT_AMPLE;
    case errc::indefinite_borderline: return AG_ERR_INDEFINITE_BORDERLINE;
    case errc::torus_mismatch: return AG_ERR_TORUS_MISMATCH;
    case errc::truncation_insufficient: return AG_ERR_TRUNCATION_INSUFFICIENT;
    case errc::realization_mismatch: return AG_ERR_REALIZATION_MISMATCH;
    case errc::non_integral_chern_class: return AG_ERR_NON_INTEGRAL_CHERN_CLASS;
    case errc::identity_violation: return AG_ERR_IDENTITY_VIOLATION;
    case errc::lattice_mismatch: return AG_ERR_LATTICE_MISMATCH;
    case errc::zero_vector: return AG_ERR_ZERO_VECTOR;
    case errc::effectivity_undecidable: return AG_ERR_EFFECTIVITY_UNDECIDABLE;
    case errc::hypothesis_not_met: return AG_ERR_HYPOTHESIS_NOT_MET;
    case errc::unbounded_entry: return AG_ERR_UNBOUNDED_ENTRY;
    case errc::parse_error: return AG_ERR_PARSE;
    case errc::reference_error: return AG_ERR_REFERENCE;
    case errc::io_error: return AG_ERR_IO;
    case errc::internal: return AG_ERR_INTERNAL;
  }
  return AG_ERR_INTERNAL;
}

template <typename Fn>
ag_status guarded(Fn&& fn) {
  try {
    fn();
    return AG_OK;
  } catch (const error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return AG_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return AG_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  require(out != nullptr, errc::internal, "allocation failed");
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

cmat read_cmat(const double* data, int rows, int cols) {
  cmat m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      int idx = 2 * (r * cols + c);
      m(r, c) = cplx(data[idx], data[idx + 1]);
    }
  return m;
}

cvec read_cvec(const double* data, int n) {
  cvec v(n);
  for (int i = 0; i < n; ++i) v(i) = cplx(data[2 * i], data[2 * i + 1]);
  return v;
}

imat read_imat(const int64_t* data, int rows, int cols) {
  imat m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = data[r * cols + c];
  return m;
}

MukaiVector read_mukai(const int64_t* v, int rho) {
  MukaiVector out;
  out.r = v[0];
  out.c1.resize(rho);
  for (int i = 0; i < rho; ++i) out.c1(i) = v[1 + i];
  out.ch2 = v[rho + 1];
  return out;
}

SampleStrategy strategy_from(const ag_gg_options* opt) {
  SampleStrategy s;
  if (opt) {
    s.grid_n = opt->grid > 0 ? opt->grid : 8;
    s.torsion_order = opt->torsion > 0 ? opt->torsion : 0;
    s.refinement = opt->refine != 0;
  }
  return s;
}

TruncationParams truncation_from(const ag_gg_options* opt) {
  TruncationParams tp;
  if (opt) {
    if (opt->tail_bound > 0) tp.tail_bound = opt->tail_bound;
    if (opt->radius > 0) tp.radius = opt->radius;
  }
  return tp;
}

RunOptions run_options_from(const ag_run_options* opt) {
  RunOptions ro;
  if (opt) {
    if (opt->tail_bound > 0) ro.tail_bound = opt->tail_bound;
    if (opt->radius > 0) ro.radius = opt->radius;
    if (opt->grid_override > 0) ro.grid_override = opt->grid_override;
    if (opt->torsion_override >= 0) ro.torsion_override = opt->torsion_override;
    if (opt->threads > 0) ro.threads = opt->threads;
  }
  return ro;
}

nlohmann::ordered_json gg_report_json(const EvaluationReport& r) {
  nlohmann::ordered_json out;
  out["samples"] = r.samples;
  out["sections"] = r.sections;
  out["fiber_rank"] = r.fiber_rank;
  out["verdict"] = gg_verdict_name(r.verdict);
  out["min_margin"] = r.min_margin;
  out["median_margin"] = r.median_margin;
  out["normalizer"] = r.normalizer;
  out["cert_floor"] = r.cert_floor;
  out["exact_dimension_deficiency"] = r.exact_dimension_deficiency;
  auto ws = nlohmann::ordered_json::array();
  for (const auto& w : r.witnesses) {
    nlohmann::ordered_json wj;
    auto coords = nlohmann::ordered_json::array();
    for (int i = 0; i < w.coords.size(); ++i) coords.push_back(w.coords(i));
    wj["coords"] = coords;
    wj["margin"] = w.margin;
    wj["refined_margin"] = w.refined_margin;
    auto rcoords = nlohmann::ordered_json::array();
    for (int i = 0; i < w.refined_coords.size(); ++i) rcoords.push_back(w.refined_coords(i));
    wj["refined_coords"] = rcoords;
    ws.push_back(std::move(wj));
  }
  out["witnesses"] = std::move(ws);
  return out;
}

nlohmann::ordered_json fujita_json(const FujitaEntry& e) {
  nlohmann::ordered_json out;
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

FujitaEntry fujita_from_json(const char* text) {
  require(text != nullptr, errc::invalid_argument, "null entry");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(errc::parse_error, e.what());
  }
  std::string kind = j.value("kind", std::string());
  std::string fam = j.value("family_id", std::string("inline"));
  int dim = j.value("dim", 0);
  std::string prov = j.value("provenance", std::string("api input"));
  if (kind == "exact") return make_exact(fam, dim, j.at("k").get<int64_t>(), prov);
  if (kind == "lower") return make_lower(fam, dim, j.at("k").get<int64_t>(), prov);
  if (kind == "upper") return make_upper(fam, dim, j.at("k").get<int64_t>(), prov);
  if (kind == "interval")
    return make_interval(fam, dim, j.at("a").get<int64_t>(), j.at("b").get<int64_t>(), prov);
  fail(errc::parse_error, "unknown entry kind '" + kind + "'");
}

}  // namespace

struct ag_torus {
  TorusPtr t;
};
struct ag_isogeny {
  std::shared_ptr<const Isogeny> p;
};
struct ag_bundle {
  LineBundleData l;
};
struct ag_sh_bundle {
  SHBundle e;
  explicit ag_sh_bundle(SHBundle b) : e(std::move(b)) {}
};
struct ag_scene {
  SceneDocument doc;
};

extern "C" {

const char* ag_version(void) { return version_string(); }

const char* ag_status_name(ag_status s) {
  switch (s) {
    case AG_OK: return "ok";
    case AG_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case AG_ERR_DEGENERATE_FORM: return "degenerate_form";
    case AG_ERR_NOT_AMPLE: return "not_ample";
    case AG_ERR_INDEFINITE_BORDERLINE: return "indefinite_borderline";
    case AG_ERR_TORUS_MISMATCH: return "torus_mismatch";
    case AG_ERR_TRUNCATION_INSUFFICIENT: return "truncation_insufficient";
    case AG_ERR_REALIZATION_MISMATCH: return "realization_mismatch";
    case AG_ERR_NON_INTEGRAL_CHERN_CLASS: return "non_integral_chern_class";
    case AG_ERR_IDENTITY_VIOLATION: return "identity_violation";
    case AG_ERR_LATTICE_MISMATCH: return "lattice_mismatch";
    case AG_ERR_ZERO_VECTOR: return "zero_vector";
    case AG_ERR_EFFECTIVITY_UNDECIDABLE: return "effectivity_undecidable";
    case AG_ERR_HYPOTHESIS_NOT_MET: return "hypothesis_not_met";
    case AG_ERR_UNBOUNDED_ENTRY: return "unbounded_entry";
    case AG_ERR_PARSE: return "parse_error";
    case AG_ERR_REFERENCE: return "reference_error";
    case AG_ERR_IO: return "io_error";
    case AG_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* ag_last_error(void) { return g_last_error.c_str(); }

void ag_string_free(char* s) { std::free(s); }

ag_status ag_torus_create(int g, const double* periods, ag_torus** out) {
  return guarded([&] {
    require(periods && out, errc::invalid_argument, "null argument");
    *out = new ag_torus{std::make_shared<Torus>(g, read_cmat(periods, g, 2 * g))};
  });
}

void ag_torus_free(ag_torus* t) { delete t; }

int ag_torus_dim(const ag_torus* t) { return t ? t->t->dim() : 0; }

ag_status ag_torus_reduce(const ag_torus* t, const double* v, double* out) {
  return guarded([&] {
    require(t && v && out, errc::invalid_argument, "null argument");
    cvec r = t->t->reduce(read_cvec(v, t->t->dim()));
    for (int i = 0; i < r.size(); ++i) {
      out[2 * i] = r(i).real();
      out[2 * i + 1] = r(i).imag();
    }
  });
}

ag_status ag_torus_torsion_count(const ag_torus* t, int n, int64_t* count) {
  return guarded([&] {
    require(t && count, errc::invalid_argument, "null argument");
    *count = static_cast<int64_t>(t->t->torsion_points(n).size());
  });
}

ag_status ag_alt_form_normal_form(int two_g, const int64_t* e, int64_t* divisors,
                                  int64_t* basis_change_or_null) {
  return guarded([&] {
    require(e && divisors, errc::invalid_argument, "null argument");
    FrobeniusResult fnf = frobenius_normal_form(IntAltForm(read_imat(e, two_g, two_g)));
    for (int i = 0; i < fnf.divisors.size(); ++i) divisors[i] = fnf.divisors(i);
    if (basis_change_or_null) {
      for (int r = 0; r < two_g; ++r)
        for (int c = 0; c < two_g; ++c)
          basis_change_or_null[r * two_g + c] = fnf.basis_change(r, c);
    }
  });
}

ag_status ag_isogeny_create(const ag_torus* source, const ag_torus* target, const double* alpha,
                            const int64_t* lattice_matrix, ag_isogeny** out) {
  return guarded([&] {
    require(source && target && alpha && lattice_matrix && out, errc::invalid_argument,
            "null argument");
    int g = source->t->dim();
    *out = new ag_isogeny{std::make_shared<Isogeny>(source->t, target->t, read_cmat(alpha, g, g),
                                                    read_imat(lattice_matrix, 2 * g, 2 * g))};
  });
}

void ag_isogeny_free(ag_isogeny* p) { delete p; }

int64_t ag_isogeny_degree(const ag_isogeny* p) { return p ? p->p->degree() : 0; }

ag_status ag_isogeny_kernel_json(const ag_isogeny* p, char** json_out) {
  return guarded([&] {
    require(p && json_out, errc::invalid_argument, "null argument");
    nlohmann::ordered_json out;
    out["degree"] = p->p->degree();
    auto inv = nlohmann::ordered_json::array();
    for (int64_t s : p->p->kernel_invariants()) inv.push_back(s);
    out["invariants"] = std::move(inv);
    auto pts = nlohmann::ordered_json::array();
    for (const auto& k : p->p->kernel_points()) {
      auto coords = nlohmann::ordered_json::array();
      for (int i = 0; i < k.coords.size(); ++i) coords.push_back(k.coords(i));
      pts.push_back(std::move(coords));
    }
    out["points_lattice_coords"] = std::move(pts);
    *json_out = dup_string(report_to_string(out));
  });
}

ag_status ag_bundle_create(const ag_torus* t, const double* hermitian, const double* chi,
                           ag_bundle** out) {
  return guarded([&] {
    require(t && hermitian && out, errc::invalid_argument, "null argument");
    int g = t->t->dim();
    HermitianForm h(read_cmat(hermitian, g, g));
    if (chi) {
      *out = new ag_bundle{make_line_bundle(t->t, std::move(h), read_cvec(chi, 2 * g))};
    } else {
      *out = new ag_bundle{make_line_bundle(t->t, std::move(h))};
    }
  });
}

void ag_bundle_free(ag_bundle* l) { delete l; }

ag_status ag_bundle_is_ample(const ag_bundle* l, int* out) {
  return guarded([&] {
    require(l && out, errc::invalid_argument, "null argument");
    *out = is_ample(l->l) ? 1 : 0;
  });
}

ag_status ag_bundle_h0(const ag_bundle* l, int64_t* out) {
  return guarded([&] {
    require(l && out, errc::invalid_argument, "null argument");
    *out = h0(l->l);
  });
}

ag_status ag_bundle_type(const ag_bundle* l, int64_t* divisors) {
  return guarded([&] {
    require(l && divisors, errc::invalid_argument, "null argument");
    ivec d = bundle_type(l->l);
    for (int i = 0; i < d.size(); ++i) divisors[i] = d(i);
  });
}

ag_status ag_bundle_tensor(const ag_bundle* a, const ag_bundle* b, ag_bundle** out) {
  return guarded([&] {
    require(a && b && out, errc::invalid_argument, "null argument");
    *out = new ag_bundle{tensor(a->l, b->l)};
  });
}

ag_status ag_bundle_tensor_power(const ag_bundle* l, int m, ag_bundle** out) {
  return guarded([&] {
    require(l && out, errc::invalid_argument, "null argument");
    *out = new ag_bundle{tensor_power(l->l, m)};
  });
}

ag_status ag_bundle_translate(const ag_bundle* l, const double* a, ag_bundle** out) {
  return guarded([&] {
    require(l && a && out, errc::invalid_argument, "null argument");
    *out = new ag_bundle{translate(l->l, read_cvec(a, l->l.torus->dim()))};
  });
}

ag_status ag_bundle_pullback(const ag_isogeny* p, const ag_bundle* l, ag_bundle** out) {
  return guarded([&] {
    require(p && l && out, errc::invalid_argument, "null argument");
    *out = new ag_bundle{pullback(*p->p, l->l)};
  });
}

ag_status ag_bundle_eval_sections(const ag_bundle* l, const double* v, double tail_bound,
                                  int radius, double* values) {
  return guarded([&] {
    require(l && v && values, errc::invalid_argument, "null argument");
    ThetaBasis basis = ThetaBasis::build(l->l);
    TruncationParams tp;
    if (tail_bound > 0) tp.tail_bound = tail_bound;
    if (radius > 0) tp.radius = radius;
    cvec vals = basis.eval(read_cvec(v, l->l.torus->dim()), tp);
    for (int i = 0; i < vals.size(); ++i) {
      values[2 * i] = vals(i).real();
      values[2 * i + 1] = vals(i).imag();
    }
  });
}

ag_status ag_bundle_info_json(const ag_bundle* l, char** json_out) {
  return guarded([&] {
    require(l && json_out, errc::invalid_argument, "null argument");
    nlohmann::ordered_json out;
    out["g"] = l->l.torus->dim();
    bool ample = is_ample(l->l);
    out["ample"] = ample;
    if (ample) {
      ivec d = bundle_type(l->l);
      auto dj = nlohmann::ordered_json::array();
      for (int i = 0; i < d.size(); ++i) dj.push_back(d(i));
      out["type"] = std::move(dj);
      out["h0"] = h0(l->l);
    }
    *json_out = dup_string(report_to_string(out));
  });
}

ag_status ag_sh_from_pushforward(const ag_isogeny* p, const ag_bundle* upstairs,
                                 ag_sh_bundle** out) {
  return guarded([&] {
    require(p && upstairs && out, errc::invalid_argument, "null argument");
    *out = new ag_sh_bundle(SHBundle::from_pushforward(p->p, upstairs->l));
  });
}

void ag_sh_free(ag_sh_bundle* e) { delete e; }

int ag_sh_rank(const ag_sh_bundle* e) { return e ? e->e.rank() : 0; }

ag_status ag_sh_h0(const ag_sh_bundle* e, int64_t* out) {
  return guarded([&] {
    require(e && out, errc::invalid_argument, "null argument");
    *out = e->e.h0();
  });
}

ag_status ag_sh_chern_chi_json(const ag_sh_bundle* e, char** json_out) {
  return guarded([&] {
    require(e && json_out, errc::invalid_argument, "null argument");
    ChiSurfaceReport rep = chi_surface_consistency(e->e.isogeny(), e->e.upstairs());
    nlohmann::ordered_json out;
    out["rank"] = rep.rank;
    out["chi_upstairs"] = rep.chi_upstairs;
    out["c1_l_squared"] = rep.c1_l_squared;
    out["c1_e_squared"] = rep.c1_e_squared;
    out["chi_downstairs"] = rep.chi_downstairs;
    *json_out = dup_string(report_to_string(out));
  });
}

ag_status ag_gg_check_line(const ag_bundle* l, int power, const ag_gg_options* opt,
                           char** report_json) {
  return guarded([&] {
    require(l && report_json, errc::invalid_argument, "null argument");
    LineBundleData bundle = l->l;
    if (power > 1) bundle = tensor_power(bundle, power);
    EvaluationReport rep = check_gg_line(bundle, strategy_from(opt), truncation_from(opt),
                                         GGThresholds{}, opt && opt->threads > 0 ? opt->threads : 1);
    *report_json = dup_string(report_to_string(gg_report_json(rep)));
  });
}

ag_status ag_gg_check_bundle(const ag_sh_bundle* e, int power, const ag_gg_options* opt,
                             char** report_json) {
  return guarded([&] {
    require(e && report_json, errc::invalid_argument, "null argument");
    EvaluationReport rep = check_gg_bundle(e->e, power, strategy_from(opt), truncation_from(opt),
                                           GGThresholds{}, opt && opt->threads > 0 ? opt->threads : 1);
    *report_json = dup_string(report_to_string(gg_report_json(rep)));
  });
}

ag_status ag_lefschetz_suite(const ag_bundle* l, const ag_gg_options* opt, char** report_json) {
  return guarded([&] {
    require(l && report_json, errc::invalid_argument, "null argument");
    LefschetzReport rep = lefschetz_suite(l->l, strategy_from(opt), truncation_from(opt),
                                          GGThresholds{}, opt && opt->threads > 0 ? opt->threads : 1);
    nlohmann::ordered_json out;
    out["base"] = gg_report_json(rep.base);
    out["square"] = gg_report_json(rep.square);
    out["cube"] = gg_report_json(rep.cube);
    out["pass"] = rep.pass;
    *report_json = dup_string(report_to_string(out));
  });
}

ag_status ag_mukai_pair(int rho, const int64_t* gram, const int64_t* v, const int64_t* w,
                        int64_t* out) {
  return guarded([&] {
    require(gram && v && w && out, errc::invalid_argument, "null argument");
    NSLattice ns = make_ns_lattice(read_imat(gram, rho, rho));
    *out = mukai_pair(ns, read_mukai(v, rho), read_mukai(w, rho));
  });
}

ag_status ag_mukai_is_primitive(int rho, const int64_t* v, int* out) {
  return guarded([&] {
    require(v && out, errc::invalid_argument, "null argument");
    *out = is_primitive(read_mukai(v, rho)) ? 1 : 0;
  });
}

ag_status ag_mukai_moduli_dim(int rho, const int64_t* gram, const int64_t* v, int64_t* out) {
  return guarded([&] {
    require(gram && v && out, errc::invalid_argument, "null argument");
    NSLattice ns = make_ns_lattice(read_imat(gram, rho, rho));
    *out = moduli_dim(ns, read_mukai(v, rho));
  });
}

ag_status ag_mukai_albanese_fiber(int rho, const int64_t* gram, const int64_t* v,
                                  int64_t* kummer_index, int64_t* fiber_dim) {
  return guarded([&] {
    require(gram && v && kummer_index && fiber_dim, errc::invalid_argument, "null argument");
    NSLattice ns = make_ns_lattice(read_imat(gram, rho, rho));
    AlbaneseFiber fib = albanese_fiber(ns, read_mukai(v, rho));
    *kummer_index = fib.kummer_index;
    *fiber_dim = fib.fiber_dim;
  });
}

ag_status ag_mukai_theorem_b_gate(int rho, const int64_t* gram, const int64_t* v, int64_t m,
                                  int fixed_determinant, char** checklist_json) {
  return guarded([&] {
    require(gram && v && checklist_json, errc::invalid_argument, "null argument");
    NSLattice ns = make_ns_lattice(read_imat(gram, rho, rho));
    GateReport rep = theorem_b_gate(ns, read_mukai(v, rho), m, fixed_determinant != 0);
    nlohmann::ordered_json out;
    out["verdict"] = gate_verdict_name(rep.verdict);
    auto checklist = nlohmann::ordered_json::array();
    for (const auto& h : rep.checklist) {
      nlohmann::ordered_json hj;
      hj["hypothesis"] = h.name;
      hj["status"] = h.status == HypothesisStatus::verified
                         ? "VERIFIED"
                         : (h.status == HypothesisStatus::assumed ? "ASSUMED" : "FAILED");
      hj["detail"] = h.detail;
      checklist.push_back(std::move(hj));
    }
    out["checklist"] = std::move(checklist);
    *checklist_json = dup_string(report_to_string(out));
  });
}

ag_status ag_fujita_hypersurface(int64_t n, int64_t d, int very_general, char** entry_json) {
  return guarded([&] {
    require(entry_json, errc::invalid_argument, "null argument");
    *entry_json = dup_string(report_to_string(fujita_json(hypersurface_fujita(n, d, very_general != 0))));
  });
}

ag_status ag_fujita_blowup(int64_t n, char** entry_json) {
  return guarded([&] {
    require(entry_json, errc::invalid_argument, "null argument");
    *entry_json = dup_string(report_to_string(fujita_json(blowup_lower_bound(n))));
  });
}

ag_status ag_fujita_catalog_json(char** json_out) {
  return guarded([&] {
    require(json_out, errc::invalid_argument, "null argument");
    nlohmann::ordered_json out;
    out["catalog_version"] = fujita_catalog_version();
    auto arr = nlohmann::ordered_json::array();
    for (const auto& e : standard_entries()) arr.push_back(fujita_json(e));
    out["entries"] = std::move(arr);
    *json_out = dup_string(report_to_string(out));
  });
}

ag_status ag_fujita_conjecture_check(const char* total_json, const char* fiber_json,
                                     const char* base_json, char** verdict_json) {
  return guarded([&] {
    require(verdict_json, errc::invalid_argument, "null argument");
    FibrationEntry e{fujita_from_json(total_json), fujita_from_json(fiber_json),
                     fujita_from_json(base_json)};
    nlohmann::ordered_json out;
    out["verdict"] = conjecture_verdict_name(conjecture_check(e));
    *verdict_json = dup_string(report_to_string(out));
  });
}

ag_status ag_fujita_theorem_a(const char* fiber_entry_json, int64_t* min_m) {
  return guarded([&] {
    require(min_m, errc::invalid_argument, "null argument");
    *min_m = theorem_a_bound(fujita_from_json(fiber_entry_json)).min_m;
  });
}

ag_status ag_scene_load(const char* path, ag_scene** out) {
  return guarded([&] {
    require(path && out, errc::invalid_argument, "null argument");
    *out = new ag_scene{SceneDocument::load(path)};
  });
}

ag_status ag_scene_parse(const char* text, int is_toml, ag_scene** out) {
  return guarded([&] {
    require(text && out, errc::invalid_argument, "null argument");
    nlohmann::json doc = is_toml ? parse_toml(text) : nlohmann::json::parse(text);
    *out = new ag_scene{SceneDocument::from_json(doc)};
  });
}

void ag_scene_free(ag_scene* s) { delete s; }

ag_status ag_scene_get_torus(const ag_scene* s, const char* name, ag_torus** out) {
  return guarded([&] {
    require(s && name && out, errc::invalid_argument, "null argument");
    *out = new ag_torus{s->doc.torus(name)};
  });
}

ag_status ag_scene_get_bundle(const ag_scene* s, const char* name, ag_bundle** out) {
  return guarded([&] {
    require(s && name && out, errc::invalid_argument, "null argument");
    *out = new ag_bundle{s->doc.bundle(name)};
  });
}

ag_status ag_scene_get_isogeny(const ag_scene* s, const char* name, ag_isogeny** out) {
  return guarded([&] {
    require(s && name && out, errc::invalid_argument, "null argument");
    *out = new ag_isogeny{s->doc.isogeny(name)};
  });
}

ag_status ag_scene_get_pushforward(const ag_scene* s, const char* name, ag_sh_bundle** out) {
  return guarded([&] {
    require(s && name && out, errc::invalid_argument, "null argument");
    *out = new ag_sh_bundle(s->doc.pushforward(name));
  });
}

ag_status ag_scene_names_json(const ag_scene* s, char** json_out) {
  return guarded([&] {
    require(s && json_out, errc::invalid_argument, "null argument");
    nlohmann::ordered_json out;
    auto collect = [&](const char* key) {
      auto arr = nlohmann::ordered_json::array();
      if (s->doc.raw().contains(key)) {
        for (const auto& item : s->doc.raw().at(key).items()) arr.push_back(item.key());
      }
      out[key] = std::move(arr);
    };
    collect("tori");
    collect("bundles");
    collect("isogenies");
    collect("pushforwards");
    *json_out = dup_string(report_to_string(out));
  });
}

static void store_summary(const RunResult& rr) {
  std::ostringstream ss;
  for (const auto& o : rr.outcomes) {
    ss << o.name << '\t' << o.kind << '\t' << (o.ok ? "ok" : "FAIL") << '\t' << o.wall_ms << '\n';
  }
  g_last_summary = ss.str();
}

ag_status ag_scene_run(const ag_scene* s, const ag_run_options* opt, char** report_json,
                       int* all_ok) {
  return guarded([&] {
    require(s && report_json && all_ok, errc::invalid_argument, "null argument");
    RunResult rr = run_scene(s->doc, run_options_from(opt));
    store_summary(rr);
    *report_json = dup_string(report_to_string(rr.report));
    *all_ok = rr.ok ? 1 : 0;
  });
}

const char* ag_last_run_summary(void) { return g_last_summary.c_str(); }

ag_status ag_selftest(const ag_run_options* opt, char** report_json, int* all_ok) {
  return guarded([&] {
    require(report_json && all_ok, errc::invalid_argument, "null argument");
    RunResult rr = selftest(run_options_from(opt));
    store_summary(rr);
    *report_json = dup_string(report_to_string(rr.report));
    *all_ok = rr.ok ? 1 : 0;
  });
}

ag_status ag_selftest_list(char** names_json) {
  return guarded([&] {
    require(names_json, errc::invalid_argument, "null argument");
    auto arr = nlohmann::ordered_json::array();
    for (const auto& n : selftest_suite_names()) arr.push_back(n);
    *names_json = dup_string(report_to_string(arr));
  });
}

}  // extern "C"
