/* abelgen: bundles on complex tori, global-generation certification, and
 * Mukai/Fujita arithmetic behind a C interface.
 *
 * All handles are opaque; every function returns an ag_status and reports
 * results through out-parameters.  Strings returned through char** are
 * allocated by the library and must be released with ag_string_free.
 * Matrices of complex numbers are passed as row-major double arrays with
 * interleaved re,im (so a rows x cols matrix occupies 2*rows*cols doubles).
 */
#ifndef ABELGEN_H
#define ABELGEN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define AG_API __declspec(dllexport)
#else
#define AG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ag_status {
  AG_OK = 0,
  AG_ERR_INVALID_ARGUMENT,
  AG_ERR_DEGENERATE_FORM,
  AG_ERR_NOT_AMPLE,
  AG_ERR_INDEFINITE_BORDERLINE,
  AG_ERR_TORUS_MISMATCH,
  AG_ERR_TRUNCATION_INSUFFICIENT,
  AG_ERR_REALIZATION_MISMATCH,
  AG_ERR_NON_INTEGRAL_CHERN_CLASS,
  AG_ERR_IDENTITY_VIOLATION,
  AG_ERR_LATTICE_MISMATCH,
  AG_ERR_ZERO_VECTOR,
  AG_ERR_EFFECTIVITY_UNDECIDABLE,
  AG_ERR_HYPOTHESIS_NOT_MET,
  AG_ERR_UNBOUNDED_ENTRY,
  AG_ERR_PARSE,
  AG_ERR_REFERENCE,
  AG_ERR_IO,
  AG_ERR_INTERNAL
} ag_status;

AG_API const char* ag_version(void);
AG_API const char* ag_status_name(ag_status s);
/* Message of the most recent failure on this thread. */
AG_API const char* ag_last_error(void);
AG_API void ag_string_free(char* s);

typedef struct ag_torus ag_torus;
typedef struct ag_isogeny ag_isogeny;
typedef struct ag_bundle ag_bundle;     /* line bundle */
typedef struct ag_sh_bundle ag_sh_bundle;
typedef struct ag_scene ag_scene;

/* ---- tori -------------------------------------------------------------- */

AG_API ag_status ag_torus_create(int g, const double* periods, ag_torus** out);
AG_API void ag_torus_free(ag_torus* t);
AG_API int ag_torus_dim(const ag_torus* t);
/* v: 2*g doubles in, reduced representative out (lattice coords in [0,1)). */
AG_API ag_status ag_torus_reduce(const ag_torus* t, const double* v, double* out);
/* Torsion points of order n: n^{2g} points, each 2*g doubles. */
AG_API ag_status ag_torus_torsion_count(const ag_torus* t, int n, int64_t* count);

/* Normal form of a 2g x 2g integer alternating form: divisors d_1..d_g and,
 * optionally, the unimodular basis change (row-major 2g x 2g). */
AG_API ag_status ag_alt_form_normal_form(int two_g, const int64_t* e, int64_t* divisors,
                                         int64_t* basis_change_or_null);

/* ---- isogenies --------------------------------------------------------- */

AG_API ag_status ag_isogeny_create(const ag_torus* source, const ag_torus* target,
                                   const double* alpha, const int64_t* lattice_matrix,
                                   ag_isogeny** out);
AG_API void ag_isogeny_free(ag_isogeny* p);
AG_API int64_t ag_isogeny_degree(const ag_isogeny* p);
/* JSON: kernel points (source lattice coordinates) and group invariants. */
AG_API ag_status ag_isogeny_kernel_json(const ag_isogeny* p, char** json_out);

/* ---- line bundles ------------------------------------------------------ */

/* hermitian: g x g complex; chi: 2g complex unit values or NULL for the
 * canonical semicharacter. */
AG_API ag_status ag_bundle_create(const ag_torus* t, const double* hermitian, const double* chi,
                                  ag_bundle** out);
AG_API void ag_bundle_free(ag_bundle* l);
AG_API ag_status ag_bundle_is_ample(const ag_bundle* l, int* out);
AG_API ag_status ag_bundle_h0(const ag_bundle* l, int64_t* out);
/* divisors: g entries. */
AG_API ag_status ag_bundle_type(const ag_bundle* l, int64_t* divisors);
AG_API ag_status ag_bundle_tensor(const ag_bundle* a, const ag_bundle* b, ag_bundle** out);
AG_API ag_status ag_bundle_tensor_power(const ag_bundle* l, int m, ag_bundle** out);
/* a: 2*g doubles (ambient point). */
AG_API ag_status ag_bundle_translate(const ag_bundle* l, const double* a, ag_bundle** out);
AG_API ag_status ag_bundle_pullback(const ag_isogeny* p, const ag_bundle* l, ag_bundle** out);
/* Section values at v (2*g doubles): 2*h0 doubles out. */
AG_API ag_status ag_bundle_eval_sections(const ag_bundle* l, const double* v, double tail_bound,
                                         int radius, double* values);
AG_API ag_status ag_bundle_info_json(const ag_bundle* l, char** json_out);

/* ---- semihomogeneous pushforwards -------------------------------------- */

AG_API ag_status ag_sh_from_pushforward(const ag_isogeny* p, const ag_bundle* upstairs,
                                        ag_sh_bundle** out);
AG_API void ag_sh_free(ag_sh_bundle* e);
AG_API int ag_sh_rank(const ag_sh_bundle* e);
AG_API ag_status ag_sh_h0(const ag_sh_bundle* e, int64_t* out);
/* rank, h0, Chern numbers, chi consistency (g = 2 pushforwards). */
AG_API ag_status ag_sh_chern_chi_json(const ag_sh_bundle* e, char** json_out);

/* ---- global generation -------------------------------------------------- */

typedef struct ag_gg_options {
  int grid;          /* grid of grid^{2g} points; <= 0 selects 8 */
  int torsion;       /* add torsion points up to this order */
  int refine;        /* nonzero: golden-section descent on near-zeros */
  double tail_bound; /* <= 0 selects 1e-12 */
  int radius;        /* 0 = adaptive */
  int threads;       /* <= 0 selects 1 */
} ag_gg_options;

AG_API ag_status ag_gg_check_line(const ag_bundle* l, int power, const ag_gg_options* opt,
                                  char** report_json);
AG_API ag_status ag_gg_check_bundle(const ag_sh_bundle* e, int power, const ag_gg_options* opt,
                                    char** report_json);
AG_API ag_status ag_lefschetz_suite(const ag_bundle* l, const ag_gg_options* opt,
                                    char** report_json);

/* ---- exact arithmetic --------------------------------------------------- */

/* v, w: rho+2 entries (r, c1..., ch2); gram: row-major rho x rho. */
AG_API ag_status ag_mukai_pair(int rho, const int64_t* gram, const int64_t* v, const int64_t* w,
                               int64_t* out);
AG_API ag_status ag_mukai_is_primitive(int rho, const int64_t* v, int* out);
AG_API ag_status ag_mukai_moduli_dim(int rho, const int64_t* gram, const int64_t* v, int64_t* out);
/* out: kummer index n and fiber dimension 2n. */
AG_API ag_status ag_mukai_albanese_fiber(int rho, const int64_t* gram, const int64_t* v,
                                         int64_t* kummer_index, int64_t* fiber_dim);
AG_API ag_status ag_mukai_theorem_b_gate(int rho, const int64_t* gram, const int64_t* v, int64_t m,
                                         int fixed_determinant, char** checklist_json);

AG_API ag_status ag_fujita_hypersurface(int64_t n, int64_t d, int very_general, char** entry_json);
AG_API ag_status ag_fujita_blowup(int64_t n, char** entry_json);
AG_API ag_status ag_fujita_catalog_json(char** json_out);
/* entries are JSON objects {kind, k | a,b, ...}. */
AG_API ag_status ag_fujita_conjecture_check(const char* total_json, const char* fiber_json,
                                            const char* base_json, char** verdict_json);
AG_API ag_status ag_fujita_theorem_a(const char* fiber_entry_json, int64_t* min_m);

/* ---- scenes, runs, selftest --------------------------------------------- */

typedef struct ag_run_options {
  double tail_bound; /* <= 0 selects 1e-12 */
  int radius;
  int grid_override;    /* <= 0: no override */
  int torsion_override; /* < 0: no override */
  int threads;
} ag_run_options;

AG_API ag_status ag_scene_load(const char* path, ag_scene** out);
AG_API ag_status ag_scene_parse(const char* text, int is_toml, ag_scene** out);
AG_API void ag_scene_free(ag_scene* s);
/* Handles to named scene objects (owned by the caller once returned). */
AG_API ag_status ag_scene_get_torus(const ag_scene* s, const char* name, ag_torus** out);
AG_API ag_status ag_scene_get_bundle(const ag_scene* s, const char* name, ag_bundle** out);
AG_API ag_status ag_scene_get_isogeny(const ag_scene* s, const char* name, ag_isogeny** out);
AG_API ag_status ag_scene_get_pushforward(const ag_scene* s, const char* name,
                                          ag_sh_bundle** out);
/* Names of the bundles/pushforwards in a scene, as a JSON object. */
AG_API ag_status ag_scene_names_json(const ag_scene* s, char** json_out);
/* all_ok: 1 iff every suite expectation held.  The report is deterministic. */
AG_API ag_status ag_scene_run(const ag_scene* s, const ag_run_options* opt, char** report_json,
                              int* all_ok);
/* Console summary lines "name<TAB>kind<TAB>ok<TAB>ms\n" for the last run on
 * this thread (timings are never part of the report itself). */
AG_API const char* ag_last_run_summary(void);
AG_API ag_status ag_selftest(const ag_run_options* opt, char** report_json, int* all_ok);
AG_API ag_status ag_selftest_list(char** names_json);

#ifdef __cplusplus
}
#endif

#endif /* ABELGEN_H */
