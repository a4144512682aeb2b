#ifndef ABELGEN_FUJITA_HPP
#define ABELGEN_FUJITA_HPP

#include <optional>
#include <string>
#include <vector>

#include "abelgen/common.hpp"

namespace abelgen {

// Bound-valued Fujita number of a family: least m such that omega (x) A^{m'}
// is globally generated for all m' >= m and all ample A.
struct FujitaEntry {
  enum class Kind { exact, lower_bound, upper_bound, interval };
  std::string family_id;
  int dim = 0;
  Kind kind = Kind::exact;
  int64_t a = 1;  // exact value, the single bound, or the interval lower end
  int64_t b = 1;  // interval upper end (kind == interval only)
  std::string provenance;

  int64_t lower() const;                 // always defined, >= 1
  std::optional<int64_t> upper() const;  // absent for pure lower bounds
};

FujitaEntry make_exact(std::string family_id, int dim, int64_t k, std::string provenance);
FujitaEntry make_lower(std::string family_id, int dim, int64_t k, std::string provenance);
FujitaEntry make_upper(std::string family_id, int dim, int64_t k, std::string provenance);
FujitaEntry make_interval(std::string family_id, int dim, int64_t a, int64_t b,
                          std::string provenance);

// Smooth hypersurface of degree d in P^N (very general when N = 3):
// f = max{1, N+1-d}.
FujitaEntry hypersurface_fujita(int64_t n_proj, int64_t d, bool very_general);

// Blow-up of a point on an n-dimensional abelian variety: f >= n-1.
FujitaEntry blowup_lower_bound(int64_t n);

// The built-in catalog (versioned; see fujita_catalog_version()).
std::vector<FujitaEntry> standard_entries();
const char* fujita_catalog_version();

// Exponent rule of the torus-fibration bound: L^{2m} globally generated for
// all m >= the resolved upper bound of the fibre entry.
struct ExponentRule {
  int64_t min_m;  // exponents are {2m : m >= min_m}
};
ExponentRule theorem_a_bound(const FujitaEntry& fiber);

struct FibrationEntry {
  FujitaEntry total;  // f_X
  FujitaEntry fiber;  // f_pi
  FujitaEntry base;   // f_Y
};

enum class ConjectureVerdict { consistent, violation, undecided };
const char* conjecture_verdict_name(ConjectureVerdict v);

// Decides f_X <= f_pi * f_Y from the recorded bounds where possible.
ConjectureVerdict conjecture_check(const FibrationEntry& e);

}  // namespace abelgen

#endif
