#include "abelgen/fujita.hpp"

#include <algorithm>

namespace abelgen {

namespace {
void validate(const FujitaEntry& e) {
  require(e.a >= 1, errc::invalid_argument, "Fujita numbers are >= 1");
  if (e.kind == FujitaEntry::Kind::interval)
    require(e.b >= e.a, errc::invalid_argument, "interval bounds out of order");
}
}  // namespace

int64_t FujitaEntry::lower() const {
  switch (kind) {
    case Kind::exact:
    case Kind::lower_bound:
    case Kind::interval:
      return a;
    case Kind::upper_bound:
      return 1;
  }
  return 1;
}

std::optional<int64_t> FujitaEntry::upper() const {
  switch (kind) {
    case Kind::exact:
    case Kind::upper_bound:
      return a;
    case Kind::interval:
      return b;
    case Kind::lower_bound:
      return std::nullopt;
  }
  return std::nullopt;
}

FujitaEntry make_exact(std::string family_id, int dim, int64_t k, std::string provenance) {
  FujitaEntry e{std::move(family_id), dim, FujitaEntry::Kind::exact, k, k, std::move(provenance)};
  validate(e);
  return e;
}

FujitaEntry make_lower(std::string family_id, int dim, int64_t k, std::string provenance) {
  FujitaEntry e{std::move(family_id), dim, FujitaEntry::Kind::lower_bound, k, k,
                std::move(provenance)};
  validate(e);
  return e;
}

FujitaEntry make_upper(std::string family_id, int dim, int64_t k, std::string provenance) {
  FujitaEntry e{std::move(family_id), dim, FujitaEntry::Kind::upper_bound, k, k,
                std::move(provenance)};
  validate(e);
  return e;
}

FujitaEntry make_interval(std::string family_id, int dim, int64_t a, int64_t b,
                          std::string provenance) {
  FujitaEntry e{std::move(family_id), dim, FujitaEntry::Kind::interval, a, b,
                std::move(provenance)};
  validate(e);
  return e;
}

FujitaEntry hypersurface_fujita(int64_t n_proj, int64_t d, bool very_general) {
  bool generic_case = n_proj >= 4 && d >= 2;
  bool threefold_case = n_proj == 3 && d >= 4 && very_general;
  require(generic_case || threefold_case, errc::hypothesis_not_met,
          "hypersurface formula needs N >= 4, d >= 2, or N = 3, d >= 4 very general");
  int64_t value = std::max<int64_t>(1, n_proj + 1 - d);
  return make_exact("hypersurface(N=" + std::to_string(n_proj) + ",d=" + std::to_string(d) + ")",
                    static_cast<int>(n_proj - 1), value,
                    "Pic generated by O(1), omega = O(d-N-1); Lefschetz for N>=4, "
                    "Noether-Lefschetz for very general N=3");
}

FujitaEntry blowup_lower_bound(int64_t n) {
  require(n >= 2, errc::hypothesis_not_met, "blow-up bound needs dimension >= 2");
  return make_lower("abelian-blowup(n=" + std::to_string(n) + ")", static_cast<int>(n), n - 1,
                    "restriction to the exceptional divisor is O(m+1-n)");
}

const char* fujita_catalog_version() { return "1"; }

std::vector<FujitaEntry> standard_entries() {
  std::vector<FujitaEntry> out;
  out.push_back(make_exact("curve", 1, 2,
                           "K + 2A is basepoint-free on a curve; K + P fails at P"));
  out.push_back(make_upper("surface", 2, 3, "Reider's theorem"));
  out.push_back(make_upper("surface-minimal-kodaira0", 2, 2,
                           "Reider's theorem with K numerically trivial"));
  out.push_back(make_upper("hyperelliptic-variety", 0, 2,
                           "L^2 globally generated on etale torus quotients"));
  for (int64_t n = 3; n <= 9; n += 2) {
    out.push_back(make_lower("weighted-cy(n=" + std::to_string(n) + ")", static_cast<int>(n),
                             n + 1,
                             "degree 2n+2 hypersurface in P(1^n,2,n+2)"));
  }
  out.push_back(make_exact("abelian-variety", 0, 2, "Lefschetz: A^2 basepoint-free"));
  out.push_back(make_exact("k3-surface", 2, 2, "Reider's theorem with trivial K"));
  return out;
}

ExponentRule theorem_a_bound(const FujitaEntry& fiber) {
  std::optional<int64_t> up = fiber.upper();
  require(up.has_value(), errc::unbounded_entry,
          "exponent rule needs a resolved upper bound for the fibre");
  return ExponentRule{*up};
}

const char* conjecture_verdict_name(ConjectureVerdict v) {
  switch (v) {
    case ConjectureVerdict::consistent: return "CONSISTENT";
    case ConjectureVerdict::violation: return "VIOLATION";
    case ConjectureVerdict::undecided: return "UNDECIDED";
  }
  return "UNKNOWN";
}

ConjectureVerdict conjecture_check(const FibrationEntry& e) {
  // f_X <= upper(total); f_pi * f_Y >= lower(fiber) * lower(base):
  // upper(total) <= lower product certifies the inequality.
  std::optional<int64_t> up_total = e.total.upper();
  if (up_total.has_value() && *up_total <= e.fiber.lower() * e.base.lower())
    return ConjectureVerdict::consistent;
  // lower(total) > upper(fiber) * upper(base) certifies a violation.
  std::optional<int64_t> up_f = e.fiber.upper();
  std::optional<int64_t> up_b = e.base.upper();
  if (up_f.has_value() && up_b.has_value() && e.total.lower() > *up_f * *up_b)
    return ConjectureVerdict::violation;
  return ConjectureVerdict::undecided;
}

}  // namespace abelgen
