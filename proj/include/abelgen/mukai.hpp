#ifndef ABELGEN_MUKAI_HPP
#define ABELGEN_MUKAI_HPP

#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "abelgen/common.hpp"

namespace abelgen {

using rational = boost::rational<int64_t>;

// Neron-Severi lattice of an abelian surface: even symmetric Gram matrix.
struct NSLattice {
  imat gram;
};

NSLattice make_ns_lattice(imat gram);

struct MukaiVector {
  int64_t r = 0;
  ivec c1;
  int64_t ch2 = 0;
};

// <v,w> = c1(v).c1(w) - r(v) ch2(w) - r(w) ch2(v).
int64_t mukai_pair(const NSLattice& ns, const MukaiVector& v, const MukaiVector& w);

bool is_primitive(const MukaiVector& v);  // throws zero_vector on v = 0

// Effectivity of c1 delegated to a user-supplied cone description: effective
// iff c1 != 0 and a.c1 >= 0 for every listed inequality.
struct ConeDescription {
  std::vector<ivec> inequalities;
};

bool is_positive(const NSLattice& ns, const MukaiVector& v,
                 const std::optional<ConeDescription>& cone);

int64_t moduli_dim(const NSLattice& ns, const MukaiVector& v);

struct AlbaneseFiber {
  int64_t kummer_index;  // n = <v,v>/2 - 1
  int64_t fiber_dim;     // 2n
};
AlbaneseFiber albanese_fiber(const NSLattice& ns, const MukaiVector& v);

enum class GateVerdict { gg, gg_codim_one, not_covered };
const char* gate_verdict_name(GateVerdict v);

enum class HypothesisStatus { verified, assumed, failed };
struct HypothesisCheck {
  std::string name;
  HypothesisStatus status;
  std::string detail;
};

struct GateReport {
  GateVerdict verdict = GateVerdict::not_covered;
  std::vector<HypothesisCheck> checklist;
};

GateReport theorem_b_gate(const NSLattice& ns, const MukaiVector& v, int64_t m,
                          bool fixed_determinant, std::optional<int64_t> hilbert_case_n = {});

struct RRPolynomial {
  int n = 0;  // complex dimension; degree of the polynomial is <= n
  std::vector<rational> coeffs;
};

RRPolynomial make_rr_polynomial(int n, std::vector<rational> coeffs);
rational rr_eval(const RRPolynomial& p, const rational& x);
// Strict monotonicity over a finite set of naturals, in the given direction.
bool rr_monotone(const RRPolynomial& p, const std::vector<int64_t>& range, bool increasing);

}  // namespace abelgen

#endif
