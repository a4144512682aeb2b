#include "abelgen/mukai.hpp"

#include <algorithm>
#include <numeric>

namespace abelgen {

NSLattice make_ns_lattice(imat gram) {
  require(gram.rows() == gram.cols() && gram.rows() >= 1, errc::invalid_argument,
          "NS Gram matrix must be square");
  require(gram == gram.transpose(), errc::invalid_argument, "NS Gram matrix must be symmetric");
  for (int i = 0; i < gram.rows(); ++i)
    require(gram(i, i) % 2 == 0, errc::invalid_argument,
            "NS lattice of an abelian surface is even");
  return NSLattice{std::move(gram)};
}

namespace {
void check_vector(const NSLattice& ns, const MukaiVector& v) {
  require(v.c1.size() == ns.gram.rows(), errc::lattice_mismatch,
          "Mukai vector does not match the NS lattice rank");
}
}  // namespace

int64_t mukai_pair(const NSLattice& ns, const MukaiVector& v, const MukaiVector& w) {
  check_vector(ns, v);
  check_vector(ns, w);
  int64_t dot = (v.c1.transpose() * ns.gram * w.c1)(0);
  return dot - v.r * w.ch2 - w.r * v.ch2;
}

bool is_primitive(const MukaiVector& v) {
  int64_t g = std::abs(v.r);
  for (int i = 0; i < v.c1.size(); ++i) g = std::gcd(g, std::abs(v.c1(i)));
  g = std::gcd(g, std::abs(v.ch2));
  require(g != 0, errc::zero_vector, "primitivity is undefined for the zero vector");
  return g == 1;
}

bool is_positive(const NSLattice& ns, const MukaiVector& v,
                 const std::optional<ConeDescription>& cone) {
  check_vector(ns, v);
  if (v.r > 0) return true;
  if (v.r < 0) return false;
  bool c1_zero = v.c1.isZero();
  if (c1_zero) return v.ch2 < 0;
  // r = 0, c1 != 0: need effectivity of c1.
  require(cone.has_value(), errc::effectivity_undecidable,
          "no cone description supplied to classify c1");
  for (const ivec& a : cone->inequalities) {
    require(a.size() == v.c1.size(), errc::lattice_mismatch,
            "cone inequality does not match the NS lattice rank");
    if ((a.transpose() * v.c1)(0) < 0) return false;
  }
  return v.ch2 != 0;
}

int64_t moduli_dim(const NSLattice& ns, const MukaiVector& v) {
  return mukai_pair(ns, v, v) + 2;
}

AlbaneseFiber albanese_fiber(const NSLattice& ns, const MukaiVector& v) {
  int64_t q = mukai_pair(ns, v, v);
  require(q % 2 == 0, errc::hypothesis_not_met, "<v,v> must be even");
  require(q >= 6, errc::hypothesis_not_met, "<v,v> >= 6 is required");
  AlbaneseFiber out;
  out.kummer_index = q / 2 - 1;
  out.fiber_dim = 2 * out.kummer_index;
  return out;
}

const char* gate_verdict_name(GateVerdict v) {
  switch (v) {
    case GateVerdict::gg: return "GG";
    case GateVerdict::gg_codim_one: return "GG_CODIM_ONE";
    case GateVerdict::not_covered: return "NOT_COVERED";
  }
  return "UNKNOWN";
}

GateReport theorem_b_gate(const NSLattice& ns, const MukaiVector& v, int64_t m,
                          bool fixed_determinant, std::optional<int64_t> hilbert_case_n) {
  check_vector(ns, v);
  GateReport rep;
  auto add = [&](std::string name, HypothesisStatus st, std::string detail) {
    rep.checklist.push_back({std::move(name), st, std::move(detail)});
  };

  bool zero = v.r == 0 && v.c1.isZero() && v.ch2 == 0;
  bool primitive = !zero && is_primitive(v);
  add("v primitive", primitive ? HypothesisStatus::verified : HypothesisStatus::failed,
      zero ? "zero vector" : (primitive ? "gcd of entries is 1" : "entries share a factor"));

  bool m_ok = m >= 2;
  add("m >= 2", m_ok ? HypothesisStatus::verified : HypothesisStatus::failed,
      "requested power " + std::to_string(m));

  int64_t q = zero ? 0 : mukai_pair(ns, v, v);
  add("<v,v>", q >= 6 ? HypothesisStatus::verified : HypothesisStatus::failed,
      "<v,v> = " + std::to_string(q));

  bool hilbert_shape = v.r == 1 && v.c1.isZero() && v.ch2 <= -2;
  if (hilbert_case_n.has_value()) {
    require(hilbert_shape && *hilbert_case_n == -v.ch2, errc::invalid_argument,
            "hilbert_case_n does not match the Mukai vector (1,0,-n)");
  }

  add("Gieseker stability wrt H", HypothesisStatus::assumed, "moduli input, not verified here");
  add("H sufficiently general", HypothesisStatus::assumed,
      "generality in the ample cone cannot be certified from lattice data");

  if (!primitive || !m_ok) {
    rep.verdict = GateVerdict::not_covered;
    return rep;
  }
  if (fixed_determinant && hilbert_shape && v.ch2 == -2) {
    // S^[2] with fixed determinant: the Albanese fibre is a K3 surface.
    rep.verdict = GateVerdict::gg;
    add("Hilbert scheme case n = 2", HypothesisStatus::verified, "v = (1,0,-2), fixed determinant");
    return rep;
  }
  if (q >= 6) {
    rep.verdict = GateVerdict::gg_codim_one;
    return rep;
  }
  rep.verdict = GateVerdict::not_covered;
  return rep;
}

RRPolynomial make_rr_polynomial(int n, std::vector<rational> coeffs) {
  require(n >= 0, errc::invalid_argument, "dimension must be nonnegative");
  require(static_cast<int>(coeffs.size()) <= n + 1, errc::invalid_argument,
          "RR polynomial degree exceeds the dimension");
  return RRPolynomial{n, std::move(coeffs)};
}

rational rr_eval(const RRPolynomial& p, const rational& x) {
  rational acc(0);
  for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

bool rr_monotone(const RRPolynomial& p, const std::vector<int64_t>& range, bool increasing) {
  if (range.size() < 2) return false;
  std::vector<int64_t> pts = range;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  for (size_t i = 1; i < pts.size(); ++i) {
    rational a = rr_eval(p, rational(pts[i - 1]));
    rational b = rr_eval(p, rational(pts[i]));
    if (increasing ? !(a < b) : !(b < a)) return false;
  }
  return true;
}

}  // namespace abelgen
