#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "abelgen/mukai.hpp"

using namespace abelgen;

namespace {

NSLattice rank1() { return make_ns_lattice((imat(1, 1) << 2).finished()); }

MukaiVector hilbert(int64_t n) { return MukaiVector{1, ivec::Zero(1), -n}; }

MukaiVector vec(int64_t r, std::initializer_list<int64_t> c1, int64_t ch2) {
  MukaiVector v;
  v.r = r;
  v.c1.resize(static_cast<int>(c1.size()));
  int i = 0;
  for (int64_t x : c1) v.c1(i++) = x;
  v.ch2 = ch2;
  return v;
}

}  // namespace

TEST_CASE("mukai pairing values") {
  NSLattice ns = rank1();
  for (int64_t n = 1; n <= 10; ++n) CHECK(mukai_pair(ns, hilbert(n), hilbert(n)) == 2 * n);
  CHECK(mukai_pair(ns, vec(0, {0}, -1), vec(1, {0}, 0)) == 1);
}

TEST_CASE("mukai pairing is a symmetric bilinear integer form") {
  NSLattice ns = make_ns_lattice((imat(2, 2) << 0, 1, 1, 0).finished());
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> d(-6, 6);
  auto rnd = [&]() {
    MukaiVector v;
    v.r = d(rng);
    v.c1.resize(2);
    v.c1 << d(rng), d(rng);
    v.ch2 = d(rng);
    return v;
  };
  for (int s = 0; s < 100; ++s) {
    MukaiVector a = rnd(), b = rnd(), c = rnd();
    CHECK(mukai_pair(ns, a, b) == mukai_pair(ns, b, a));
    MukaiVector sum;
    sum.r = a.r + b.r;
    sum.c1 = a.c1 + b.c1;
    sum.ch2 = a.ch2 + b.ch2;
    CHECK(mukai_pair(ns, sum, c) == mukai_pair(ns, a, c) + mukai_pair(ns, b, c));
  }
}

TEST_CASE("primitivity") {
  CHECK(is_primitive(hilbert(3)));
  CHECK_FALSE(is_primitive(vec(2, {0}, -4)));
  CHECK(is_primitive(vec(0, {2}, 3)));
  CHECK_THROWS_AS(is_primitive(vec(0, {0}, 0)), error);
  try {
    is_primitive(vec(0, {0}, 0));
  } catch (const error& e) {
    CHECK(e.code() == errc::zero_vector);
  }
}

TEST_CASE("positivity trichotomy") {
  NSLattice ns = rank1();
  CHECK(is_positive(ns, vec(1, {7}, -9), std::nullopt));
  CHECK_FALSE(is_positive(ns, vec(-1, {0}, 0), std::nullopt));
  CHECK(is_positive(ns, vec(0, {0}, -2), std::nullopt));
  CHECK_FALSE(is_positive(ns, vec(0, {0}, 5), std::nullopt));

  // r = 0, c1 != 0 needs the cone input
  CHECK_THROWS_AS(is_positive(ns, vec(0, {1}, 2), std::nullopt), error);
  try {
    is_positive(ns, vec(0, {1}, 2), std::nullopt);
  } catch (const error& e) {
    CHECK(e.code() == errc::effectivity_undecidable);
  }
  ConeDescription cone;
  cone.inequalities.push_back((ivec(1) << 1).finished());
  CHECK(is_positive(ns, vec(0, {1}, 2), cone));
  CHECK_FALSE(is_positive(ns, vec(0, {-1}, 2), cone));
  CHECK_FALSE(is_positive(ns, vec(0, {1}, 0), cone));  // a = 0
}

TEST_CASE("moduli dimension and Albanese fibre") {
  NSLattice ns = rank1();
  MukaiVector v3 = hilbert(3);
  CHECK(moduli_dim(ns, v3) == 8);
  AlbaneseFiber fib = albanese_fiber(ns, v3);
  CHECK(fib.kummer_index == 2);
  CHECK(fib.fiber_dim == 4);

  for (int64_t n = 3; n <= 10; ++n) {
    MukaiVector v = hilbert(n);
    CHECK(moduli_dim(ns, v) == 2 * n + 2);
    AlbaneseFiber f = albanese_fiber(ns, v);
    CHECK(moduli_dim(ns, v) - f.fiber_dim == 4);  // the S x S^ base
  }

  CHECK_THROWS_AS(albanese_fiber(ns, hilbert(2)), error);  // <v,v> = 4
  try {
    albanese_fiber(ns, hilbert(2));
  } catch (const error& e) {
    CHECK(e.code() == errc::hypothesis_not_met);
  }
}

TEST_CASE("theorem b gate") {
  NSLattice ns = rank1();
  CHECK(theorem_b_gate(ns, hilbert(2), 2, true).verdict == GateVerdict::gg);
  CHECK(theorem_b_gate(ns, hilbert(2), 5, true).verdict == GateVerdict::gg);
  CHECK(theorem_b_gate(ns, hilbert(2), 1, true).verdict == GateVerdict::not_covered);
  CHECK(theorem_b_gate(ns, hilbert(2), 2, false).verdict == GateVerdict::not_covered);
  for (int64_t n = 3; n <= 6; ++n) {
    CHECK(theorem_b_gate(ns, hilbert(n), 2, false).verdict == GateVerdict::gg_codim_one);
    CHECK(theorem_b_gate(ns, hilbert(n), 2, true).verdict == GateVerdict::gg_codim_one);
  }
  // the gate never passes an imprimitive vector
  CHECK(theorem_b_gate(ns, vec(2, {0}, -4), 2, false).verdict == GateVerdict::not_covered);
  CHECK(theorem_b_gate(ns, vec(2, {0}, -4), 2, true).verdict == GateVerdict::not_covered);

  GateReport rep = theorem_b_gate(ns, hilbert(2), 2, true);
  bool saw_assumed = false;
  for (const auto& h : rep.checklist)
    if (h.status == HypothesisStatus::assumed) saw_assumed = true;
  CHECK(saw_assumed);

  CHECK_THROWS_AS(theorem_b_gate(ns, hilbert(3), 2, true, 4), error);  // n mismatch
}

TEST_CASE("rr polynomial evaluation and monotonicity") {
  RRPolynomial p = make_rr_polynomial(1, {rational(2), rational(1, 2)});
  CHECK(rr_eval(p, rational(2)) == rational(3));

  std::vector<int64_t> range;
  for (int64_t x = 1; x <= 10; ++x) range.push_back(x);
  CHECK(rr_monotone(p, range, true));
  CHECK_FALSE(rr_monotone(p, range, false));

  RRPolynomial constant = make_rr_polynomial(2, {rational(5)});
  CHECK_FALSE(rr_monotone(constant, range, true));
  CHECK_FALSE(rr_monotone(constant, range, false));

  RRPolynomial down = make_rr_polynomial(1, {rational(10), rational(-1, 3)});
  CHECK(rr_monotone(down, range, false));

  CHECK_THROWS_AS(make_rr_polynomial(1, {rational(1), rational(1), rational(1)}), error);
}

TEST_CASE("ns lattice validation") {
  CHECK_THROWS_AS(make_ns_lattice((imat(2, 2) << 0, 1, 2, 0).finished()), error);
  CHECK_THROWS_AS(make_ns_lattice((imat(1, 1) << 3).finished()), error);  // odd diagonal
  NSLattice ns = rank1();
  CHECK_THROWS_AS(mukai_pair(ns, vec(1, {0, 0}, 1), vec(1, {0, 0}, 1)), error);
}
