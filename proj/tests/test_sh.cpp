#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "abelgen/sh.hpp"
#include "oracles.hpp"

using namespace abelgen;

namespace {

TorusPtr elliptic(cplx tau) {
  cmat per(1, 2);
  per(0, 0) = tau;
  per(0, 1) = cplx(1, 0);
  return std::make_shared<Torus>(1, per);
}

LineBundleData elliptic_bundle(TorusPtr t, double h) {
  return make_line_bundle(t, HermitianForm((cmat(1, 1) << cplx(h, 0)).finished()));
}

struct Deg2Elliptic {
  TorusPtr cover = elliptic(cplx(0, 2));
  TorusPtr base = elliptic(cplx(0, 1));
  std::shared_ptr<Isogeny> p;
  Deg2Elliptic() {
    cmat alpha(1, 1);
    alpha(0, 0) = 1.0;
    imat m(2, 2);
    m << 2, 0, 0, 1;
    p = std::make_shared<Isogeny>(cover, base, alpha, m);
  }
};

struct Deg2Surface {
  TorusPtr cover, base;
  std::shared_ptr<Isogeny> p;
  explicit Deg2Surface(int64_t deg = 2) {
    cmat perB(2, 4);
    perB.setZero();
    perB(0, 0) = cplx(0, 1);
    perB(1, 1) = cplx(0, 1);
    perB(0, 2) = 1;
    perB(1, 3) = 1;
    base = std::make_shared<Torus>(2, perB);
    cmat perC = perB;
    perC(0, 0) = cplx(0, static_cast<double>(deg));
    cover = std::make_shared<Torus>(2, perC);
    imat m = imat::Identity(4, 4).eval();
    m(0, 0) = deg;
    p = std::make_shared<Isogeny>(cover, base, cmat::Identity(2, 2), m);
  }
};

LineBundleData surface_bundle(TorusPtr t, double h1, double h2) {
  cmat h(2, 2);
  h.setZero();
  h(0, 0) = h1;
  h(1, 1) = h2;
  return make_line_bundle(t, HermitianForm(h));
}

std::shared_ptr<Isogeny> identity_isogeny(TorusPtr t) {
  int g = t->dim();
  return std::make_shared<Isogeny>(t, t, cmat::Identity(g, g),
                                   imat::Identity(2 * g, 2 * g).eval());
}

}  // namespace

TEST_CASE("pushforward ranks and section counts") {
  Deg2Elliptic d;
  SHBundle e2 = SHBundle::from_pushforward(d.p, elliptic_bundle(d.cover, 1.0));
  CHECK(e2.rank() == 2);
  CHECK(e2.h0() == 2);
  CHECK(e2.is_ample());

  SHBundle eprim = SHBundle::from_pushforward(d.p, elliptic_bundle(d.cover, 0.5));
  CHECK(eprim.rank() == 2);
  CHECK(eprim.h0() == 1);

  SHBundle eid = SHBundle::from_pushforward(identity_isogeny(d.base),
                                            elliptic_bundle(d.base, 2.0));
  CHECK(eid.rank() == 1);
  CHECK(eid.h0() == 2);
}

TEST_CASE("pushforward requires the bundle on the source") {
  Deg2Elliptic d;
  CHECK_THROWS_AS(SHBundle::from_pushforward(d.p, elliptic_bundle(d.base, 1.0)), error);
}

TEST_CASE("descended Hermitian form is integral and Chern-consistent") {
  Deg2Elliptic d;
  SHBundle e2 = SHBundle::from_pushforward(d.p, elliptic_bundle(d.cover, 1.0));
  imat down = integral_alt_form(*d.base, e2.descended_form());
  CHECK(down(0, 1) == 2);  // c1(det E) of type (2)
}

TEST_CASE("pullback_split returns kernel translates with the right sections") {
  Deg2Elliptic d;
  LineBundleData l = elliptic_bundle(d.cover, 1.0);  // type (2), h0 = 2
  SHBundle e = SHBundle::from_pushforward(d.p, l);
  auto split = pullback_split(*d.p, e);
  REQUIRE(split.size() == 2);
  int64_t total = 0;
  for (const auto& b : split) total += h0(b);
  CHECK(total == d.p->degree() * h0(l));

  SHBundle eid = SHBundle::from_pushforward(identity_isogeny(d.base),
                                            elliptic_bundle(d.base, 2.0));
  auto split_id = pullback_split(eid.isogeny(), eid);
  REQUIRE(split_id.size() == 1);
  CHECK((split_id[0].chi.values() - eid.upstairs().chi.values()).cwiseAbs().maxCoeff() < 1e-12);

  // multiplication by 2: four translates
  cmat alpha(1, 1);
  alpha(0, 0) = 2.0;
  imat m(2, 2);
  m << 2, 0, 0, 2;
  auto mul2 = std::make_shared<Isogeny>(d.base, d.base, alpha, m);
  SHBundle e4 = SHBundle::from_pushforward(mul2, elliptic_bundle(d.base, 1.0));
  CHECK(pullback_split(*mul2, e4).size() == 4);
}

TEST_CASE("tensor power sections") {
  Deg2Elliptic d;
  LineBundleData l = elliptic_bundle(d.cover, 1.0);
  SHBundle e = SHBundle::from_pushforward(d.p, l);

  auto m1 = tensor_power_sections(e, 1);
  REQUIRE(m1.size() == 1);
  CHECK(m1[0].kernel_indices.empty());
  CHECK(m1[0].basis.h0() == 2);

  auto m2 = tensor_power_sections(e, 2);
  REQUIRE(m2.size() == 2);
  int64_t total = 0;
  for (const auto& s : m2) {
    CHECK(bundle_type(s.bundle)(0) == 4);  // type (4) upstairs
    total += s.basis.h0();
  }
  CHECK(total == 8);

  // principal upstairs: two summands of h0 = 2, total 4
  SHBundle eprim = SHBundle::from_pushforward(d.p, elliptic_bundle(d.cover, 0.5));
  auto p2 = tensor_power_sections(eprim, 2);
  REQUIRE(p2.size() == 2);
  int64_t ptotal = 0;
  for (const auto& s : p2) ptotal += s.basis.h0();
  CHECK(ptotal == 4);
}

TEST_CASE("tensor power total dimension matches the surface Euler characteristic") {
  Deg2Surface d;
  LineBundleData l = surface_bundle(d.cover, 0.5, 2.0);  // type (1,2)
  SHBundle e = SHBundle::from_pushforward(d.p, l);
  auto m2 = tensor_power_sections(e, 2);
  int64_t total = 0;
  for (const auto& s : m2) total += s.basis.h0();
  // chi(E^{(x)2}) = c1(E^{(x)2})^2 / (2 r^2) = 2 c1(E)^2
  imat down = integral_alt_form(*d.base, e.descended_form());
  int64_t c1e_sq = 2 * oracles::pfaffian4(down);
  CHECK(total == 2 * c1e_sq);
}

TEST_CASE("fiber evaluation shapes and ranks") {
  Deg2Elliptic d;
  TruncationParams tp;

  SHBundle eprim = SHBundle::from_pushforward(d.p, elliptic_bundle(d.cover, 0.5));
  cvec a(1);
  a(0) = cplx(0.23, 0.41);
  cmat mprim = fiber_eval(eprim, a, tp);
  CHECK(mprim.rows() == 1);
  CHECK(mprim.cols() == 2);

  SHBundle e2 = SHBundle::from_pushforward(d.p, elliptic_bundle(d.cover, 1.0));
  cmat m2 = fiber_eval(e2, cvec::Zero(1), tp);
  CHECK(m2.rows() == 2);
  CHECK(m2.cols() == 2);
  // rank via the public (raw) values agrees with the metric-weighted frame
  ThetaBasis basis = ThetaBasis::build(e2.upstairs());
  cmat m2r = fiber_eval_reduced(e2, basis, cvec::Zero(1), tp);
  Eigen::JacobiSVD<cmat> raw(m2), red(m2r);
  double raw_rank2 = raw.singularValues()(1) / raw.singularValues()(0);
  double red_rank2 = red.singularValues()(1) / red.singularValues()(0);
  CHECK((raw_rank2 > 1e-6) == (red_rank2 > 1e-6));

  // identity isogeny: fiber evaluation coincides with section evaluation
  SHBundle eid = SHBundle::from_pushforward(identity_isogeny(d.base),
                                            elliptic_bundle(d.base, 2.0));
  ThetaBasis bid = ThetaBasis::build(eid.upstairs());
  cvec at(1);
  at(0) = cplx(0.3, 0.6);
  cvec reduced_at = d.base->reduce(at);
  cmat fid = fiber_eval(eid, reduced_at, tp);
  cvec direct = bid.eval(reduced_at, tp);
  CHECK((fid.col(0) - direct).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("explicit semirepresentations satisfy the cocycle and unitarity") {
  Deg2Elliptic d;
  Deg2Surface s2;
  Deg2Surface s3(3);
  std::vector<SHBundle> corpus;
  corpus.push_back(SHBundle::from_pushforward(d.p, elliptic_bundle(d.cover, 1.0)));
  corpus.push_back(SHBundle::from_pushforward(d.p, elliptic_bundle(d.cover, 0.5)));
  corpus.push_back(SHBundle::from_pushforward(s2.p, surface_bundle(s2.cover, 0.5, 2.0)));
  corpus.push_back(SHBundle::from_pushforward(s3.p, surface_bundle(s3.cover, 1.0 / 3.0, 3.0)));

  for (const auto& e : corpus) {
    SemiRep rep = explicit_semirep(e);
    CHECK(rep.rank == e.rank());
    CHECK(semirep_cocycle_residual(rep, *e.base()) < 1e-10);
    for (const auto& g : rep.generators) {
      CHECK((g.adjoint() * g - cmat::Identity(rep.rank, rep.rank)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("verify_semihomogeneity") {
  Deg2Elliptic d;
  LineBundleData l2 = elliptic_bundle(d.base, 2.0);

  SHBundle rank1 = SHBundle::from_semirep(d.base, semirep_from_line_bundle(l2));
  CHECK(verify_semihomogeneity(rank1, cvec::Zero(1), 5, 99) < 1e-14);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  cvec a(1);
  a(0) = cplx(u(rng), u(rng));
  CHECK(verify_semihomogeneity(rank1, a, 50, 100) < 1e-9);

  SHBundle push = SHBundle::from_pushforward(d.p, elliptic_bundle(d.cover, 1.0));
  SHBundle rank2 = SHBundle::from_semirep(push.base(), explicit_semirep(push));
  CHECK(verify_semihomogeneity(rank2, a, 50, 101) < 1e-9);

  // a pushforward realization has no explicit data to verify against
  CHECK_THROWS_AS(verify_semihomogeneity(push, a, 1, 1), error);
}

TEST_CASE("chern total coefficients") {
  auto c1 = chern_total_coefficients(1);
  REQUIRE(c1.size() == 2);
  CHECK(c1[0] == rational(1));
  CHECK(c1[1] == rational(1));

  auto c2 = chern_total_coefficients(2);
  REQUIRE(c2.size() == 3);
  CHECK(c2[1] == rational(1));       // binom(2,1)/2
  CHECK(c2[2] == rational(1, 4));    // binom(2,2)/4

  CHECK(chern_surface_c2(2, 8) == 2);
  CHECK(chern_surface_c2(1, 6) == 0);
  CHECK_THROWS_AS(chern_surface_c2(2, 2), error);
  try {
    chern_surface_c2(2, 2);
  } catch (const error& e) {
    CHECK(e.code() == errc::non_integral_chern_class);
  }

  imat gram(2, 2);
  gram << 0, 1, 1, 0;
  ivec c(2);
  c << 2, 2;
  CHECK(ns_self_intersection(gram, c) == 8);
}

TEST_CASE("surface chi consistency") {
  Deg2Surface s2;
  ChiSurfaceReport r2 = chi_surface_consistency(*s2.p, surface_bundle(s2.cover, 0.5, 2.0));
  CHECK(r2.rank == 2);
  CHECK(r2.chi_upstairs == 2);
  CHECK(r2.c1_l_squared == 4);
  CHECK(r2.c1_e_squared == 8);
  CHECK(r2.chi_downstairs == 2);

  Deg2Surface s3(3);
  ChiSurfaceReport r3 = chi_surface_consistency(*s3.p, surface_bundle(s3.cover, 1.0 / 3.0, 3.0));
  CHECK(r3.rank == 3);
  CHECK(r3.chi_upstairs == 3);
  CHECK(r3.c1_e_squared == 18);
  CHECK(r3.chi_downstairs == 3);

  // identity isogeny: trivially consistent
  ChiSurfaceReport rid =
      chi_surface_consistency(*identity_isogeny(s2.base), surface_bundle(s2.base, 1.0, 2.0));
  CHECK(rid.rank == 1);
  CHECK(rid.chi_upstairs == rid.chi_downstairs);
}

TEST_CASE("sh pairing periodicity at rank 2") {
  Deg2Elliptic d;
  SHBundle e = SHBundle::from_pushforward(d.p, elliptic_bundle(d.cover, 1.0));
  ThetaBasis basis = ThetaBasis::build(e.upstairs());
  TruncationParams tp;
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::uniform_int_distribution<int> li(-1, 1);
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    cvec v(1);
    v(0) = cplx(u(rng), u(rng));
    ivec lam(2);
    lam << li(rng), li(rng);
    worst = std::max(worst, sh_pairing_periodicity_check(e, basis, 0, 1, v, lam, tp));
  }
  CHECK(worst < 1e-8);
}
