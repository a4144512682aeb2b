#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "abelgen/theta.hpp"
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

TorusPtr product_cover2() {
  cmat per(2, 4);
  per.setZero();
  per(0, 0) = cplx(0, 2);
  per(1, 1) = cplx(0, 1);
  per(0, 2) = 1;
  per(1, 3) = 1;
  return std::make_shared<Torus>(2, per);
}

}  // namespace

TEST_CASE("section basis sizes") {
  TorusPtr e = elliptic(cplx(0, 1));
  CHECK(ThetaBasis::build(elliptic_bundle(e, 1.0)).h0() == 1);
  CHECK(ThetaBasis::build(elliptic_bundle(e, 3.0)).h0() == 3);

  TorusPtr c = product_cover2();
  cmat h(2, 2);
  h.setZero();
  h(0, 0) = 0.5;
  h(1, 1) = 2.0;
  ThetaBasis b = ThetaBasis::build(make_line_bundle(c, HermitianForm(h)));
  CHECK(b.h0() == 2);
  CHECK(b.characteristics().size() == 2);

  CHECK_THROWS_AS(ThetaBasis::build(make_line_bundle(e, HermitianForm::zero(1))), error);
}

TEST_CASE("principal theta vanishes at the half-period") {
  TorusPtr e = elliptic(cplx(0, 1));
  ThetaBasis b = ThetaBasis::build(elliptic_bundle(e, 1.0));
  rvec half(2);
  half << 0.5, 0.5;
  cvec z = e->from_lattice_coords(half);
  for (int radius : {6, 10}) {
    TruncationParams tp{1e-12, radius};
    CHECK(std::abs(b.eval_reduced(z, tp).reduced(0)) < 1e-8);
  }
  // and does not vanish nearby
  rvec q(2);
  q << 0.3, 0.3;
  TruncationParams tp;
  CHECK(std::abs(b.eval_reduced(e->from_lattice_coords(q), tp).reduced(0)) > 1e-3);
}

TEST_CASE("evaluation matches an independent series summation (elliptic type 2)") {
  // tau = i, H = 2: normalized data Z = (2i), D = (2), w = 2v, and the
  // canonical value is exp((pi/2) w^T Y^{-1} w) theta_c(w).
  TorusPtr e = elliptic(cplx(0, 1));
  ThetaBasis b = ThetaBasis::build(elliptic_bundle(e, 2.0));
  TruncationParams tp;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  cmat z(1, 1);
  z(0, 0) = cplx(0, 2);
  ivec d(1), c(1);
  d << 2;
  for (int s = 0; s < 25; ++s) {
    cvec v(1);
    v(0) = cplx(u(rng), u(rng));
    cvec vals = b.eval(v, tp);
    for (int ci = 0; ci < 2; ++ci) {
      c << ci;
      cvec w = 2.0 * v;
      cplx theta = oracles::naive_theta(z, d, c, w, 30);
      cplx expected = std::exp(0.25 * std::numbers::pi * w(0) * w(0)) * theta;
      CHECK(std::abs(vals(ci) - expected) < 1e-10 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST_CASE("evaluation matches an independent series summation (g = 2, type (1,2))") {
  // Product cover with H = diag(1/2, 2): symplectic basis (2i e1, i e2 | e1, e2),
  // D = diag(1,2), N = diag(1,2), Z = diag(i, 2i).
  TorusPtr t = product_cover2();
  cmat h(2, 2);
  h.setZero();
  h(0, 0) = 0.5;
  h(1, 1) = 2.0;
  ThetaBasis b = ThetaBasis::build(make_line_bundle(t, HermitianForm(h)));
  REQUIRE(b.h0() == 2);
  TruncationParams tp;

  cmat z(2, 2);
  z.setZero();
  z(0, 0) = cplx(0, 1);
  z(1, 1) = cplx(0, 2);
  rmat yinv(2, 2);
  yinv.setZero();
  yinv(0, 0) = 1.0;
  yinv(1, 1) = 0.5;
  ivec d(2);
  d << 1, 2;

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int s = 0; s < 15; ++s) {
    cvec v(2);
    v(0) = cplx(u(rng), u(rng));
    v(1) = cplx(u(rng), u(rng));
    cvec vals = b.eval(v, tp);
    cvec w(2);
    w(0) = v(0);
    w(1) = 2.0 * v(1);
    for (int ci = 0; ci < 2; ++ci) {
      ivec c(2);
      c << 0, ci;
      cplx theta = oracles::naive_theta(z, d, c, w, 25);
      cplx bw = (w.transpose() * yinv.cast<cplx>() * w)(0);
      cplx expected = std::exp(0.5 * std::numbers::pi * bw) * theta;
      CHECK(std::abs(vals(ci) - expected) < 1e-9 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST_CASE("automorphy identity") {
  TorusPtr e = elliptic(cplx(0, 1));
  ThetaBasis b = ThetaBasis::build(elliptic_bundle(e, 2.0));
  TruncationParams tp;

  cvec v(1);
  v(0) = cplx(0.37, -0.21);
  CHECK(check_automorphy(b, v, ivec::Zero(2), tp) < 1e-14);

  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::uniform_int_distribution<int> li(-1, 1);
  double worst = 0.0;
  for (int s = 0; s < 200; ++s) {
    cvec w(1);
    w(0) = cplx(u(rng), u(rng));
    ivec lam(2);
    lam << li(rng), li(rng);
    worst = std::max(worst, check_automorphy(b, w, lam, tp));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("a corrupted semicharacter is detected") {
  TorusPtr e = elliptic(cplx(0, 1));
  LineBundleData l = elliptic_bundle(e, 2.0);
  cvec bad_chi = l.chi.values();
  bad_chi(0) = -bad_chi(0);
  LineBundleData bad = make_line_bundle(e, l.hermitian, bad_chi);
  // The basis is built for the corrupted bundle, but we check the identity
  // against the original factor: mismatch must be visible.
  ThetaBasis b = ThetaBasis::build(bad);
  TruncationParams tp;
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  double worst = 0.0;
  for (int s = 0; s < 20; ++s) {
    cvec v(1);
    v(0) = cplx(u(rng), u(rng));
    ivec lam(2);
    lam << 1, 0;
    // residual against the uncorrupted bundle's factor
    cvec lv = e->lattice_vector(lam);
    auto e0 = b.eval_reduced(v, tp);
    auto e1 = b.eval_reduced(v + lv, tp);
    cplx j_hat = automorphy_factor_reduced(l, v, lam);
    worst = std::max(worst, (e1.reduced - j_hat * e0.reduced).cwiseAbs().maxCoeff());
  }
  CHECK(worst > 0.1);
}

TEST_CASE("radius consistency and truncation certification") {
  TorusPtr e = elliptic(cplx(0.3, 1.2));
  ThetaBasis b = ThetaBasis::build(elliptic_bundle(e, 2.0 / 1.2));
  cvec v(1);
  v(0) = cplx(0.21, 0.4);

  const double eps = 1e-12;
  int r = b.radius_for(v, eps);
  cvec a = b.eval(v, TruncationParams{eps, r});
  cvec c = b.eval(v, TruncationParams{eps, r + 4});
  CHECK((a - c).cwiseAbs().maxCoeff() <= 2 * eps * std::max(1.0, a.cwiseAbs().maxCoeff()));

  // a radius that cannot certify the bound is an error
  CHECK_THROWS_AS(b.eval(v, TruncationParams{1e-12, 1}), error);
  try {
    b.eval(v, TruncationParams{1e-12, 1});
  } catch (const error& err) {
    CHECK(err.code() == errc::truncation_insufficient);
  }
}

TEST_CASE("metric weight") {
  TorusPtr e = elliptic(cplx(0, 1));
  HermitianForm h((cmat(1, 1) << cplx(1, 0)).finished());
  CHECK(metric_weight(h, 1, cvec::Zero(1)) == doctest::Approx(1.0));
  cvec one(1);
  one(0) = cplx(1, 0);
  CHECK(metric_weight(h, 1, one) == doctest::Approx(std::exp(-std::numbers::pi)));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int s = 0; s < 20; ++s) {
    cvec v(1);
    v(0) = cplx(u(rng), u(rng));
    CHECK(metric_weight(h, 2, v) ==
          doctest::Approx(std::sqrt(metric_weight(h, 1, v))).epsilon(1e-12));
  }
}

TEST_CASE("metric pairing is lattice periodic") {
  TorusPtr e = elliptic(cplx(0, 1));
  ThetaBasis b = ThetaBasis::build(elliptic_bundle(e, 2.0));
  TruncationParams tp;
  cvec v(1);
  v(0) = cplx(0.11, 0.29);
  CHECK(pairing_periodicity_check(b, 0, 1, v, ivec::Zero(2), tp) == doctest::Approx(0.0));
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::uniform_int_distribution<int> li(-1, 1);
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    cvec w(1);
    w(0) = cplx(u(rng), u(rng));
    ivec lam(2);
    lam << li(rng), li(rng);
    worst = std::max(worst, pairing_periodicity_check(b, 0, 1, w, lam, tp));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("reduced section norms are lattice periodic") {
  // || f ||_h is a function on the torus; the reduced evaluator must respect it.
  TorusPtr e = elliptic(cplx(0.3, 1.2));
  ThetaBasis b = ThetaBasis::build(elliptic_bundle(e, 3.0 / 1.2));
  TruncationParams tp;
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::uniform_int_distribution<int> li(-2, 2);
  for (int s = 0; s < 50; ++s) {
    cvec v(1);
    v(0) = cplx(u(rng), u(rng));
    ivec lam(2);
    lam << li(rng), li(rng);
    cvec lv = e->lattice_vector(lam);
    double n0 = b.eval_reduced(v, tp).reduced.norm();
    double n1 = b.eval_reduced(v + lv, tp).reduced.norm();
    CHECK(std::abs(n0 - n1) < 1e-10 * std::max(1.0, n0));
  }
}

TEST_CASE("finite-difference curvature equals the constant form") {
  TorusPtr e = elliptic(cplx(0, 1));
  cvec v(1);
  v(0) = cplx(0.4, -0.7);
  HermitianForm h1((cmat(1, 1) << cplx(2, 0)).finished());
  CHECK(curvature_fd_error(h1, 1, v) < 1e-5);
  CHECK(curvature_fd_error(h1, 2, v) < 1e-5);

  cmat hm(2, 2);
  hm << cplx(2.0, 0.0), cplx(0.3, 0.4), cplx(0.3, -0.4), cplx(1.0, 0.0);
  HermitianForm h2(hm);
  cvec w(2);
  w(0) = cplx(0.3, 0.2);
  w(1) = cplx(-0.1, 0.5);
  CHECK(curvature_fd_error(h2, 3, w) < 1e-5);
}
