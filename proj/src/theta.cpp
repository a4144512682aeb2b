#include "abelgen/theta.hpp"

#include <cmath>
#include <numbers>

namespace abelgen {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kDropMagnitude = 1e-22;  // past-the-peak terms below this are tail
}  // namespace

ThetaBasis::ThetaBasis(LineBundleData l) : bundle_(std::move(l)) {}

ThetaBasis ThetaBasis::build(const LineBundleData& l) {
  require(is_ample(l), errc::not_ample, "theta basis requires an ample bundle");
  ThetaBasis b(l);
  const Torus& t = *l.torus;
  const int g = t.dim();

  FrobeniusResult fnf = frobenius_normal_form(IntAltForm(l.e_int));
  b.basis_change_ = fnf.basis_change;
  b.divisors_ = fnf.divisors;

  cmat sym_basis = t.periods() * fnf.basis_change.cast<double>();
  cmat a_blk = sym_basis.leftCols(g);
  cmat b_blk = sym_basis.rightCols(g);
  rmat d = rmat::Zero(g, g);
  for (int i = 0; i < g; ++i) d(i, i) = static_cast<double>(fnf.divisors(i));

  b.n_ = d * b_blk.partialPivLu().inverse();
  b.z_ = b.n_ * a_blk;
  double zscale = std::max(1.0, b.z_.cwiseAbs().maxCoeff());
  require((b.z_ - b.z_.transpose()).cwiseAbs().maxCoeff() <= 1e-8 * zscale, errc::internal,
          "normalized period matrix is not symmetric");
  b.z_ = 0.5 * (b.z_ + b.z_.transpose());
  b.x_ = b.z_.real();
  b.y_ = b.z_.imag();
  Eigen::SelfAdjointEigenSolver<rmat> es(b.y_);
  require(es.info() == Eigen::Success && es.eigenvalues().minCoeff() > 0, errc::internal,
          "normalized period matrix is not in the Siegel domain");
  b.y_min_eig_ = es.eigenvalues().minCoeff();
  b.y_inv_ = b.y_.inverse();

  // Solve the semicharacter equation chi = chi0 * exp(2 pi i E(x, .)).
  cvec chi0 = canonical_semicharacter_values(t, l.e_int);
  const int n2 = 2 * g;
  rvec target(n2);
  for (int i = 0; i < n2; ++i) {
    cplx ratio = l.chi.values()(i) * std::conj(chi0(i));
    target(i) = std::arg(ratio) / (2.0 * kPi);
  }
  rmat e_real = l.e_int.cast<double>();
  rvec xi = e_real.partialPivLu().solve(-target);
  b.shift_ = t.from_lattice_coords(xi);

  // Characteristics c with 0 <= c_i < d_i.
  ivec c = ivec::Zero(g);
  while (true) {
    b.characteristics_.push_back(c);
    int i = g - 1;
    while (i >= 0) {
      if (++c(i) < fnf.divisors(i)) break;
      c(i) = 0;
      --i;
    }
    if (i < 0) break;
  }
  return b;
}

double ThetaBasis::tail_from_s0(double s0, int radius) const {
  const int g = bundle_.torus->dim();
  long double sum = 0.0L;
  const double mu = y_min_eig_;
  long double prev = -1.0L;
  for (int k = radius + 1; k <= radius + 20000; ++k) {
    long double count = std::pow(2.0L * k + 1, g) - std::pow(2.0L * k - 1, g);
    double dist = k - 1 - s0;
    long double term = (dist <= 0) ? count : count * std::exp(-kPi * mu * dist * dist);
    sum += term;
    if (dist > 1 && term < 1e-25L && (prev < 0 || term < prev)) break;
    prev = term;
  }
  return static_cast<double>(sum);
}

double ThetaBasis::tail_bound_at(const cvec& v, int radius) const {
  cvec w = n_ * (v + shift_);
  rvec yi = w.imag();
  double s0 = (y_inv_ * yi).cwiseAbs().maxCoeff();
  return tail_from_s0(s0, radius);
}

int ThetaBasis::radius_for_s0(double s0, double eps) const {
  int r = std::max(1, static_cast<int>(std::ceil(s0 + 2.0)));
  for (; r <= 4000; ++r) {
    if (tail_from_s0(s0, r) <= eps) return r;
  }
  fail(errc::truncation_insufficient, "no radius certifies the requested tail bound");
}

int ThetaBasis::radius_for(const cvec& v, double eps) const {
  cvec w = n_ * (v + shift_);
  rvec yi = w.imag();
  double s0 = (y_inv_ * yi).cwiseAbs().maxCoeff();
  return radius_for_s0(s0, eps);
}

// One characteristic's oscillatory sum over the cutoff box.  The innermost
// coordinate is summed by a first-order recurrence for the quadratic
// exponent, started at the magnitude peak and walked outward.
cplx ThetaBasis::reduced_sum(const rvec& chat, const rvec& xr, const rvec& c0, int radius) const {
  const int g = bundle_.torus->dim();
  auto exponent = [&](const rvec& t) -> cplx {
    rvec q = t + c0;
    double rho = -kPi * q.dot(y_ * q);
    double phi = kPi * t.dot(x_ * t) + 2.0 * kPi * t.dot(xr);
    return cplx(rho, phi);
  };

  cplx acc(0.0, 0.0);
  rvec t(g);
  ivec n = ivec::Constant(g, -radius);
  const int inner = g - 1;
  while (true) {
    for (int i = 0; i < inner; ++i) t(i) = static_cast<double>(n(i)) + chat(i);

    int k0 = static_cast<int>(std::llround(-c0(inner) - chat(inner)));
    k0 = std::min(radius, std::max(-radius, k0));
    for (int dir = 0; dir < 2; ++dir) {
      int start = (dir == 0) ? k0 : k0 - 1;
      int step = (dir == 0) ? 1 : -1;
      int remaining = (dir == 0) ? radius - start : start + radius;
      if (remaining < 0) continue;
      auto zeta = [&](int k) {
        t(inner) = static_cast<double>(k) + chat(inner);
        return exponent(t);
      };
      cplx z0 = zeta(start);
      cplx term = std::exp(z0);
      if (remaining == 0) {
        acc += term;
        continue;
      }
      cplx d1 = zeta(start + step) - z0;
      cplx d2 = zeta(start + 2 * step) - zeta(start + step);
      cplx ratio = std::exp(d1);
      cplx ratio_mul = std::exp(d2 - d1);
      for (int i = 0;; ++i) {
        acc += term;
        if (i == remaining) break;
        term *= ratio;
        ratio *= ratio_mul;
        if (std::abs(term.real()) + std::abs(term.imag()) < kDropMagnitude) break;
      }
    }

    int i = inner - 1;
    while (i >= 0) {
      if (++n(i) <= radius) break;
      n(i) = -radius;
      --i;
    }
    if (i < 0) break;
  }
  return acc;
}

ThetaBasis::Eval ThetaBasis::eval_reduced(const cvec& v, const TruncationParams& tp) const {
  require(tp.tail_bound > 0, errc::invalid_argument, "tail bound must be positive");
  cvec u = v + shift_;
  cvec w = n_ * u;
  rvec xr = w.real();
  rvec yi = w.imag();
  rvec c0 = y_inv_ * yi;
  double s0 = c0.cwiseAbs().maxCoeff();

  int radius = tp.radius;
  if (radius <= 0) {
    radius = radius_for_s0(s0, tp.tail_bound);
  } else {
    require(tail_from_s0(s0, radius) <= tp.tail_bound, errc::truncation_insufficient,
            "certified tail at the given radius exceeds the tail bound");
  }

  // Constant-in-n exponent; Re(xi_hat) = (pi/2) H(shift, shift) is constant,
  // so the reduced values stay bounded over all of V.
  cplx b_ww = (w.transpose() * y_inv_.cast<cplx>() * w)(0);
  cplx xi = -kPi * bundle_.hermitian(v, shift_) + 0.5 * kPi * b_ww;
  double y_quad = yi.dot(y_inv_ * yi);
  cplx xi_hat = xi + cplx(kPi * y_quad - 0.5 * kPi * bundle_.hermitian.quad(v), 0.0);
  cplx scale = std::exp(xi_hat);

  const int g = bundle_.torus->dim();
  cvec out(h0());
  rvec chat(g);
  for (size_t ci = 0; ci < characteristics_.size(); ++ci) {
    for (int i = 0; i < g; ++i)
      chat(i) = static_cast<double>(characteristics_[ci](i)) / static_cast<double>(divisors_(i));
    out(static_cast<int>(ci)) = reduced_sum(chat, xr, c0, radius) * scale;
  }
  return Eval{std::move(out), 0.5 * kPi * bundle_.hermitian.quad(v)};
}

cvec ThetaBasis::eval(const cvec& v, const TruncationParams& tp) const {
  Eval e = eval_reduced(v, tp);
  return e.reduced * std::exp(e.log_scale);
}

double check_automorphy(const ThetaBasis& b, const cvec& v, const ivec& lambda,
                        const TruncationParams& tp) {
  const LineBundleData& l = b.bundle();
  cvec lv = l.torus->lattice_vector(lambda);
  ThetaBasis::Eval e0 = b.eval_reduced(v, tp);
  ThetaBasis::Eval e1 = b.eval_reduced(v + lv, tp);
  cplx j_hat = automorphy_factor_reduced(l, v, lambda);
  return (e1.reduced - j_hat * e0.reduced).cwiseAbs().maxCoeff();
}

double metric_weight(const HermitianForm& h, int r, const cvec& v) {
  require(r >= 1, errc::invalid_argument, "rank must be positive");
  return std::exp(-kPi / r * h.quad(v));
}

cplx pairing_value(const ThetaBasis& b, int f_idx, int g_idx, const cvec& v,
                   const TruncationParams& tp) {
  require(f_idx >= 0 && f_idx < b.h0() && g_idx >= 0 && g_idx < b.h0(), errc::invalid_argument,
          "section index out of range");
  ThetaBasis::Eval e = b.eval_reduced(v, tp);
  return std::conj(e.reduced(f_idx)) * e.reduced(g_idx);
}

double pairing_periodicity_check(const ThetaBasis& b, int f_idx, int g_idx, const cvec& v,
                                 const ivec& lambda, const TruncationParams& tp) {
  cvec lv = b.bundle().torus->lattice_vector(lambda);
  cplx p0 = pairing_value(b, f_idx, g_idx, v, tp);
  cplx p1 = pairing_value(b, f_idx, g_idx, v + lv, tp);
  return std::abs(p1 - p0);
}

double curvature_fd_error(const HermitianForm& h, int r, const cvec& v, double step) {
  require(r >= 1, errc::invalid_argument, "rank must be positive");
  const int g = h.dim();
  auto phi = [&](const cvec& u) { return kPi / r * h.quad(u); };
  auto dir = [&](int j, bool imag_axis) {
    cvec d = cvec::Zero(g);
    d(j) = imag_axis ? cplx(0.0, 1.0) : cplx(1.0, 0.0);
    return d;
  };
  auto d2 = [&](const cvec& a, const cvec& b) {
    return (phi(v + step * a + step * b) - phi(v + step * a - step * b) -
            phi(v - step * a + step * b) + phi(v - step * a - step * b)) /
           (4.0 * step * step);
  };
  cmat expected = (kPi / r) * h.matrix();
  double scale = std::max(1e-30, expected.cwiseAbs().maxCoeff());
  double worst = 0.0;
  for (int j = 0; j < g; ++j) {
    for (int k = 0; k < g; ++k) {
      cvec xj = dir(j, false), yj = dir(j, true);
      cvec xk = dir(k, false), yk = dir(k, true);
      double re = 0.25 * (d2(xj, xk) + d2(yj, yk));
      double im = 0.25 * (d2(xj, yk) - d2(yj, xk));
      worst = std::max(worst, std::abs(cplx(re, im) - expected(j, k)) / scale);
    }
  }
  return worst;
}

}  // namespace abelgen
