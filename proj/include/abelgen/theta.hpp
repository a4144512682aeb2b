#ifndef ABELGEN_THETA_HPP
#define ABELGEN_THETA_HPP

#include <vector>

#include "abelgen/appell.hpp"

namespace abelgen {

// Truncation control for theta series.  radius == 0 selects the smallest
// lattice-enumeration cutoff whose certified Gaussian tail is < tail_bound
// at the evaluation point; a positive radius is used as given and the
// certificate is re-checked per point.
struct TruncationParams {
  double tail_bound = 1e-12;
  int radius = 0;
};

// Basis of H^0(L) for an ample line bundle, realized by theta series with
// characteristics in the symplectic decomposition of Im H.  Section values
// are reported in the canonical factor-of-automorphy trivialization
//   f(v + l) = chi(l) exp(pi H(v,l) + (pi/2) H(l,l)) f(v).
class ThetaBasis {
 public:
  static ThetaBasis build(const LineBundleData& l);

  const LineBundleData& bundle() const { return bundle_; }
  int h0() const { return static_cast<int>(characteristics_.size()); }
  const ivec& divisors() const { return divisors_; }
  const imat& basis_change() const { return basis_change_; }
  const std::vector<ivec>& characteristics() const { return characteristics_; }
  const cmat& normalized_period() const { return z_; }

  // f = reduced * exp(log_scale) with log_scale = (pi/2) H(v,v); the
  // reduced values are the metric-weighted section values and stay bounded.
  struct Eval {
    cvec reduced;
    double log_scale;
  };
  Eval eval_reduced(const cvec& v, const TruncationParams& tp) const;
  cvec eval(const cvec& v, const TruncationParams& tp) const;

  // Smallest radius whose certified tail is below eps at v.
  int radius_for(const cvec& v, double eps) const;
  // Certified tail bound of the reduced series outside the cutoff box.
  double tail_bound_at(const cvec& v, int radius) const;

 private:
  LineBundleData bundle_;
  imat basis_change_;
  ivec divisors_;
  cmat n_;             // normalizing coordinate map w = N v
  cmat z_;             // normalized period, symmetric with Im z > 0
  rmat x_, y_, y_inv_;
  double y_min_eig_;
  cvec shift_;         // translation solving the semicharacter equation
  std::vector<ivec> characteristics_;

  explicit ThetaBasis(LineBundleData l);
  double tail_from_s0(double s0, int radius) const;
  int radius_for_s0(double s0, double eps) const;
  cplx reduced_sum(const rvec& chat, const rvec& xr, const rvec& c0, int radius) const;
};

// Residual of the factor-of-automorphy identity at (v, lambda), measured in
// the bundle metric: max-norm of h^{1/2}(v+l) (f(v+l) - J(v,l) f(v)).
double check_automorphy(const ThetaBasis& b, const cvec& v, const ivec& lambda,
                        const TruncationParams& tp);

// exp(-(pi/r) H(v,v)), the scalar of the Hermitian metric h = that * Id_r.
double metric_weight(const HermitianForm& h, int r, const cvec& v);

// <f_i, f_j>(v) = conj(f_i(v)) * metric_weight * f_j(v).
cplx pairing_value(const ThetaBasis& b, int f_idx, int g_idx, const cvec& v,
                   const TruncationParams& tp);

// |<f,g>(v + lambda) - <f,g>(v)|.
double pairing_periodicity_check(const ThetaBasis& b, int f_idx, int g_idx, const cvec& v,
                                 const ivec& lambda, const TruncationParams& tp);

// Finite-difference check that the complex Hessian of (pi/r) H(v,v) is the
// constant matrix (pi/r) H; returns the max relative deviation.
double curvature_fd_error(const HermitianForm& h, int r, const cvec& v, double step = 1e-4);

}  // namespace abelgen

#endif
