#ifndef ABELGEN_SH_HPP
#define ABELGEN_SH_HPP

#include <optional>

#include <boost/rational.hpp>

#include "abelgen/theta.hpp"

namespace abelgen {

using rational = boost::rational<int64_t>;

// Unitary semirepresentation G of the lattice with
//   G(l1 + l2) = G(l1) G(l2) exp((pi i / r) Im H(l1, l2)).
struct SemiRep {
  int rank;
  std::vector<cmat> generators;  // one r x r unitary per lattice generator
  HermitianForm hermitian;       // H with Im H integral on the lattice
};

SemiRep semirep_from_line_bundle(const LineBundleData& l);

// G at an arbitrary lattice vector, folded through the cocycle rule in
// coordinate order (deterministic).
cmat semirep_value(const SemiRep& rep, const Torus& t, const ivec& n);

// Max deviation of the cocycle identity over all ordered basis pairs.
double semirep_cocycle_residual(const SemiRep& rep, const Torus& t);

// Rank-r factor of automorphy J(v,l) = G(l) exp((pi/r) H(v,l) + (pi/2r) H(l,l)).
cmat semirep_automorphy(const SemiRep& rep, const Torus& t, const cvec& v, const ivec& lambda);

// Semihomogeneous bundle, realized either as an isogeny pushforward p_* L or
// explicitly as E(G, H).
class SHBundle {
 public:
  static SHBundle from_pushforward(std::shared_ptr<const Isogeny> p, LineBundleData upstairs);
  static SHBundle from_semirep(TorusPtr base, SemiRep rep);

  bool is_pushforward() const { return isogeny_ != nullptr; }
  int rank() const { return rank_; }
  const TorusPtr& base() const { return base_; }
  const Isogeny& isogeny() const;
  const LineBundleData& upstairs() const;
  const SemiRep& semirep() const;
  // H_E = r * H_L(alpha^{-1} ., alpha^{-1} .) for pushforwards.
  const HermitianForm& descended_form() const { return descended_; }
  bool is_ample() const;
  int64_t h0() const;

 private:
  SHBundle() = default;
  TorusPtr base_;
  int rank_ = 0;
  std::shared_ptr<const Isogeny> isogeny_;
  std::optional<LineBundleData> upstairs_;
  std::optional<SemiRep> rep_;
  HermitianForm descended_ = HermitianForm::zero(1);
};

// Deterministic explicit realization of a pushforward bundle: monomial
// unitary generators read off the kernel ordering.
SemiRep explicit_semirep(const SHBundle& e);

// sigma^* E = direct sum of translates of L over the kernel of sigma.
std::vector<LineBundleData> pullback_split(const Isogeny& sigma, const SHBundle& e);

// H^0(E^{otimes m}) as a direct sum over kernel tuples (x_2..x_m) of the
// line bundles L (x) t_{x_2}^* L (x) ... together with their theta bases.
struct TensorSummand {
  std::vector<int> kernel_indices;  // x_2..x_m as kernel-point indices
  LineBundleData bundle;
  ThetaBasis basis;
};
std::vector<TensorSummand> tensor_power_sections(const SHBundle& e, int m);

// Evaluation of H^0(E) into the fiber over a: h0 x r matrix, column j the
// value at the preimage b_0 + x_j in the E(G,H) frame (b_0 the reduced lift).
cmat fiber_eval(const SHBundle& e, const cvec& a, const TruncationParams& tp);
// Metric-weighted variant (unit-norm frames); same rank, bounded entries.
cmat fiber_eval_reduced(const SHBundle& e, const ThetaBasis& upstairs_basis, const cvec& a,
                        const TruncationParams& tp, bool reduce_lift = true);

// Vector-valued metric pairing of two sections of a pushforward bundle.
cplx sh_pairing_value(const SHBundle& e, const ThetaBasis& upstairs_basis, int f_idx, int g_idx,
                      const cvec& v, const TruncationParams& tp);
double sh_pairing_periodicity_check(const SHBundle& e, const ThetaBasis& upstairs_basis,
                                    int f_idx, int g_idx, const cvec& v, const ivec& lambda,
                                    const TruncationParams& tp);

// Residual of J(v+a, l) = J(v, l) exp(pi H(a/r, l)) over random samples,
// normalized by the magnitude of the left side.  Requires an explicit
// realization.
double verify_semihomogeneity(const SHBundle& e, const cvec& a, int samples, uint64_t seed);

// Total Chern class coefficients of a semihomogeneous bundle: c_i equals
// binom(r,i)/r^i * c1^i.
std::vector<rational> chern_total_coefficients(int r);
// Surface c_2 = ((r-1)/2r) c1^2; throws non_integral_chern_class.
int64_t chern_surface_c2(int r, int64_t c1_sq);
// c1^2 for an NS class with Gram matrix.
int64_t ns_self_intersection(const imat& gram, const ivec& c1);

// Exact Chern/Euler characteristic consistency on abelian surfaces:
// c1(E)^2 = r c1(L)^2 and chi(E) = c1(E)^2 / 2r = chi(L).
struct ChiSurfaceReport {
  int64_t rank;
  int64_t chi_upstairs;   // h^0(L) = d_1 d_2
  int64_t c1_l_squared;
  int64_t c1_e_squared;
  int64_t chi_downstairs; // c1(E)^2 / 2r
};
ChiSurfaceReport chi_surface_consistency(const Isogeny& p, const LineBundleData& l);

}  // namespace abelgen

#endif
