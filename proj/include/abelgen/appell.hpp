#ifndef ABELGEN_APPELL_HPP
#define ABELGEN_APPELL_HPP

#include <optional>

#include "abelgen/torus.hpp"

namespace abelgen {

// Hermitian form H(u,w) = u^T M conj(w), linear in the first argument.
class HermitianForm {
 public:
  explicit HermitianForm(cmat m);
  static HermitianForm zero(int g) { return HermitianForm(cmat::Zero(g, g)); }

  const cmat& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }

  cplx operator()(const cvec& u, const cvec& w) const;
  double quad(const cvec& v) const;  // H(v,v), real
  HermitianForm scaled(double s) const { return HermitianForm(s * m_); }
  HermitianForm plus(const HermitianForm& o) const { return HermitianForm(m_ + o.m_); }

 private:
  cmat m_;
};

// Im H on the lattice basis, snapped to integers; throws when the imaginary
// part is not integral to tolerance.
imat integral_alt_form(const Torus& t, const HermitianForm& h, double tol = 1e-8);

// Semicharacter on the lattice: unit values on the basis, extended through
// chi(l+m) = chi(l) chi(m) exp(pi i E(l,m)).
class Semicharacter {
 public:
  Semicharacter(cvec values, imat alt_form);

  const cvec& values() const { return values_; }
  const imat& alt_matrix() const { return e_; }
  cplx value(const ivec& n) const;

 private:
  cvec values_;
  imat e_;
};

struct LineBundleData {
  TorusPtr torus;
  HermitianForm hermitian;
  Semicharacter chi;
  imat e_int;  // Im H on the lattice basis
};

// Canonical semicharacter chi0 relative to the symplectic decomposition from
// frobenius_normal_form: trivial on the symplectic basis vectors.
cvec canonical_semicharacter_values(const Torus& t, const imat& e_int);

LineBundleData make_line_bundle(TorusPtr t, HermitianForm h);
LineBundleData make_line_bundle(TorusPtr t, HermitianForm h, cvec chi_values);

// Positive-definiteness of H with a relative tolerance band; throws
// indefinite_borderline when an eigenvalue falls inside the band.
bool is_ample(const LineBundleData& l, double band = 1e-9);

// Elementary divisors d_1 | ... | d_g of Im H on the lattice (ample only).
ivec bundle_type(const LineBundleData& l);

// h^0 = d_1 ... d_g for ample bundles; throws not_ample otherwise.
int64_t h0(const LineBundleData& l);

LineBundleData tensor(const LineBundleData& a, const LineBundleData& b);
LineBundleData translate(const LineBundleData& l, const cvec& a);
LineBundleData pullback(const Isogeny& p, const LineBundleData& l);
LineBundleData tensor_power(const LineBundleData& l, int m);

// Canonical rank-1 factor of automorphy
//   J(v,l) = chi(l) exp(pi H(v,l) + (pi/2) H(l,l)).
cplx automorphy_factor(const LineBundleData& l, const cvec& v, const ivec& lambda);
// Metric-twisted unit-modulus factor chi(l) exp(i pi Im H(v,l)).
cplx automorphy_factor_reduced(const LineBundleData& l, const cvec& v, const ivec& lambda);

}  // namespace abelgen

#endif
