#include "abelgen/appell.hpp"

#include <cmath>
#include <numbers>

namespace abelgen {

namespace {
constexpr double kPi = std::numbers::pi;

cplx unit_ipow(cplx base, int64_t k) {
  if (k < 0) {
    base = std::conj(base);  // unit modulus
    k = -k;
  }
  cplx out(1.0, 0.0);
  while (k > 0) {
    if (k & 1) out *= base;
    base *= base;
    k >>= 1;
  }
  return out;
}

imat integer_inverse(const imat& u) {
  // u is unimodular; invert in doubles, round, and verify exactly.
  Eigen::MatrixXd inv = u.cast<double>().inverse();
  imat out(u.rows(), u.cols());
  for (int i = 0; i < u.rows(); ++i)
    for (int j = 0; j < u.cols(); ++j) out(i, j) = std::llround(inv(i, j));
  require(((u * out) - imat::Identity(u.rows(), u.cols())).isZero(), errc::internal,
          "unimodular inverse reconstruction failed");
  return out;
}
}  // namespace

HermitianForm::HermitianForm(cmat m) : m_(std::move(m)) {
  require(m_.rows() == m_.cols(), errc::invalid_argument, "Hermitian matrix must be square");
  cmat adj = m_.adjoint();
  double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  require((m_ - adj).cwiseAbs().maxCoeff() <= 1e-8 * scale, errc::invalid_argument,
          "matrix is not Hermitian");
  m_ = 0.5 * (m_ + adj);  // snap exactly
}

cplx HermitianForm::operator()(const cvec& u, const cvec& w) const {
  return (u.transpose() * m_ * w.conjugate())(0);
}

double HermitianForm::quad(const cvec& v) const { return (*this)(v, v).real(); }

imat integral_alt_form(const Torus& t, const HermitianForm& h, double tol) {
  const int n = 2 * t.dim();
  imat e(n, n);
  for (int i = 0; i < n; ++i) {
    e(i, i) = 0;
    for (int j = i + 1; j < n; ++j) {
      double v = h(t.periods().col(i), t.periods().col(j)).imag();
      int64_t snapped = std::llround(v);
      require(std::abs(v - snapped) <= tol, errc::invalid_argument,
              "Im H is not integral on the lattice");
      e(i, j) = snapped;
      e(j, i) = -snapped;
    }
  }
  return e;
}

Semicharacter::Semicharacter(cvec values, imat alt_form)
    : values_(std::move(values)), e_(std::move(alt_form)) {
  require(values_.size() == e_.rows() && e_.rows() == e_.cols(), errc::invalid_argument,
          "semicharacter needs one value per lattice generator");
  for (int i = 0; i < values_.size(); ++i) {
    double m = std::abs(values_(i));
    require(std::abs(m - 1.0) <= 1e-8, errc::invalid_argument,
            "semicharacter values must have unit modulus");
    values_(i) /= m;
  }
}

cplx Semicharacter::value(const ivec& n) const {
  // Fold coordinate by coordinate through the extension rule; the sign
  // contribution exp(pi i E(partial, k e_i)) is an exact parity.
  const int dim = static_cast<int>(values_.size());
  cplx acc(1.0, 0.0);
  ivec partial = ivec::Zero(dim);
  for (int i = 0; i < dim; ++i) {
    int64_t k = n(i);
    if (k == 0) continue;
    cplx genpow = unit_ipow(values_(i), k);
    int64_t cross = 0;  // E(partial, k e_i)
    for (int j = 0; j < dim; ++j) cross += partial(j) * e_(j, i);
    cross *= k;
    acc *= genpow;
    if (cross % 2 != 0) acc = -acc;
    partial(i) = k;
  }
  return acc;
}

cvec canonical_semicharacter_values(const Torus& t, const imat& e_int) {
  const int n = 2 * t.dim();
  const int g = t.dim();
  if (int_det(e_int) == 0) return cvec::Ones(n);
  FrobeniusResult fnf = frobenius_normal_form(IntAltForm(e_int));
  // In the symplectic basis chi0 is trivial on generators and the alternating
  // form is standard; transport back through the unimodular change.
  imat e_sym = imat::Zero(n, n);
  for (int i = 0; i < g; ++i) {
    e_sym(i, g + i) = fnf.divisors(i);
    e_sym(g + i, i) = -fnf.divisors(i);
  }
  Semicharacter sym(cvec::Ones(n), e_sym);
  imat u_inv = integer_inverse(fnf.basis_change);
  cvec vals(n);
  for (int i = 0; i < n; ++i) vals(i) = sym.value(u_inv.col(i));
  return vals;
}

LineBundleData make_line_bundle(TorusPtr t, HermitianForm h) {
  require(t != nullptr, errc::invalid_argument, "bundle requires a torus");
  require(h.dim() == t->dim(), errc::invalid_argument, "Hermitian form dimension mismatch");
  imat e = integral_alt_form(*t, h);
  cvec chi0 = canonical_semicharacter_values(*t, e);
  return LineBundleData{t, std::move(h), Semicharacter(std::move(chi0), e), e};
}

LineBundleData make_line_bundle(TorusPtr t, HermitianForm h, cvec chi_values) {
  require(t != nullptr, errc::invalid_argument, "bundle requires a torus");
  require(h.dim() == t->dim(), errc::invalid_argument, "Hermitian form dimension mismatch");
  imat e = integral_alt_form(*t, h);
  return LineBundleData{t, std::move(h), Semicharacter(std::move(chi_values), e), e};
}

bool is_ample(const LineBundleData& l, double band) {
  Eigen::SelfAdjointEigenSolver<cmat> es(l.hermitian.matrix());
  require(es.info() == Eigen::Success, errc::internal, "eigenvalue solve failed");
  const rvec ev = es.eigenvalues();
  double top = ev.cwiseAbs().maxCoeff();
  if (top == 0.0) return false;  // degree-0 bundle
  double tol = band * top;
  bool all_pos = true;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) > tol) continue;
    all_pos = false;
    require(ev(i) < -tol, errc::indefinite_borderline,
            "eigenvalue of H inside the positivity tolerance band");
  }
  return all_pos;
}

ivec bundle_type(const LineBundleData& l) {
  require(is_ample(l), errc::not_ample, "bundle type requires ample H");
  return frobenius_normal_form(IntAltForm(l.e_int)).divisors;
}

int64_t h0(const LineBundleData& l) {
  ivec d = bundle_type(l);
  int64_t out = 1;
  for (int i = 0; i < d.size(); ++i) out *= d(i);
  return out;
}

LineBundleData tensor(const LineBundleData& a, const LineBundleData& b) {
  require(a.torus->same_as(*b.torus), errc::torus_mismatch, "tensor needs a common torus");
  cvec chi = a.chi.values().cwiseProduct(b.chi.values());
  return LineBundleData{a.torus, a.hermitian.plus(b.hermitian),
                        Semicharacter(std::move(chi), a.e_int + b.e_int), a.e_int + b.e_int};
}

LineBundleData translate(const LineBundleData& l, const cvec& a) {
  require(a.size() == l.torus->dim(), errc::invalid_argument, "translate point dimension mismatch");
  const int n = 2 * l.torus->dim();
  cvec chi(n);
  for (int i = 0; i < n; ++i) {
    double e_al = l.hermitian(a, l.torus->periods().col(i)).imag();
    chi(i) = l.chi.values()(i) * std::exp(cplx(0.0, 2.0 * kPi * e_al));
  }
  return LineBundleData{l.torus, l.hermitian, Semicharacter(std::move(chi), l.e_int), l.e_int};
}

LineBundleData pullback(const Isogeny& p, const LineBundleData& l) {
  require(p.target()->same_as(*l.torus), errc::torus_mismatch,
          "pullback needs a bundle on the isogeny target");
  const cmat& alpha = p.linear_map();
  cmat m2 = alpha.transpose() * l.hermitian.matrix() * alpha.conjugate();
  const imat& m = p.lattice_matrix();
  imat e2 = m.transpose() * l.e_int * m;
  const int n = static_cast<int>(e2.rows());
  cvec chi(n);
  for (int i = 0; i < n; ++i) chi(i) = l.chi.value(m.col(i));
  return LineBundleData{p.source(), HermitianForm(std::move(m2)),
                        Semicharacter(std::move(chi), e2), e2};
}

LineBundleData tensor_power(const LineBundleData& l, int m) {
  require(m >= 1, errc::invalid_argument, "tensor power needs m >= 1");
  LineBundleData out = l;
  for (int i = 1; i < m; ++i) out = tensor(out, l);
  return out;
}

cplx automorphy_factor(const LineBundleData& l, const cvec& v, const ivec& lambda) {
  cvec lv = l.torus->lattice_vector(lambda);
  cplx expo = kPi * l.hermitian(v, lv) + 0.5 * kPi * l.hermitian(lv, lv);
  return l.chi.value(lambda) * std::exp(expo);
}

cplx automorphy_factor_reduced(const LineBundleData& l, const cvec& v, const ivec& lambda) {
  cvec lv = l.torus->lattice_vector(lambda);
  double im = l.hermitian(v, lv).imag();
  return l.chi.value(lambda) * std::exp(cplx(0.0, kPi * im));
}

}  // namespace abelgen
