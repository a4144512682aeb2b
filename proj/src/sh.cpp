#include "abelgen/sh.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace abelgen {

namespace {
constexpr double kPi = std::numbers::pi;
}

SemiRep semirep_from_line_bundle(const LineBundleData& l) {
  const int n = 2 * l.torus->dim();
  std::vector<cmat> gens;
  gens.reserve(n);
  for (int i = 0; i < n; ++i) {
    cmat g(1, 1);
    g(0, 0) = l.chi.values()(i);
    gens.push_back(std::move(g));
  }
  return SemiRep{1, std::move(gens), l.hermitian};
}

// Composing the factor of automorphy J(v, l+m) = J(v+m, l) J(v, m) forces
//   G(l+m) = G(l) G(m) exp(-(pi i / r) Im H(l, m))
// for a form H that is linear in its first argument (the sign is invisible
// at rank 1, where Im H is integral on the lattice).
cmat semirep_value(const SemiRep& rep, const Torus& t, const ivec& n) {
  const int dim = 2 * t.dim();
  require(static_cast<int>(rep.generators.size()) == dim, errc::invalid_argument,
          "semirepresentation generator count mismatch");
  cmat acc = cmat::Identity(rep.rank, rep.rank);
  cvec partial = cvec::Zero(t.dim());
  for (int i = 0; i < dim; ++i) {
    int64_t k = n(i);
    if (k == 0) continue;
    cmat gk;
    if (k > 0) {
      gk = rep.generators[i];
      for (int64_t j = 1; j < k; ++j) gk = gk * rep.generators[i];
    } else {
      cmat ginv = rep.generators[i].adjoint();  // unitary
      gk = ginv;
      for (int64_t j = 1; j < -k; ++j) gk = gk * ginv;
    }
    cvec step = static_cast<double>(k) * t.periods().col(i);
    double cross = rep.hermitian(partial, step).imag();
    acc = acc * gk * std::exp(cplx(0.0, -kPi / rep.rank * cross));
    partial += step;
  }
  return acc;
}

double semirep_cocycle_residual(const SemiRep& rep, const Torus& t) {
  const int dim = 2 * t.dim();
  double worst = 0.0;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      if (i == j) continue;
      ivec sum = ivec::Zero(dim);
      sum(i) += 1;
      sum(j) += 1;
      cmat lhs = semirep_value(rep, t, sum);
      double cross = rep.hermitian(t.periods().col(i), t.periods().col(j)).imag();
      cmat rhs = rep.generators[i] * rep.generators[j] *
                 std::exp(cplx(0.0, -kPi / rep.rank * cross));
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

cmat semirep_automorphy(const SemiRep& rep, const Torus& t, const cvec& v, const ivec& lambda) {
  cvec lv = t.lattice_vector(lambda);
  cplx expo = kPi / rep.rank * rep.hermitian(v, lv) +
              0.5 * kPi / rep.rank * rep.hermitian(lv, lv);
  return semirep_value(rep, t, lambda) * std::exp(expo);
}

SHBundle SHBundle::from_pushforward(std::shared_ptr<const Isogeny> p, LineBundleData upstairs) {
  require(p != nullptr, errc::invalid_argument, "pushforward requires an isogeny");
  require(upstairs.torus->same_as(*p->source()), errc::torus_mismatch,
          "pushforward bundle must live on the isogeny source");
  SHBundle e;
  e.base_ = p->target();
  e.rank_ = static_cast<int>(p->degree());
  e.isogeny_ = std::move(p);
  // H_E = r * H_L(alpha^{-1} ., alpha^{-1} .): matches c1(det p_* L).
  cmat alpha_inv = e.isogeny_->linear_map().partialPivLu().inverse();
  cmat m_e = static_cast<double>(e.rank_) * alpha_inv.transpose() *
             upstairs.hermitian.matrix() * alpha_inv.conjugate();
  e.descended_ = HermitianForm(std::move(m_e));
  e.upstairs_ = std::move(upstairs);
  return e;
}

SHBundle SHBundle::from_semirep(TorusPtr base, SemiRep rep) {
  require(base != nullptr, errc::invalid_argument, "explicit bundle requires a torus");
  require(rep.rank >= 1 && static_cast<int>(rep.generators.size()) == 2 * base->dim(),
          errc::invalid_argument, "semirepresentation shape mismatch");
  SHBundle e;
  e.base_ = std::move(base);
  e.rank_ = rep.rank;
  e.descended_ = rep.hermitian;
  e.rep_ = std::move(rep);
  return e;
}

const Isogeny& SHBundle::isogeny() const {
  require(isogeny_ != nullptr, errc::realization_mismatch, "bundle is not a pushforward");
  return *isogeny_;
}

const LineBundleData& SHBundle::upstairs() const {
  require(upstairs_.has_value(), errc::realization_mismatch, "bundle is not a pushforward");
  return *upstairs_;
}

const SemiRep& SHBundle::semirep() const {
  require(rep_.has_value(), errc::realization_mismatch, "bundle has no explicit realization");
  return *rep_;
}

bool SHBundle::is_ample() const {
  if (upstairs_) return abelgen::is_ample(*upstairs_);
  Eigen::SelfAdjointEigenSolver<cmat> es(descended_.matrix());
  return es.eigenvalues().minCoeff() > 0;
}

int64_t SHBundle::h0() const {
  require(upstairs_.has_value(), errc::realization_mismatch,
          "h0 is computed from the pushforward realization");
  return abelgen::h0(*upstairs_);
}

SemiRep explicit_semirep(const SHBundle& e) {
  const Isogeny& p = e.isogeny();
  const LineBundleData& l = e.upstairs();
  const Torus& target = *p.target();
  const Torus& source = *p.source();
  const int r = e.rank();
  const int dim = 2 * target.dim();
  const auto& kernel = p.kernel_points();

  std::vector<cmat> gens;
  gens.reserve(dim);
  for (int i = 0; i < dim; ++i) {
    ivec lam = ivec::Zero(dim);
    lam(i) = 1;
    int kappa = p.kernel_class(lam);
    cvec lam_up = p.lift(target.periods().col(i));
    cmat g = cmat::Zero(r, r);
    for (int j = 0; j < r; ++j) {
      int jk = p.kernel_add(j, kappa);
      ivec lp_coords = p.transfer_to_source(lam, j);
      cvec lp = source.lattice_vector(lp_coords);
      const cvec& xj = kernel[j].point;
      const cvec& xjk = kernel[jk].point;
      cplx expo = kPi * (-l.hermitian(lam_up, xj) + l.hermitian(xjk, lp)) +
                  0.5 * kPi * (l.hermitian(lp, lp) + l.hermitian(xjk, xjk) -
                               l.hermitian(xj, xj) - l.hermitian(lam_up, lam_up));
      g(j, jk) = l.chi.value(lp_coords) * std::exp(expo);
    }
    gens.push_back(std::move(g));
  }
  return SemiRep{r, std::move(gens), e.descended_form()};
}

std::vector<LineBundleData> pullback_split(const Isogeny& sigma, const SHBundle& e) {
  const Isogeny& p = e.isogeny();
  require(&sigma == &p || (sigma.source()->same_as(*p.source()) &&
                           sigma.target()->same_as(*p.target()) &&
                           sigma.lattice_matrix() == p.lattice_matrix()),
          errc::realization_mismatch, "bundle is not a pushforward along this isogeny");
  std::vector<LineBundleData> out;
  out.reserve(p.kernel_points().size());
  for (const auto& k : p.kernel_points()) out.push_back(translate(e.upstairs(), k.point));
  return out;
}

std::vector<TensorSummand> tensor_power_sections(const SHBundle& e, int m) {
  require(m >= 1, errc::invalid_argument, "tensor power needs m >= 1");
  require(e.is_ample(), errc::not_ample, "tensor power sections need an ample bundle");
  const Isogeny& p = e.isogeny();
  const LineBundleData& l = e.upstairs();
  const int r = e.rank();
  const auto& kernel = p.kernel_points();

  std::vector<TensorSummand> out;
  std::vector<int> tuple(static_cast<size_t>(m - 1), 0);
  while (true) {
    LineBundleData summand = l;
    for (int idx : tuple) summand = tensor(summand, translate(l, kernel[idx].point));
    out.push_back(TensorSummand{tuple, summand, ThetaBasis::build(summand)});
    int i = m - 2;
    while (i >= 0) {
      if (++tuple[i] < r) break;
      tuple[i] = 0;
      --i;
    }
    if (i < 0 || m == 1) break;
  }
  return out;
}

cmat fiber_eval_reduced(const SHBundle& e, const ThetaBasis& upstairs_basis, const cvec& a,
                        const TruncationParams& tp, bool reduce_lift) {
  const Isogeny& p = e.isogeny();
  const LineBundleData& l = e.upstairs();
  const int r = e.rank();
  cvec u0 = p.lift(a);
  if (reduce_lift) u0 = p.source()->reduce(u0);
  cmat out(upstairs_basis.h0(), r);
  const auto& kernel = p.kernel_points();
  for (int j = 0; j < r; ++j) {
    cvec b = u0 + kernel[j].point;
    ThetaBasis::Eval ev = upstairs_basis.eval_reduced(b, tp);
    cplx gauge = std::exp(cplx(0.0, -kPi * l.hermitian(u0, kernel[j].point).imag()));
    out.col(j) = gauge * ev.reduced;
  }
  return out;
}

cmat fiber_eval(const SHBundle& e, const cvec& a, const TruncationParams& tp) {
  const Isogeny& p = e.isogeny();
  const LineBundleData& l = e.upstairs();
  ThetaBasis basis = ThetaBasis::build(l);
  const int r = e.rank();
  cvec u0 = p.source()->reduce(p.lift(a));
  cmat out(basis.h0(), r);
  const auto& kernel = p.kernel_points();
  for (int j = 0; j < r; ++j) {
    const cvec& xj = kernel[j].point;
    cvec b = u0 + xj;
    cvec vals = basis.eval(b, tp);
    cplx gauge = std::exp(-kPi * l.hermitian(u0, xj) - 0.5 * kPi * l.hermitian(xj, xj));
    out.col(j) = gauge * vals;
  }
  return out;
}

cplx sh_pairing_value(const SHBundle& e, const ThetaBasis& upstairs_basis, int f_idx, int g_idx,
                      const cvec& v, const TruncationParams& tp) {
  require(f_idx >= 0 && f_idx < upstairs_basis.h0() && g_idx >= 0 && g_idx < upstairs_basis.h0(),
          errc::invalid_argument, "section index out of range");
  cmat mat = fiber_eval_reduced(e, upstairs_basis, v, tp, /*reduce_lift=*/false);
  cplx acc(0.0, 0.0);
  for (int m = 0; m < mat.cols(); ++m) acc += std::conj(mat(f_idx, m)) * mat(g_idx, m);
  return acc;
}

double sh_pairing_periodicity_check(const SHBundle& e, const ThetaBasis& upstairs_basis,
                                    int f_idx, int g_idx, const cvec& v, const ivec& lambda,
                                    const TruncationParams& tp) {
  cvec lv = e.base()->lattice_vector(lambda);
  cplx p0 = sh_pairing_value(e, upstairs_basis, f_idx, g_idx, v, tp);
  cplx p1 = sh_pairing_value(e, upstairs_basis, f_idx, g_idx, v + lv, tp);
  return std::abs(p1 - p0);
}

double verify_semihomogeneity(const SHBundle& e, const cvec& a, int samples, uint64_t seed) {
  const SemiRep& rep = e.semirep();
  const Torus& t = *e.base();
  const int dim = 2 * t.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-0.5, 0.5);
  std::uniform_int_distribution<int> lam(-1, 1);

  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    rvec coords(dim);
    for (int i = 0; i < dim; ++i) coords(i) = unif(rng);
    cvec v = t.from_lattice_coords(coords);
    ivec n(dim);
    for (int i = 0; i < dim; ++i) n(i) = lam(rng);
    cmat lhs = semirep_automorphy(rep, t, v + a, n);
    cvec lv = t.lattice_vector(n);
    cplx twist = std::exp(kPi / rep.rank * rep.hermitian(a, lv));
    cmat rhs = semirep_automorphy(rep, t, v, n) * twist;
    double denom = std::max(1.0, lhs.cwiseAbs().maxCoeff());
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff() / denom);
  }
  return worst;
}

std::vector<rational> chern_total_coefficients(int r) {
  require(r >= 1, errc::invalid_argument, "rank must be positive");
  std::vector<rational> out;
  out.reserve(static_cast<size_t>(r) + 1);
  rational binom(1);
  int64_t rpow = 1;
  for (int i = 0; i <= r; ++i) {
    out.push_back(binom / rational(rpow));
    binom *= rational(r - i, i + 1);
    if (i < r) rpow *= r;
  }
  return out;
}

int64_t chern_surface_c2(int r, int64_t c1_sq) {
  require(r >= 1, errc::invalid_argument, "rank must be positive");
  int64_t num = (r - 1) * c1_sq;
  require(num % (2 * r) == 0, errc::non_integral_chern_class,
          "surface c2 = (r-1)/(2r) c1^2 is not an integer");
  return num / (2 * r);
}

int64_t ns_self_intersection(const imat& gram, const ivec& c1) {
  require(gram.rows() == gram.cols() && gram.rows() == c1.size(), errc::invalid_argument,
          "NS Gram dimension mismatch");
  return (c1.transpose() * gram * c1)(0);
}

ChiSurfaceReport chi_surface_consistency(const Isogeny& p, const LineBundleData& l) {
  require(p.source()->dim() == 2, errc::invalid_argument,
          "surface consistency check needs g = 2");
  require(l.torus->same_as(*p.source()), errc::torus_mismatch,
          "bundle must live on the isogeny source");
  require(is_ample(l), errc::not_ample, "surface consistency check needs ample L");

  SHBundle e = SHBundle::from_pushforward(std::make_shared<Isogeny>(p), l);
  imat e_int_down = integral_alt_form(*p.target(), e.descended_form());

  ChiSurfaceReport rep{};
  rep.rank = p.degree();
  ivec d_up = frobenius_normal_form(IntAltForm(l.e_int)).divisors;
  rep.chi_upstairs = d_up(0) * d_up(1);
  rep.c1_l_squared = 2 * rep.chi_upstairs;
  ivec d_down = frobenius_normal_form(IntAltForm(e_int_down)).divisors;
  rep.c1_e_squared = 2 * d_down(0) * d_down(1);

  require(rep.c1_e_squared == rep.rank * rep.c1_l_squared, errc::identity_violation,
          "c1(E)^2 = r c1(L)^2 failed");
  require(rep.c1_e_squared % (2 * rep.rank) == 0, errc::identity_violation,
          "chi(E) = c1(E)^2 / 2r is not an integer");
  rep.chi_downstairs = rep.c1_e_squared / (2 * rep.rank);
  require(rep.chi_downstairs == rep.chi_upstairs, errc::identity_violation,
          "chi(E) = chi(L) failed");
  return rep;
}

}  // namespace abelgen
