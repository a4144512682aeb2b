#include "abelgen/torus.hpp"

#include <algorithm>
#include <cmath>

namespace abelgen {

namespace {

int64_t floor_div(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Nearest-integer division, b > 0.
int64_t round_div(int64_t a, int64_t b) { return floor_div(2 * a + b, 2 * b); }

imat identity_imat(int n) {
  imat id = imat::Zero(n, n);
  for (int i = 0; i < n; ++i) id(i, i) = 1;
  return id;
}

}  // namespace

const char* errc_name(errc c) {
  switch (c) {
    case errc::ok: return "ok";
    case errc::invalid_argument: return "invalid_argument";
    case errc::degenerate_form: return "degenerate_form";
    case errc::not_ample: return "not_ample";
    case errc::indefinite_borderline: return "indefinite_borderline";
    case errc::torus_mismatch: return "torus_mismatch";
    case errc::truncation_insufficient: return "truncation_insufficient";
    case errc::realization_mismatch: return "realization_mismatch";
    case errc::non_integral_chern_class: return "non_integral_chern_class";
    case errc::identity_violation: return "identity_violation";
    case errc::lattice_mismatch: return "lattice_mismatch";
    case errc::zero_vector: return "zero_vector";
    case errc::effectivity_undecidable: return "effectivity_undecidable";
    case errc::hypothesis_not_met: return "hypothesis_not_met";
    case errc::unbounded_entry: return "unbounded_entry";
    case errc::parse_error: return "parse_error";
    case errc::reference_error: return "reference_error";
    case errc::io_error: return "io_error";
    case errc::internal: return "internal";
  }
  return "unknown";
}

Torus::Torus(int g, cmat periods) : g_(g), periods_(std::move(periods)) {
  require(g >= 1, errc::invalid_argument, "torus dimension must be positive");
  require(periods_.rows() == g && periods_.cols() == 2 * g, errc::invalid_argument,
          "period matrix must be g x 2g");
  require(periods_.allFinite(), errc::invalid_argument, "period matrix must be finite");
  real_basis_.resize(2 * g, 2 * g);
  real_basis_.topRows(g) = periods_.real();
  real_basis_.bottomRows(g) = periods_.imag();
  lu_.compute(real_basis_);
  require(lu_.isInvertible(), errc::invalid_argument,
          "lattice columns are not R-linearly independent");
}

rvec Torus::lattice_coords(const cvec& v) const {
  rvec rhs(2 * g_);
  rhs.head(g_) = v.real();
  rhs.tail(g_) = v.imag();
  return lu_.solve(rhs);
}

cvec Torus::from_lattice_coords(const rvec& x) const {
  rvec w = real_basis_ * x;
  cvec v(g_);
  for (int i = 0; i < g_; ++i) v(i) = cplx(w(i), w(g_ + i));
  return v;
}

cvec Torus::lattice_vector(const ivec& n) const {
  rvec x(2 * g_);
  for (int i = 0; i < 2 * g_; ++i) x(i) = static_cast<double>(n(i));
  return from_lattice_coords(x);
}

cvec Torus::reduce(const cvec& v) const {
  rvec x = lattice_coords(v);
  for (int i = 0; i < x.size(); ++i) {
    double f = x(i) - std::floor(x(i));
    if (f >= 1.0) f -= 1.0;
    if (f < 0.0) f = 0.0;
    x(i) = f;
  }
  return from_lattice_coords(x);
}

cvec Torus::reduce_centered(const cvec& v) const {
  rvec x = lattice_coords(v);
  for (int i = 0; i < x.size(); ++i) {
    double f = x(i) - std::floor(x(i) + 0.5);
    if (f >= 0.5) f -= 1.0;
    if (f < -0.5) f = -0.5;
    x(i) = f;
  }
  return from_lattice_coords(x);
}

std::vector<cvec> Torus::torsion_points(int n) const {
  require(n >= 1, errc::invalid_argument, "torsion order must be >= 1");
  const int dim = 2 * g_;
  std::vector<cvec> pts;
  pts.reserve(static_cast<size_t>(std::pow(n, dim)));
  ivec k = ivec::Zero(dim);
  while (true) {
    rvec x(dim);
    for (int i = 0; i < dim; ++i) x(i) = static_cast<double>(k(i)) / n;
    pts.push_back(from_lattice_coords(x));
    int i = dim - 1;
    while (i >= 0) {
      if (++k(i) < n) break;
      k(i) = 0;
      --i;
    }
    if (i < 0) break;
  }
  return pts;
}

bool Torus::same_as(const Torus& other) const {
  if (g_ != other.g_) return false;
  return (periods_.array() == other.periods_.array()).all();
}

IntAltForm::IntAltForm(imat m) : m_(std::move(m)) {
  require(m_.rows() == m_.cols(), errc::invalid_argument, "alternating form must be square");
  require((m_ + m_.transpose()).isZero(), errc::invalid_argument,
          "alternating form requires E^T = -E");
}

int64_t int_det(const imat& m) {
  // Bareiss fraction-free elimination over a __int128 working copy.
  const int n = static_cast<int>(m.rows());
  require(n == m.cols(), errc::invalid_argument, "determinant of non-square matrix");
  if (n == 0) return 1;
  std::vector<__int128> a(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[static_cast<size_t>(i) * n + j] = m(i, j);
  auto at = [&](int i, int j) -> __int128& { return a[static_cast<size_t>(i) * n + j]; };
  __int128 prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (at(k, k) == 0) {
      int piv = -1;
      for (int i = k + 1; i < n; ++i)
        if (at(i, k) != 0) { piv = i; break; }
      if (piv < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(at(k, j), at(piv, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
    prev = at(k, k);
  }
  __int128 det = at(n - 1, n - 1) * sign;
  require(det <= INT64_MAX && det >= INT64_MIN, errc::internal, "determinant overflow");
  return static_cast<int64_t>(det);
}

int64_t int_pfaffian(const imat& m) {
  const int n = static_cast<int>(m.rows());
  require(n % 2 == 0, errc::invalid_argument, "pfaffian needs even dimension");
  if (n == 0) return 1;
  if (n == 2) return m(0, 1);
  // Expansion along the first row.
  int64_t acc = 0;
  for (int j = 1; j < n; ++j) {
    if (m(0, j) == 0) continue;
    imat sub(n - 2, n - 2);
    int r = 0;
    for (int i = 1; i < n; ++i) {
      if (i == j) continue;
      int c = 0;
      for (int k = 1; k < n; ++k) {
        if (k == j) continue;
        sub(r, c++) = m(i, k);
      }
      ++r;
    }
    int64_t sgn = (j % 2 == 1) ? 1 : -1;
    acc += sgn * m(0, j) * int_pfaffian(sub);
  }
  return acc;
}

SmithResult smith_normal_form(const imat& m) {
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  imat d = m;
  imat left = identity_imat(rows);
  imat right = identity_imat(cols);
  const int nmin = std::min(rows, cols);

  for (int s = 0; s < nmin; ++s) {
    for (int guard = 0;; ++guard) {
      require(guard < 20000, errc::internal, "smith reduction did not converge");
      int pi = -1, pj = -1;
      int64_t best = 0;
      for (int i = s; i < rows; ++i)
        for (int j = s; j < cols; ++j) {
          int64_t v = std::abs(d(i, j));
          if (v != 0 && (pi < 0 || v < best)) {
            best = v;
            pi = i;
            pj = j;
          }
        }
      if (pi < 0) { s = nmin; break; }  // trailing block is zero
      if (pi != s) { d.row(s).swap(d.row(pi)); left.row(s).swap(left.row(pi)); }
      if (pj != s) { d.col(s).swap(d.col(pj)); right.col(s).swap(right.col(pj)); }
      bool clean = true;
      for (int i = s + 1; i < rows; ++i) {
        int64_t q = round_div(d(i, s), d(s, s));
        if (q) { d.row(i) -= q * d.row(s); left.row(i) -= q * left.row(s); }
        if (d(i, s) != 0) clean = false;
      }
      for (int j = s + 1; j < cols; ++j) {
        int64_t q = round_div(d(s, j), d(s, s));
        if (q) { d.col(j) -= q * d.col(s); right.col(j) -= q * right.col(s); }
        if (d(s, j) != 0) clean = false;
      }
      if (!clean) continue;
      int ti = -1;
      for (int i = s + 1; i < rows && ti < 0; ++i)
        for (int j = s + 1; j < cols; ++j)
          if (d(i, j) % d(s, s) != 0) { ti = i; break; }
      if (ti < 0) break;
      d.row(s) += d.row(ti);
      left.row(s) += left.row(ti);
    }
    if (s >= nmin) break;
    if (d(s, s) < 0) { d.row(s) = -d.row(s); left.row(s) = -left.row(s); }
  }

  SmithResult out;
  out.divisors.resize(nmin);
  for (int i = 0; i < nmin; ++i) out.divisors(i) = d(i, i);
  out.left = std::move(left);
  out.right = std::move(right);
  return out;
}

FrobeniusResult frobenius_normal_form(const IntAltForm& ef) {
  imat e = ef.matrix();
  const int n = static_cast<int>(e.rows());
  require(n % 2 == 0 && n > 0, errc::degenerate_form,
          "alternating form of odd size is degenerate");
  require(int_det(e) != 0, errc::degenerate_form, "alternating form is degenerate");
  const int g = n / 2;
  imat u = identity_imat(n);

  auto colop = [&](int dst, int src, int64_t k) {
    e.col(dst) += k * e.col(src);
    e.row(dst) += k * e.row(src);
    u.col(dst) += k * u.col(src);
  };
  auto swapop = [&](int i, int j) {
    if (i == j) return;
    e.col(i).swap(e.col(j));
    e.row(i).swap(e.row(j));
    u.col(i).swap(u.col(j));
  };

  for (int k = 0; k < g; ++k) {
    const int b = 2 * k;
    for (int guard = 0;; ++guard) {
      require(guard < 20000, errc::internal, "symplectic reduction did not converge");
      int pi = -1, pj = -1;
      int64_t best = 0;
      for (int i = b; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          int64_t v = std::abs(e(i, j));
          if (v != 0 && (pi < 0 || v < best)) {
            best = v;
            pi = i;
            pj = j;
          }
        }
      require(pi >= 0, errc::internal, "unexpected zero block in symplectic reduction");
      if (pi != b) {
        swapop(pi, b);
        if (pj == b) pj = pi;
      }
      if (pj != b + 1) swapop(pj, b + 1);
      if (e(b, b + 1) < 0) swapop(b, b + 1);
      const int64_t d = e(b, b + 1);
      bool clean = true;
      for (int m = b + 2; m < n; ++m) {
        int64_t q = round_div(e(b, m), d);
        if (q) colop(m, b + 1, -q);
        int64_t q2 = round_div(e(b + 1, m), d);
        if (q2) colop(m, b, q2);
        if (e(b, m) != 0 || e(b + 1, m) != 0) clean = false;
      }
      if (!clean) continue;
      int ti = -1;
      for (int i = b + 2; i < n && ti < 0; ++i)
        for (int j = i + 1; j < n; ++j)
          if (e(i, j) % d != 0) { ti = i; break; }
      if (ti < 0) break;
      colop(b, ti, 1);
    }
  }

  // Reorder interleaved pairs (a1,b1,a2,b2,...) to (a1..ag, b1..bg).
  imat perm = imat::Zero(n, n);
  for (int j = 0; j < g; ++j) {
    perm(2 * j, j) = 1;
    perm(2 * j + 1, g + j) = 1;
  }
  imat u_final = u * perm;
  imat e_final = perm.transpose() * e * perm;

  FrobeniusResult out;
  out.divisors.resize(g);
  for (int i = 0; i < g; ++i) out.divisors(i) = e_final(i, g + i);
  out.basis_change = std::move(u_final);

  // Exact postconditions.
  imat check = out.basis_change.transpose() * ef.matrix() * out.basis_change;
  imat expect = imat::Zero(n, n);
  for (int i = 0; i < g; ++i) {
    expect(i, g + i) = out.divisors(i);
    expect(g + i, i) = -out.divisors(i);
  }
  require((check - expect).isZero(), errc::internal, "symplectic normal form check failed");
  for (int i = 0; i + 1 < g; ++i)
    require(out.divisors(i) > 0 && out.divisors(i + 1) % out.divisors(i) == 0, errc::internal,
            "divisor chain violated");
  require(std::abs(int_det(out.basis_change)) == 1, errc::internal, "basis change not unimodular");
  return out;
}

Isogeny::Isogeny(TorusPtr source, TorusPtr target, cmat linear_map, imat lattice_matrix)
    : source_(std::move(source)),
      target_(std::move(target)),
      alpha_(std::move(linear_map)),
      m_(std::move(lattice_matrix)) {
  require(source_ && target_, errc::invalid_argument, "isogeny requires both tori");
  const int g = source_->dim();
  require(target_->dim() == g, errc::torus_mismatch, "isogeny between tori of equal dimension");
  require(alpha_.rows() == g && alpha_.cols() == g, errc::invalid_argument,
          "linear map must be g x g");
  require(m_.rows() == 2 * g && m_.cols() == 2 * g, errc::invalid_argument,
          "lattice matrix must be 2g x 2g");
  cmat lhs = alpha_ * source_->periods();
  cmat rhs = target_->periods() * m_.cast<double>();
  double scale = std::max(1.0, std::max(lhs.cwiseAbs().maxCoeff(), rhs.cwiseAbs().maxCoeff()));
  require((lhs - rhs).cwiseAbs().maxCoeff() <= kAmbientTol * scale, errc::invalid_argument,
          "alpha * source periods != target periods * lattice matrix");
  int64_t det = int_det(m_);
  require(det != 0, errc::invalid_argument, "isogeny lattice matrix must be nondegenerate");
  degree_ = std::abs(det);

  snf_ = smith_normal_form(m_);
  const int dim = 2 * g;
  radices_.resize(dim);
  for (int i = 0; i < dim; ++i) radices_[i] = snf_.divisors(i);
  den_ = radices_.back();  // divisor chain: the last invariant is the lcm

  // Kernel representatives: columns of right * diag(1/s_i) generate
  // M^{-1}Z^{2g}/Z^{2g}.  Coordinates are kept as exact numerators over den_
  // so that kernel lifts and lattice transfers stay integrally consistent.
  kernel_.reserve(static_cast<size_t>(degree_));
  ivec tuple = ivec::Zero(dim);
  while (true) {
    ivec scaled(dim);
    for (int i = 0; i < dim; ++i) scaled(i) = (den_ / radices_[i]) * tuple(i);
    ivec num = snf_.right * scaled;
    for (int i = 0; i < dim; ++i) {
      int64_t r = num(i) % den_;
      if (r < 0) r += den_;
      num(i) = r;
    }
    KernelPoint kp;
    kp.numerator = num;
    kp.coords.resize(dim);
    for (int i = 0; i < dim; ++i)
      kp.coords(i) = static_cast<double>(num(i)) / static_cast<double>(den_);
    kp.point = source_->from_lattice_coords(kp.coords);
    kp.tuple = tuple;
    kernel_.push_back(std::move(kp));
    int i = dim - 1;
    while (i >= 0) {
      if (++tuple(i) < radices_[i]) break;
      tuple(i) = 0;
      --i;
    }
    if (i < 0) break;
  }
  require(static_cast<int64_t>(kernel_.size()) == degree_, errc::internal,
          "kernel enumeration size mismatch");
}

bool Isogeny::is_identity() const {
  if (!source_->same_as(*target_)) return false;
  const int g = source_->dim();
  if (!m_.isIdentity()) return false;
  return (alpha_ - cmat::Identity(g, g)).cwiseAbs().maxCoeff() <= kAmbientTol;
}

cvec Isogeny::lift(const cvec& v) const { return alpha_.partialPivLu().solve(v); }

std::vector<int64_t> Isogeny::kernel_invariants() const {
  std::vector<int64_t> inv;
  for (int64_t s : radices_)
    if (s > 1) inv.push_back(s);
  return inv;
}

int Isogeny::index_of_tuple(const ivec& t) const {
  const int dim = static_cast<int>(radices_.size());
  int64_t idx = 0;
  for (int i = 0; i < dim; ++i) idx = idx * radices_[i] + t(i);
  return static_cast<int>(idx);
}

int Isogeny::kernel_class(const ivec& target_coords) const {
  ivec z = snf_.left * target_coords;
  const int dim = static_cast<int>(radices_.size());
  ivec t(dim);
  for (int i = 0; i < dim; ++i) {
    int64_t r = z(i) % radices_[i];
    if (r < 0) r += radices_[i];
    t(i) = r;
  }
  return index_of_tuple(t);
}

int Isogeny::kernel_add(int a, int b) const {
  const int dim = static_cast<int>(radices_.size());
  ivec t(dim);
  for (int i = 0; i < dim; ++i)
    t(i) = (kernel_[a].tuple(i) + kernel_[b].tuple(i)) % radices_[i];
  return index_of_tuple(t);
}

ivec Isogeny::transfer_to_source(const ivec& target_coords, int a) const {
  const int dim = static_cast<int>(radices_.size());
  // alpha^{-1}(lambda) in source-lattice coordinates, scaled by den_.
  ivec z = snf_.left * target_coords;
  ivec scaled(dim);
  for (int i = 0; i < dim; ++i) scaled(i) = (den_ / radices_[i]) * z(i);
  ivec base = snf_.right * scaled;

  int ak = kernel_add(a, kernel_class(target_coords));
  ivec vec = base + kernel_[a].numerator - kernel_[ak].numerator;
  ivec out(dim);
  for (int i = 0; i < dim; ++i) {
    require(vec(i) % den_ == 0, errc::internal, "kernel transfer not integral");
    out(i) = vec(i) / den_;
  }
  return out;
}

}  // namespace abelgen
