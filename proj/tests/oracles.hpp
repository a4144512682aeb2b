// Independent oracles for the test suite.  These deliberately avoid the
// library's own normal-form, theta, and evaluation code paths.
#ifndef ABELGEN_TESTS_ORACLES_HPP
#define ABELGEN_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

using cplx = std::complex<double>;
using imat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using ivec = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

// Elementary divisors by naive row/column gcd reduction (no congruence
// bookkeeping, no pivot strategy shared with the library).
inline std::vector<std::int64_t> elementary_divisors(imat a) {
  const int rows = static_cast<int>(a.rows());
  const int cols = static_cast<int>(a.cols());
  const int n = std::min(rows, cols);
  std::vector<std::int64_t> out;
  for (int s = 0; s < n; ++s) {
    for (;;) {
      int pi = -1, pj = -1;
      std::int64_t best = 0;
      for (int i = s; i < rows; ++i)
        for (int j = s; j < cols; ++j) {
          std::int64_t v = std::abs(a(i, j));
          if (v != 0 && (pi < 0 || v < best)) { best = v; pi = i; pj = j; }
        }
      if (pi < 0) { out.push_back(0); break; }
      a.row(s).swap(a.row(pi));
      a.col(s).swap(a.col(pj));
      bool again = false;
      for (int i = s + 1; i < rows; ++i) {
        std::int64_t q = a(i, s) / a(s, s);
        if (q) a.row(i) -= q * a.row(s);
        if (a(i, s) != 0) again = true;
      }
      for (int j = s + 1; j < cols; ++j) {
        std::int64_t q = a(s, j) / a(s, s);
        if (q) a.col(j) -= q * a.col(s);
        if (a(s, j) != 0) again = true;
      }
      if (again) continue;
      bool divides = true;
      for (int i = s + 1; i < rows && divides; ++i)
        for (int j = s + 1; j < cols; ++j)
          if (a(i, j) % a(s, s) != 0) { a.row(s) += a.row(i); divides = false; break; }
      if (!divides) continue;
      out.push_back(std::abs(a(s, s)));
      break;
    }
  }
  return out;
}

// Pfaffian of a 4x4 alternating matrix by the closed-form expansion.
inline std::int64_t pfaffian4(const imat& a) {
  return a(0, 1) * a(2, 3) - a(0, 2) * a(1, 3) + a(0, 3) * a(1, 2);
}

// Kernel of t -> M t on R^{2g}/Z^{2g}: all classes t with M t integral,
// found by scanning a bounded integer box.  Returns coordinates in [0,1).
inline std::vector<Eigen::VectorXd> kernel_by_scan(const imat& m) {
  const int n = static_cast<int>(m.rows());
  Eigen::MatrixXd minv = m.cast<double>().inverse();
  std::int64_t bound = 0;
  for (int i = 0; i < n; ++i) {
    std::int64_t row = 0;
    for (int j = 0; j < n; ++j) row += std::abs(m(i, j));
    bound = std::max(bound, row);
  }
  std::set<std::vector<std::int64_t>> seen;
  std::vector<Eigen::VectorXd> out;
  std::vector<std::int64_t> z(n, -bound);
  const std::int64_t quant = 1'000'000;
  for (;;) {
    Eigen::VectorXd zt(n);
    for (int i = 0; i < n; ++i) zt(i) = static_cast<double>(z[i]);
    Eigen::VectorXd t = minv * zt;
    std::vector<std::int64_t> key(n);
    bool ok = true;
    for (int i = 0; i < n; ++i) {
      double f = t(i) - std::floor(t(i));
      if (f >= 1.0) f -= 1.0;
      double scaled = f * quant;
      std::int64_t q = std::llround(scaled);
      if (std::abs(scaled - q) > 1e-3) { ok = false; break; }  // not on the grid
      key[i] = q % quant;
    }
    if (ok && seen.insert(key).second) {
      Eigen::VectorXd coords(n);
      for (int i = 0; i < n; ++i) coords(i) = static_cast<double>(key[i]) / quant;
      out.push_back(coords);
    }
    int i = n - 1;
    while (i >= 0) {
      if (++z[i] <= bound) break;
      z[i] = -bound;
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

// Classical theta with characteristic c/d for normalized data (z, d):
//   sum_n exp(pi i (n+c/d)^T z (n+c/d) + 2 pi i (n+c/d)^T w)
// summed naively over a box.
inline cplx naive_theta(const Eigen::MatrixXcd& z, const ivec& d, const ivec& c,
                        const Eigen::VectorXcd& w, int box) {
  const int g = static_cast<int>(z.rows());
  const cplx ipi(0.0, std::numbers::pi);
  ivec n = ivec::Constant(g, -box);
  cplx acc(0.0, 0.0);
  for (;;) {
    Eigen::VectorXcd t(g);
    for (int i = 0; i < g; ++i)
      t(i) = cplx(static_cast<double>(n(i)) +
                      static_cast<double>(c(i)) / static_cast<double>(d(i)),
                  0.0);
    cplx quad = (t.transpose() * z * t)(0);
    cplx lin = (t.transpose() * w)(0);
    acc += std::exp(ipi * quad + 2.0 * ipi * lin);
    int i = g - 1;
    while (i >= 0) {
      if (++n(i) <= box) break;
      n(i) = -box;
      --i;
    }
    if (i < 0) break;
  }
  return acc;
}

}  // namespace oracles

#endif
