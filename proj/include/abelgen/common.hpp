#ifndef ABELGEN_COMMON_HPP
#define ABELGEN_COMMON_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace abelgen {

using std::int64_t;
using cplx = std::complex<double>;

using cvec = Eigen::VectorXcd;
using cmat = Eigen::MatrixXcd;
using rvec = Eigen::VectorXd;
using rmat = Eigen::MatrixXd;
using ivec = Eigen::Matrix<int64_t, Eigen::Dynamic, 1>;
using imat = Eigen::Matrix<int64_t, Eigen::Dynamic, Eigen::Dynamic>;

// Error taxonomy shared by the C++ core and the C API.
enum class errc : int {
  ok = 0,
  invalid_argument,
  degenerate_form,
  not_ample,
  indefinite_borderline,
  torus_mismatch,
  truncation_insufficient,
  realization_mismatch,
  non_integral_chern_class,
  identity_violation,
  lattice_mismatch,
  zero_vector,
  effectivity_undecidable,
  hypothesis_not_met,
  unbounded_entry,
  parse_error,
  reference_error,
  io_error,
  internal,
};

const char* errc_name(errc c);

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

// Ambient consistency tolerance for double-precision period data.
inline constexpr double kAmbientTol = 1e-10;

}  // namespace abelgen

#endif
