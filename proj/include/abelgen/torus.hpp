#ifndef ABELGEN_TORUS_HPP
#define ABELGEN_TORUS_HPP

#include <memory>
#include <vector>

#include "abelgen/common.hpp"

namespace abelgen {

// Complex torus V/Lambda given by a g x 2g period matrix whose columns
// generate the lattice.  Immutable after construction.
class Torus {
 public:
  Torus(int g, cmat periods);

  int dim() const { return g_; }
  const cmat& periods() const { return periods_; }
  // 2g x 2g real matrix stacking Re and Im of the period columns.
  const rmat& real_basis() const { return real_basis_; }

  // Coordinates of an ambient vector in the real lattice basis.
  rvec lattice_coords(const cvec& v) const;
  cvec from_lattice_coords(const rvec& x) const;
  // Column of the period matrix at integer coordinates n.
  cvec lattice_vector(const ivec& n) const;

  // Representative with lattice coordinates in [0,1).
  cvec reduce(const cvec& v) const;
  // Representative with lattice coordinates in [-1/2,1/2).
  cvec reduce_centered(const cvec& v) const;

  // All n^{2g} fundamental-domain representatives of (1/n)Lambda/Lambda,
  // ordered lexicographically by their coordinate tuple.
  std::vector<cvec> torsion_points(int n) const;

  bool same_as(const Torus& other) const;

 private:
  int g_;
  cmat periods_;
  rmat real_basis_;
  Eigen::FullPivLU<rmat> lu_;
};

using TorusPtr = std::shared_ptr<const Torus>;

// Integer alternating form on the lattice (E^T = -E).
class IntAltForm {
 public:
  explicit IntAltForm(imat m);
  const imat& matrix() const { return m_; }
  int size() const { return static_cast<int>(m_.rows()); }

 private:
  imat m_;
};

// Exact integer determinant (fraction-free elimination).
int64_t int_det(const imat& m);

// Pfaffian of an even-dimensional alternating integer matrix.
int64_t int_pfaffian(const imat& m);

struct SmithResult {
  ivec divisors;  // s_1 | s_2 | ... , nonnegative
  imat left;      // unimodular U
  imat right;     // unimodular W, U * M * W = diag(divisors)
};

SmithResult smith_normal_form(const imat& m);

struct FrobeniusResult {
  ivec divisors;     // d_1 | d_2 | ... | d_g, positive
  imat basis_change; // unimodular U with U^T E U = [[0,D],[-D,0]]
};

// Symplectic (Frobenius) normal form of a nondegenerate alternating
// integer form.  Throws degenerate_form when det(E) = 0.
FrobeniusResult frobenius_normal_form(const IntAltForm& e);

// Isogeny p : source -> target induced by the linear map alpha with
// alpha * (source periods) = (target periods) * lattice_matrix.
class Isogeny {
 public:
  Isogeny(TorusPtr source, TorusPtr target, cmat linear_map, imat lattice_matrix);

  const TorusPtr& source() const { return source_; }
  const TorusPtr& target() const { return target_; }
  const cmat& linear_map() const { return alpha_; }
  const imat& lattice_matrix() const { return m_; }
  int64_t degree() const { return degree_; }
  bool is_identity() const;

  // Preimage of an ambient target vector under the linear map.
  cvec lift(const cvec& v) const;

  struct KernelPoint {
    cvec point;          // fundamental-domain representative in the source
    rvec coords;         // source-lattice coordinates in [0,1)
    ivec tuple;          // mixed-radix coordinates in prod Z/s_i
    ivec numerator;      // coords = numerator / den, exact, in [0, den)
  };

  // All deg(p) kernel points, canonically ordered by their tuple.
  const std::vector<KernelPoint>& kernel_points() const { return kernel_; }
  // Cyclic invariants s_i > 1 of the kernel group.
  std::vector<int64_t> kernel_invariants() const;

  // Index of the kernel class of a target-lattice vector (integer coords).
  int kernel_class(const ivec& target_coords) const;
  // Kernel group law on point indices.
  int kernel_add(int a, int b) const;

  // Exact source-lattice coordinates of alpha^{-1}(lambda) + x_a - x_{a (+) class(lambda)}
  // for a target-lattice vector lambda; always integral.
  ivec transfer_to_source(const ivec& target_coords, int a) const;

 private:
  TorusPtr source_, target_;
  cmat alpha_;
  imat m_;
  int64_t degree_;
  SmithResult snf_;
  std::vector<KernelPoint> kernel_;
  std::vector<int64_t> radices_;  // all s_i (including 1's)
  int64_t den_ = 1;               // lcm of the s_i (the last one, by divisibility)
  int index_of_tuple(const ivec& t) const;
};

}  // namespace abelgen

#endif
