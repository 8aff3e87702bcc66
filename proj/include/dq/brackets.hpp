#pragma once
#include <map>
#include <string>
#include <vector>

#include "dq/connection.hpp"
#include "dq/poly.hpp"

namespace dq {

// Multilinear bracket tower generated from connection data.  Stored as
// generating polynomials in 2*dim variables: the first dim are base
// coordinates, the last dim are the fiber generators the tensor slots couple
// to.  comp(n, k, a) is homogeneous of fiber degree n.
class BracketSystem {
 public:
  BracketSystem(int dim, int max_arity);

  int dim() const { return dim_; }
  int max_arity() const { return max_arity_; }

  const Poly& comp(int n, int k, int a) const;
  Poly& comp_mut(int n, int k, int a);

  // Fiber variable index inside the 2*dim generating ring.
  int fiber(int i) const { return dim_ + i; }

 private:
  int dim_;
  int max_arity_;
  std::vector<std::vector<std::vector<Poly>>> comp_;  // [n][k][a], n in 1..max_arity
};

// Unary piece is the connection itself; higher pieces follow the homotopy
// transfer recursion.  Throws if the connection carries torsion.
BracketSystem build_brackets(const Connection& c, int max_arity);

// Tensor coefficients at arity n: key (k, a, i1 <= ... <= in), all 0-based,
// value a polynomial in the base coordinates.  Symmetric slots are stored
// sorted; only nonzero entries appear.
using TensorKey = std::vector<int>;
using BracketTensor = std::map<TensorKey, Poly>;
BracketTensor bracket_tensor(const BracketSystem& br, int n);
// Lookup honoring slot symmetry (unsorted i allowed); zero when absent.
Poly tensor_at(const BracketTensor& t, int dim_hint, int k, int a, std::vector<int> idx);

struct ArityResidual {
  int arity = 0;
  bool is_zero = true;
  int nonzero_entries = 0;
};

// Quadratic relations of the tower, one report per arity in 1..arity_max.
std::vector<ArityResidual> check_homotopy_identities(const BracketSystem& br, int arity_max);

struct PairingReport {
  int arity = 0;
  bool is_zero = true;
  // Residual entry counts per adjacent transposition of the lowered slot list
  // (the form output slot followed by the n inputs).
  std::vector<int> transposition_nonzero;
};

// Invariance of omega(l_n(...), -) under adjacent slot swaps.
std::vector<PairingReport> check_pairing_invariance(const BracketSystem& br, const Matrix& omega,
                                                    int arity_max);

// Full symmetrization of the arity-n tensor over the form slot together with
// all inputs; vanishes for towers produced by build_brackets.
bool check_gauge_condition(const BracketSystem& br, int n);

struct ShuffleReport {
  int total_arity = 0;
  bool is_zero = true;
  int nonzero_entries = 0;
};

// Independent evaluation of the tower relations on the diagonal: tensors are
// contracted against a fresh vector of symbols and the unary boundary term is
// added explicitly.  Exercises a different assembly path than
// check_homotopy_identities.
ShuffleReport shuffle_cancellation_check(const BracketSystem& br, int total_arity);

struct HolographyKernel {
  int arity = 0;           // number of input slots beyond the output pairing
  Rational weight{0};      // prefactor carried by this kernel
  BracketTensor tensor;    // key (i0, a, i1 <= ... <= i_arity)
};

// Boundary kernel list: the constant half-pairing at arity 0, then the
// lowered brackets with 1/(n+1)! weights up to the truncation order.  Kernels
// that vanish identically are omitted.
std::vector<HolographyKernel> holography_homotopy_term(const BracketSystem& br,
                                                       const Matrix& omega, int truncation);

// Conjugate the connection by the constant invertible matrix A (new frame
// coordinates y = A x); used by naturality checks.
Connection conjugate_connection(const Connection& c, const Matrix& A);

std::string brackets_to_json(const BracketSystem& br);

}  // namespace dq
