#pragma once
#include <map>
#include <string>
#include <vector>

#include "dq/bidiff.hpp"
#include "dq/hbar_series.hpp"
#include "dq/mc.hpp"
#include "dq/poisson.hpp"
#include "dq/poly.hpp"
#include "dq/weight_cache.hpp"

namespace dq {

using StarSeries = HbarSeries<Poly>;

// True for the k-fold filled-wedge shape: every internal vertex is an
// inputless bivector vertex wired straight to the two observables.  These are
// the only admissible boundary graphs whose weight has a closed form, (1/2)^k.
bool is_multiwedge(const FeynmanGraph& g);

// Deformed product through the given order with exact rational weights.
// Restricted to constant bivectors, where the filled-wedge graphs are the only
// ones acting; any other graph with a nonzero operator raises FormatError
// naming the missing weight.
StarSeries star_product_exact(const Poly& f, const Poly& g,
                              const PoissonStructure& pi, int order,
                              int arity_cap = 3);

// (f*g)*h - f*(g*h), truncated at the same order.  Identically zero for the
// exact constant-bivector product.
StarSeries associativity_defect_exact(const Poly& f, const Poly& g,
                                      const Poly& h, const PoissonStructure& pi,
                                      int order, int arity_cap = 3);

// One weight estimate per admissible boundary graph, indexed by canonical
// hash.  Order of `hashes` fixes the parameter slots used by Dual gradients.
struct NumericWeights {
  std::vector<std::string> hashes;
  std::vector<double> value;   // estimate / |Aut| is applied later, raw here
  std::vector<double> sigma;
  std::vector<char> converged;
  std::map<std::string, int> slot;

  int require(const std::string& hash) const;  // FormatError when absent
  bool all_converged() const;
};

// Sub-seed scheme for per-graph estimates: the master seed is mixed with a
// 64-bit FNV-1a digest of the canonical hash, so streams are independent and
// do not depend on enumeration order.
uint64_t boundary_weight_seed(uint64_t master, const std::string& hash);

// Runs the estimator (or reads the cache, writing back fresh results) for
// every admissible boundary graph of order 0..order.  Seeds are derived per
// class so the collection is reproducible and estimates are independent.
NumericWeights collect_boundary_weights(int order, int arity_cap,
                                        const McOptions& base,
                                        WeightCache* cache = nullptr);

// Value plus gradient with respect to the weight parameters, so sampling
// error propagates exactly through the linear and bilinear assembly.
struct Dual {
  double v = 0.0;
  std::vector<double> g;

  Dual() = default;
  Dual(double value, size_t nparam) : v(value), g(nparam, 0.0) {}
  double sigma(const NumericWeights& w) const;
};

Dual dual_add(const Dual& a, const Dual& b);
Dual dual_sub(const Dual& a, const Dual& b);
Dual dual_mul(const Dual& a, const Dual& b);

// Polynomial with Dual coefficients; mirrors the exact Poly interface far
// enough for the product assembly.
class DualPoly {
 public:
  DualPoly() : dim_(0), nparam_(0) {}
  DualPoly(int dim, size_t nparam) : dim_(dim), nparam_(nparam) {}
  static DualPoly from_poly(const Poly& p, size_t nparam);

  int dim() const { return dim_; }
  size_t nparam() const { return nparam_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<MultiIndex, Dual>& terms() const { return terms_; }
  Dual coeff(const MultiIndex& m) const;

  void add_term(const MultiIndex& m, const Dual& c);
  DualPoly operator+(const DualPoly& o) const;
  DualPoly operator-(const DualPoly& o) const;
  DualPoly operator*(const DualPoly& o) const;
  DualPoly& operator+=(const DualPoly& o);
  DualPoly& operator-=(const DualPoly& o);
  DualPoly scaled(const Dual& c) const;
  DualPoly partial(int i) const;

  double max_abs() const;  // largest |value| over coefficients

 private:
  int dim_;
  size_t nparam_;
  std::map<MultiIndex, Dual> terms_;
};

using NumericStarSeries = HbarSeries<DualPoly>;

// Per-coefficient comparison of |value| against nsigma * (propagated sigma)
// plus an absolute floor for coefficients that are structural zeros.
struct ErrorBoundReport {
  bool ok = true;
  double max_abs = 0.0;      // largest coefficient magnitude seen
  double bound_at_max = 0.0; // the bound that coefficient had to meet
};

ErrorBoundReport check_within(const DualPoly& p, const NumericWeights& w,
                              double nsigma, double abs_floor);
ErrorBoundReport check_within(const NumericStarSeries& s,
                              const NumericWeights& w, double nsigma,
                              double abs_floor);

NumericStarSeries star_product_numeric(const Poly& f, const Poly& g,
                                       const PoissonStructure& pi,
                                       const NumericWeights& w, int order,
                                       int arity_cap = 3);

NumericStarSeries associativity_defect_numeric(const Poly& f, const Poly& g,
                                               const Poly& h,
                                               const PoissonStructure& pi,
                                               const NumericWeights& w,
                                               int order, int arity_cap = 3);

}  // namespace dq
