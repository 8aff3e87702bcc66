#pragma once
#include <map>
#include <utility>

#include "dq/graph.hpp"
#include "dq/poisson.hpp"
#include "dq/poly.hpp"

namespace dq {

// Finite sum of terms  coeff(x) * (d^L f) * (d^R g)  acting on a pair of
// polynomials; L and R are derivative multi-indices.  Terms are merged and
// zero coefficients dropped, so equal operators compare equal.
class BiDiffOperator {
 public:
  explicit BiDiffOperator(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<std::pair<MultiIndex, MultiIndex>, Poly>& terms() const {
    return terms_;
  }

  void add_term(const MultiIndex& left, const MultiIndex& right,
                const Poly& coeff);
  Poly apply(const Poly& f, const Poly& g) const;

  BiDiffOperator operator+(const BiDiffOperator& o) const;
  BiDiffOperator operator*(const Rational& c) const;
  bool operator==(const BiDiffOperator& o) const {
    return dim_ == o.dim_ && terms_ == o.terms_;
  }

 private:
  int dim_;
  std::map<std::pair<MultiIndex, MultiIndex>, Poly> terms_;
};

// Edge-to-derivative translation for a boundary-product graph: each internal
// bivector vertex contributes a component of the bivector indexed by its two
// out-edges in stored edge order, each incoming edge differentiates the
// receiving vertex's component, and edges into the first (second) observable
// accumulate in the left (right) multi-index.  Summation runs over all
// coordinate assignments of the edges.
BiDiffOperator graph_to_bidiff(const GraphClass& gc, const PoissonStructure& pi);

}  // namespace dq
