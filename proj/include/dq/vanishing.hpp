#pragma once
#include <cstdint>
#include <vector>

#include "dq/graph.hpp"
#include "dq/poisson.hpp"
#include "dq/rational.hpp"

namespace dq {

// Exact contraction certificate for a doubled edge between a bivector vertex
// of arity m and a generator vertex of arity n.  The two pairing slots carry
// opposite parities: the generator side is symmetric under the slot swap, the
// bivector side antisymmetric, so summing the basis contraction over both
// slots cancels term by term.  Component tensors are drawn at random with the
// required symmetries and the sum is checked to vanish exactly.
struct VanishingCertificate {
  int m = 0;
  int n = 0;
  int dim = 0;
  bool zero = false;
  long contractions = 0;   // free-index tuples checked
  Rational max_term;       // largest |single term| seen, proves nontriviality
};

VanishingCertificate verify_parallel_edge_vanishing(int m, int n, int dim,
                                                    uint64_t seed);

// Closed-graph survey for a bivector at the given loop orders: enumerates
// admissible closed graphs and keeps those meeting the top-degree condition
// with some bivector vertex taking an input.  For a constant bivector the
// vertex set collapses to the inputless one and the list is provably empty;
// otherwise candidates are reported without any vanishing claim.
struct VacuumReport {
  int max_loops = 0;
  bool constant = false;
  std::vector<GraphClass> candidates;  // sorted by hash, all loop orders pooled
  std::vector<int> loops_of;           // loop order per candidate
  bool empty() const { return candidates.empty(); }
};

VacuumReport regular_vacuum_vanishing(const PoissonStructure& pi, int max_loops,
                                      int arity_cap = 3);

}  // namespace dq
