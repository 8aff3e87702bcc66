#pragma once
#include <vector>

#include "dq/graph.hpp"

namespace dq {

struct FinitenessBound {
  int v_max = 0;          // vertices of total degree three or more
  int chain_l1_cap = 0;   // unary generator vertices per bivalent run
  int chain_pi1_cap = 1;  // inputless bivector vertices per bivalent run
};

FinitenessBound finiteness_bound(int n_ext, int loops, int dim);

struct EnumOptions {
  bool allow_l = true;
  bool allow_pi = true;
  int arity_cap = 3;
  int dim = 2;
  int max_internal = -1;  // derived from the finiteness bounds when negative
  int threads = 0;        // 0 keeps the runtime default
};

// Complete duplicate-free list of admissible classes with n_ext external legs
// and the given loop number, sorted by canonical hash.
std::vector<GraphClass> enumerate_graphs(int n_ext, int loops, const EnumOptions& opt);

// Two boundary observables f and g plus `order` internal bivector vertices,
// each emitting exactly two edges.  No connectivity requirement.
std::vector<GraphClass> enumerate_boundary_graphs(int order, int arity_cap);

// True iff the closed graph meets the top-degree condition (edge count equal
// to twice the vertex count) and some bivector vertex has an input edge.
// Throws when the graph carries legs or observables.
bool vacuum_filter(const GraphClass& gc);

}  // namespace dq
