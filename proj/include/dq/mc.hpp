#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "dq/graph.hpp"
#include "dq/halfplane.hpp"

namespace dq {

extern const char* const kNormalizationTag;  // "mirror2pi-v1"

struct McOptions {
  long samples = 100000;
  uint64_t seed = 1;
  int threads = 0;                // 0: runtime default
  std::vector<double> boundary;   // axis positions per observable, in vertex
                                  // order; empty means 0, 1, 2, ...
};

struct WeightResult {
  std::string graph_hash;
  double estimate = 0;
  double std_error = 0;
  long samples = 0;
  uint64_t seed = 0;
  std::string normalization;
  std::vector<double> positions;
  double rejected_fraction = 0;
  bool structural_zero = false;
  std::string reason;
  bool converged = true;
};

// Monte-Carlo estimate of the configuration-space integral: internal vertices
// range over the upper half-plane, each edge contributes the mirror-charge
// angle form, and the wedge of edge forms is evaluated as a determinant whose
// rows follow the stored edge order and whose columns are (x, y) per internal
// vertex in index order.  Deterministic for a fixed (graph, options) pair,
// bit-identical across thread counts.
WeightResult graph_weight_mc(const GraphClass& gc, const McOptions& opt);

// Same estimator without the parallel loop; kept as the reference the
// parallel kernel is tested against.
WeightResult graph_weight_mc_serial(const GraphClass& gc, const McOptions& opt);

// Integrand at one fixed configuration (used by the boundary-behavior tests).
// `internal` lists positions for non-observable vertices in index order.
double weight_integrand(const FeynmanGraph& g,
                        const std::vector<double>& boundary,
                        const std::vector<HalfPlanePoint>& internal);

}  // namespace dq
