#pragma once
#include <string>
#include <vector>

#include "dq/graph.hpp"

namespace dq {

// One codimension-one boundary stratum of the configuration space of a
// boundary-product graph, classified by what its contribution does:
//   product_stratum      vertex group meets a boundary observable
//   dirichlet_zero       vertex group meets the boundary away from both
//                        observables; the boundary condition kills the form
//   kontsevich_vanishing collapse with no interior edge structure (pairs with
//                        no connecting edge, and any group of three or more)
//   linfty_identity_term two vertices joined by one edge collapse; the
//                        composite is a bracket insertion
//   delta_term           two vertices joined by a doubled edge collapse; the
//                        loop contracts to a Laplacian insertion
struct Stratum {
  std::string kind;            // "vertex_to_boundary" | "bulk_collapse"
  std::vector<int> vertices;   // participating internal vertices, ascending
  std::string target;          // observable label, or "interior"
  std::string classification;
};

struct QmeLedger {
  std::string graph_hash;
  std::vector<Stratum> strata;  // deterministic order

  long count(const std::string& classification) const;
};

// Complete codimension-one stratum ledger for one admissible boundary graph.
QmeLedger qme_degree_audit(const GraphClass& gc);

std::string qme_ledger_to_json(const QmeLedger& ledger);

}  // namespace dq
