#pragma once
#include <array>
#include <string>
#include <vector>

#include "dq/rational.hpp"

namespace dq {

struct SurfaceTopology {
  int genus = 0;
  int boundaries = 0;
};

struct CohomologyDims {
  std::array<int, 3> absolute;  // degrees 0..2 of the surface
  std::array<int, 3> relative;  // relative to its boundary
  std::array<int, 2> boundary;  // degrees 0..1 of the boundary circles
};

// Boundary theories need at least one boundary circle; n = 0 is rejected.
CohomologyDims cohomology_dims(const SurfaceTopology& s);

struct DiagonalEntry {
  std::string left;
  std::string right;
  Rational coeff;
};

struct DiagonalClassSpec {
  std::vector<DiagonalEntry> entries;
};

// Basis-pair expansion of the class dual to the diagonal; entry count is
// always 2g + n.
DiagonalClassSpec diagonal_class(const SurfaceTopology& s);

struct TadpoleReport {
  int euler = 0;
  bool admissible = false;
};

// Short-loop regularization is possible only at euler characteristic zero.
TadpoleReport tadpole_admissible(const SurfaceTopology& s);

std::string surface_info_json(const SurfaceTopology& s);

}  // namespace dq
