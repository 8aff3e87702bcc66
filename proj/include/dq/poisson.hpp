#pragma once
#include <string>
#include <vector>

#include "dq/poly.hpp"

namespace dq {

// Antisymmetric bivector with polynomial components.  The full d x d matrix is
// stored; construction enforces exact antisymmetry.
class PoissonStructure {
 public:
  // comps given for i<j only, as {(i, j, poly)} with 0-based indices.
  PoissonStructure(int dim, const std::vector<std::tuple<int, int, Poly>>& upper);

  int dim() const { return dim_; }
  const Poly& at(int i, int j) const { return comp_.at(i).at(j); }
  bool is_constant() const;
  // Max total degree over components (-1 if identically zero).
  int max_degree() const;

  // Standard constant symplectic structure on even dim: +1 on (2k, 2k+1).
  static PoissonStructure standard_symplectic(int dim);
  // so(3)-type linear structure on d=3: comp(i,j) = eps_{ijk} x_k.
  static PoissonStructure so3();

 private:
  int dim_;
  std::vector<std::vector<Poly>> comp_;
};

// J^{ijk} = sum_l (Pi^{il} d_l Pi^{jk} + Pi^{jl} d_l Pi^{ki} + Pi^{kl} d_l Pi^{ij}).
// Returned dense as J[i][j][k]; identically zero iff Pi satisfies Jacobi.
std::vector<std::vector<std::vector<Poly>>> jacobiator(const PoissonStructure& pi);

bool jacobiator_is_zero(const PoissonStructure& pi);

// Versioned JSON round-trip ("poisson/1"); only i<j components are stored.
std::string poisson_to_json(const PoissonStructure& pi);
PoissonStructure poisson_from_json(const std::string& text);
PoissonStructure poisson_from_file(const std::string& path);

}  // namespace dq
