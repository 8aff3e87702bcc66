#pragma once
#include <optional>
#include <string>
#include <vector>

#include "dq/poly.hpp"

namespace dq {

using Matrix = std::vector<std::vector<Rational>>;

// Torsion-free affine connection with polynomial Christoffel symbols, plus an
// optional constant antisymmetric form the connection is checked against.
class Connection {
 public:
  // entries: {(k, a, b, poly)} with a <= b; the (b, a) copy is implied.
  Connection(int dim, const std::vector<std::tuple<int, int, int, Poly>>& entries,
             std::optional<Matrix> omega = std::nullopt);

  // Accepts a full, possibly asymmetric array (for torsion checks).
  static Connection from_raw(int dim, std::vector<std::vector<std::vector<Poly>>> gamma,
                             std::optional<Matrix> omega = std::nullopt);

  int dim() const { return dim_; }
  const Poly& gamma(int k, int a, int b) const { return gamma_.at(k).at(a).at(b); }
  const std::optional<Matrix>& omega() const { return omega_; }

  bool is_torsion_free() const;
  // nabla omega == 0, meaningful only when omega is present.
  bool is_omega_parallel() const;

  // R^k_{j,mu,nu} = d_mu G^k_{nu j} - d_nu G^k_{mu j} + G^k_{mu m} G^m_{nu j} - G^k_{nu m} G^m_{mu j}
  Poly curvature(int k, int j, int mu, int nu) const;

 private:
  Connection() = default;
  int dim_ = 0;
  std::vector<std::vector<std::vector<Poly>>> gamma_;  // [k][a][b]
  std::optional<Matrix> omega_;
};

// Standard constant symplectic matrix: +1 at (2k, 2k+1).
Matrix standard_omega(int dim);
bool matrix_is_antisymmetric(const Matrix& m);
// Exact determinant by fraction-free elimination.
Rational matrix_det(Matrix m);
// Exact inverse; throws FormatError when singular.
Matrix matrix_inverse(Matrix m);

std::string connection_to_json(const Connection& c);
Connection connection_from_json(const std::string& text);
Connection connection_from_file(const std::string& path);

}  // namespace dq
