#include "dq/connection.hpp"

#include <fstream>
#include <sstream>

#include "dq/error.hpp"
#include "dq/json_util.hpp"
#include <json.hpp>

namespace dq {

using Json = nlohmann::ordered_json;

static void check_omega(int dim, const std::optional<Matrix>& omega) {
  if (!omega) return;
  if (static_cast<int>(omega->size()) != dim)
    throw DimensionError("omega has " + std::to_string(omega->size()) + " rows, expected " +
                         std::to_string(dim));
  for (const auto& row : *omega)
    if (static_cast<int>(row.size()) != dim) throw DimensionError("omega is not square");
  if (!matrix_is_antisymmetric(*omega)) throw FormatError("omega is not antisymmetric");
  if (matrix_det(*omega) == 0) throw FormatError("omega is degenerate");
}

Connection::Connection(int dim, const std::vector<std::tuple<int, int, int, Poly>>& entries,
                       std::optional<Matrix> omega) {
  if (dim < 1) throw DimensionError("connection dimension must be positive");
  dim_ = dim;
  gamma_.assign(dim, std::vector<std::vector<Poly>>(dim, std::vector<Poly>(dim, Poly(dim))));
  for (const auto& [k, a, b, p] : entries) {
    if (k < 0 || k >= dim || a < 0 || a >= dim || b < 0 || b >= dim)
      throw IndexError("christoffel index out of range");
    if (a > b) throw IndexError("christoffel entries expect a <= b");
    if (p.dim() != dim) throw DimensionError("christoffel polynomial has wrong dimension");
    gamma_[k][a][b] = p;
    gamma_[k][b][a] = p;
  }
  check_omega(dim, omega);
  omega_ = std::move(omega);
}

Connection Connection::from_raw(int dim, std::vector<std::vector<std::vector<Poly>>> gamma,
                                std::optional<Matrix> omega) {
  if (dim < 1) throw DimensionError("connection dimension must be positive");
  if (static_cast<int>(gamma.size()) != dim) throw DimensionError("christoffel array shape");
  for (const auto& plane : gamma) {
    if (static_cast<int>(plane.size()) != dim) throw DimensionError("christoffel array shape");
    for (const auto& row : plane) {
      if (static_cast<int>(row.size()) != dim) throw DimensionError("christoffel array shape");
      for (const auto& p : row)
        if (p.dim() != dim) throw DimensionError("christoffel polynomial has wrong dimension");
    }
  }
  check_omega(dim, omega);
  Connection c;
  c.dim_ = dim;
  c.gamma_ = std::move(gamma);
  c.omega_ = std::move(omega);
  return c;
}

bool Connection::is_torsion_free() const {
  for (int k = 0; k < dim_; ++k)
    for (int a = 0; a < dim_; ++a)
      for (int b = a + 1; b < dim_; ++b)
        if (!(gamma_[k][a][b] == gamma_[k][b][a])) return false;
  return true;
}

bool Connection::is_omega_parallel() const {
  if (!omega_) return false;
  const Matrix& w = *omega_;
  // d_c w_{ab} - G^m_{ca} w_{mb} - G^m_{cb} w_{am} = 0; the first term dies, w constant.
  for (int c = 0; c < dim_; ++c)
    for (int a = 0; a < dim_; ++a)
      for (int b = 0; b < dim_; ++b) {
        Poly s(dim_);
        for (int m = 0; m < dim_; ++m) {
          s -= gamma_[m][c][a] * Poly::constant(dim_, w[m][b]);
          s -= gamma_[m][c][b] * Poly::constant(dim_, w[a][m]);
        }
        if (!s.is_zero()) return false;
      }
  return true;
}

Poly Connection::curvature(int k, int j, int mu, int nu) const {
  if (k < 0 || k >= dim_ || j < 0 || j >= dim_ || mu < 0 || mu >= dim_ || nu < 0 || nu >= dim_)
    throw IndexError("curvature index out of range");
  Poly r = gamma_[k][nu][j].partial(mu) - gamma_[k][mu][j].partial(nu);
  for (int m = 0; m < dim_; ++m) {
    r += gamma_[k][mu][m] * gamma_[m][nu][j];
    r -= gamma_[k][nu][m] * gamma_[m][mu][j];
  }
  return r;
}

Matrix standard_omega(int dim) {
  if (dim % 2 != 0) throw DimensionError("standard omega needs even dimension");
  Matrix w(dim, std::vector<Rational>(dim, Rational(0)));
  for (int k = 0; k + 1 < dim; k += 2) {
    w[k][k + 1] = Rational(1);
    w[k + 1][k] = Rational(-1);
  }
  return w;
}

bool matrix_is_antisymmetric(const Matrix& m) {
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < m.size(); ++j)
      if (m[i][j] != -m[j][i]) return false;
  return true;
}

Rational matrix_det(Matrix m) {
  const int n = static_cast<int>(m.size());
  Rational det(1);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if (m[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) return Rational(0);
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    Rational inv = Rational(1) / m[col][col];
    for (int r = col + 1; r < n; ++r) {
      Rational f = m[r][col] * inv;
      for (int c = col; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

Matrix matrix_inverse(Matrix m) {
  const int n = static_cast<int>(m.size());
  Matrix inv(n, std::vector<Rational>(n, Rational(0)));
  for (int i = 0; i < n; ++i) inv[i][i] = Rational(1);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if (m[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) throw FormatError("matrix is singular");
    std::swap(m[pivot], m[col]);
    std::swap(inv[pivot], inv[col]);
    Rational f = Rational(1) / m[col][col];
    for (int c = 0; c < n; ++c) {
      m[col][c] *= f;
      inv[col][c] *= f;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      Rational g = m[r][col];
      for (int c = 0; c < n; ++c) {
        m[r][c] -= g * m[col][c];
        inv[r][c] -= g * inv[col][c];
      }
    }
  }
  return inv;
}

std::string connection_to_json(const Connection& c) {
  Json j;
  j["format"] = "connection/1";
  j["dimension"] = c.dim();
  Json arr = Json::array();
  for (int k = 0; k < c.dim(); ++k)
    for (int a = 0; a < c.dim(); ++a)
      for (int b = a; b < c.dim(); ++b) {
        const Poly& p = c.gamma(k, a, b);
        if (p.is_zero()) continue;
        Json e;
        e["k"] = k + 1;
        e["i"] = a + 1;
        e["j"] = b + 1;
        e["terms"] = poly_terms_json(p);
        arr.push_back(std::move(e));
      }
  j["christoffels"] = std::move(arr);
  if (c.omega()) {
    Json w = Json::array();
    for (const auto& row : *c.omega()) {
      Json r = Json::array();
      for (const auto& v : row) r.push_back(rational_to_string(v));
      w.push_back(std::move(r));
    }
    j["omega"] = std::move(w);
  }
  return j.dump(2);
}

Connection connection_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid json: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != "connection/1")
    throw FormatError("expected format connection/1");
  if (!j.contains("dimension") || !j["dimension"].is_number_integer())
    throw FormatError("missing dimension");
  const int dim = j["dimension"].get<int>();
  if (dim < 1) throw FormatError("dimension must be positive");
  std::vector<std::tuple<int, int, int, Poly>> entries;
  if (j.contains("christoffels")) {
    if (!j["christoffels"].is_array()) throw FormatError("christoffels must be an array");
    for (const auto& e : j["christoffels"]) {
      if (!e.is_object() || !e.contains("k") || !e.contains("i") || !e.contains("j") ||
          !e.contains("terms"))
        throw FormatError("christoffel entry needs k, i, j, terms");
      int k = e["k"].get<int>(), a = e["i"].get<int>(), b = e["j"].get<int>();
      if (k < 1 || k > dim || a < 1 || a > dim || b < 1 || b > dim)
        throw FormatError("christoffel index out of range");
      if (a > b) throw FormatError("christoffel entries expect i <= j");
      entries.emplace_back(k - 1, a - 1, b - 1, poly_from_terms_json(e["terms"], dim));
    }
  }
  std::optional<Matrix> omega;
  if (j.contains("omega")) {
    if (!j["omega"].is_array() || static_cast<int>(j["omega"].size()) != dim)
      throw FormatError("omega must be a dim x dim array");
    Matrix w(dim, std::vector<Rational>(dim));
    for (int r = 0; r < dim; ++r) {
      const auto& row = j["omega"][r];
      if (!row.is_array() || static_cast<int>(row.size()) != dim)
        throw FormatError("omega must be a dim x dim array");
      for (int c = 0; c < dim; ++c) {
        const auto& v = row[c];
        if (v.is_number_integer())
          w[r][c] = Rational(static_cast<long>(v.get<long long>()));
        else if (v.is_string())
          w[r][c] = rational_from_string(v.get<std::string>());
        else
          throw FormatError("omega entries must be integers or rational strings");
      }
    }
    omega = std::move(w);
  }
  return Connection(dim, entries, std::move(omega));
}

Connection connection_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return connection_from_json(ss.str());
}

}  // namespace dq
