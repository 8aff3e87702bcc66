#include "dq/poisson.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace dq {

using nlohmann::ordered_json;

PoissonStructure::PoissonStructure(int dim, const std::vector<std::tuple<int, int, Poly>>& upper)
    : dim_(dim), comp_(dim, std::vector<Poly>(dim, Poly(dim))) {
  if (dim <= 0) throw DimensionError("poisson dimension must be positive");
  for (const auto& [i, j, p] : upper) {
    if (i < 0 || j < 0 || i >= dim || j >= dim) throw IndexError("poisson component index out of range");
    if (i >= j) throw FormatError("poisson components must be given with i < j");
    if (p.dim() != dim) throw DimensionError("poisson component dimension mismatch");
    comp_[i][j] += p;
    comp_[j][i] -= p;
  }
}

bool PoissonStructure::is_constant() const { return max_degree() <= 0; }

int PoissonStructure::max_degree() const {
  int d = -1;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) d = std::max(d, comp_[i][j].degree());
  return d;
}

PoissonStructure PoissonStructure::standard_symplectic(int dim) {
  if (dim % 2 != 0) throw DimensionError("standard symplectic structure needs even dimension");
  std::vector<std::tuple<int, int, Poly>> up;
  for (int k = 0; 2 * k + 1 < dim; ++k) up.emplace_back(2 * k, 2 * k + 1, Poly::constant(dim, 1));
  return PoissonStructure(dim, up);
}

PoissonStructure PoissonStructure::so3() {
  std::vector<std::tuple<int, int, Poly>> up;
  up.emplace_back(0, 1, Poly::variable(3, 2));
  up.emplace_back(0, 2, -Poly::variable(3, 1));
  up.emplace_back(1, 2, Poly::variable(3, 0));
  return PoissonStructure(3, up);
}

std::vector<std::vector<std::vector<Poly>>> jacobiator(const PoissonStructure& pi) {
  int d = pi.dim();
  std::vector J(d, std::vector(d, std::vector<Poly>(d, Poly(d))));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        Poly s(d);
        for (int l = 0; l < d; ++l) {
          s += pi.at(i, l) * pi.at(j, k).partial(l);
          s += pi.at(j, l) * pi.at(k, i).partial(l);
          s += pi.at(k, l) * pi.at(i, j).partial(l);
        }
        J[i][j][k] = s;
      }
  return J;
}

bool jacobiator_is_zero(const PoissonStructure& pi) {
  auto J = jacobiator(pi);
  for (const auto& a : J)
    for (const auto& b : a)
      for (const auto& p : b)
        if (!p.is_zero()) return false;
  return true;
}

namespace {

ordered_json coeff_json(const Rational& c) {
  mpz_class num = c.get_num(), den = c.get_den();
  ordered_json pair = ordered_json::array();
  for (const mpz_class& z : {num, den}) {
    if (z.fits_slong_p())
      pair.push_back(static_cast<long>(z.get_si()));
    else
      pair.push_back(z.get_str());
  }
  return pair;
}

Rational coeff_from_json(const ordered_json& num, const ordered_json& den) {
  auto part = [](const ordered_json& v) -> mpz_class {
    if (v.is_number_integer()) return mpz_class(static_cast<long>(v.get<long long>()));
    if (v.is_string()) return mpz_class(v.get<std::string>());
    throw FormatError("bad rational component in JSON");
  };
  Rational r(part(num), part(den));
  if (r.get_den() == 0) throw FormatError("zero denominator in JSON");
  r.canonicalize();
  return r;
}

}  // namespace

ordered_json poly_terms_json(const Poly& p) {
  ordered_json terms = ordered_json::array();
  for (const auto& [m, c] : p.terms()) {
    ordered_json t = ordered_json::array();
    for (auto e : m) t.push_back(e);
    auto pair = coeff_json(c);
    t.push_back(pair[0]);
    t.push_back(pair[1]);
    terms.push_back(t);
  }
  return terms;
}

Poly poly_from_terms_json(const ordered_json& terms, int dim) {
  Poly p(dim);
  if (!terms.is_array()) throw FormatError("polynomial terms must be an array");
  for (const auto& t : terms) {
    if (!t.is_array() || static_cast<int>(t.size()) != dim + 2)
      throw FormatError("each term needs d exponents plus numerator and denominator");
    MultiIndex m(dim);
    for (int i = 0; i < dim; ++i) {
      if (!t[i].is_number_integer() || t[i].get<long long>() < 0)
        throw FormatError("exponents must be non-negative integers");
      m[i] = static_cast<uint32_t>(t[i].get<long long>());
    }
    p.add_term(m, coeff_from_json(t[dim], t[dim + 1]));
  }
  return p;
}

std::string poisson_to_json(const PoissonStructure& pi) {
  ordered_json doc;
  doc["format"] = "poisson/1";
  doc["dimension"] = pi.dim();
  ordered_json comps = ordered_json::array();
  for (int i = 0; i < pi.dim(); ++i)
    for (int j = i + 1; j < pi.dim(); ++j) {
      if (pi.at(i, j).is_zero()) continue;
      ordered_json c;
      c["i"] = i + 1;
      c["j"] = j + 1;
      c["terms"] = poly_terms_json(pi.at(i, j));
      comps.push_back(c);
    }
  doc["components"] = comps;
  return doc.dump(2);
}

PoissonStructure poisson_from_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("bad JSON: ") + e.what());
  }
  if (doc.value("format", "") != "poisson/1") throw FormatError("expected format poisson/1");
  int dim = doc.value("dimension", 0);
  if (dim <= 0) throw FormatError("bad dimension");
  std::vector<std::tuple<int, int, Poly>> up;
  for (const auto& c : doc.value("components", ordered_json::array())) {
    int i = c.value("i", 0), j = c.value("j", 0);
    if (i < 1 || j < 1 || i > dim || j > dim) throw FormatError("component index out of range");
    if (i >= j) throw FormatError("components must satisfy i < j");
    up.emplace_back(i - 1, j - 1, poly_from_terms_json(c.at("terms"), dim));
  }
  return PoissonStructure(dim, up);
}

PoissonStructure poisson_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return poisson_from_json(buf.str());
}

}  // namespace dq
