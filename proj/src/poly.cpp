#include "dq/poly.hpp"

#include <sstream>

namespace dq {

Rational rational_from_string(const std::string& s) {
  try {
    Rational r(s);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw ParseError("bad rational: " + s);
  }
}

std::string rational_to_string(const Rational& r) { return r.get_str(); }

MultiIndex mi_add(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) throw DimensionError("multi-index length mismatch");
  MultiIndex r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

int mi_degree(const MultiIndex& m) {
  int d = 0;
  for (auto e : m) d += static_cast<int>(e);
  return d;
}

namespace {
thread_local int g_degree_cap = 128;
}

int Poly::degree_cap() { return g_degree_cap; }
void Poly::set_degree_cap(int cap) { g_degree_cap = cap; }

Poly Poly::constant(int dim, const Rational& c) {
  Poly p(dim);
  p.add_term(MultiIndex(dim, 0), c);
  return p;
}

Poly Poly::variable(int dim, int i) {
  if (i < 0 || i >= dim) throw IndexError("variable index out of range");
  MultiIndex m(dim, 0);
  m[i] = 1;
  return monomial(dim, m, 1);
}

Poly Poly::monomial(int dim, const MultiIndex& m, const Rational& c) {
  if (static_cast<int>(m.size()) != dim) throw DimensionError("monomial length mismatch");
  Poly p(dim);
  p.add_term(m, c);
  return p;
}

int Poly::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, mi_degree(m));
  return d;
}

Rational Poly::coeff(const MultiIndex& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Poly::add_term(const MultiIndex& m, const Rational& c) {
  if (static_cast<int>(m.size()) != dim_) throw DimensionError("term length mismatch");
  if (c == 0) return;
  auto [it, fresh] = terms_.emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Poly Poly::operator-() const {
  Poly r(dim_);
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  r += o;
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  Poly r = *this;
  r -= o;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  if (dim_ != o.dim_) {
    if (is_zero() && terms_.empty() && dim_ == 0) {
      dim_ = o.dim_;  // allow accumulating into a default-constructed zero
    } else {
      throw DimensionError("polynomial dimension mismatch in add");
    }
  }
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  *this += -o;
  return *this;
}

Poly Poly::operator*(const Poly& o) const {
  if (dim_ != o.dim_) throw DimensionError("polynomial dimension mismatch in mul");
  if (is_zero() || o.is_zero()) return Poly(dim_);
  if (degree() + o.degree() > g_degree_cap) {
    std::ostringstream os;
    os << "degree cap " << g_degree_cap << " exceeded: " << degree() << " + " << o.degree();
    throw DegreeCapError(os.str());
  }
  Poly r(dim_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) r.add_term(mi_add(ma, mb), ca * cb);
  return r;
}

Poly Poly::operator*(const Rational& c) const {
  Poly r(dim_);
  if (c == 0) return r;
  for (const auto& [m, k] : terms_) r.terms_.emplace(m, k * c);
  return r;
}

Poly Poly::partial(int i) const {
  if (i < 0 || i >= dim_) throw IndexError("partial: index out of range");
  Poly r(dim_);
  for (const auto& [m, c] : terms_) {
    if (m[i] == 0) continue;
    MultiIndex n = m;
    n[i] -= 1;
    r.add_term(n, c * Rational(static_cast<long>(m[i])));
  }
  return r;
}

Rational Poly::eval(const std::vector<Rational>& point) const {
  if (static_cast<int>(point.size()) != dim_) throw DimensionError("eval point dimension mismatch");
  Rational total = 0;
  for (const auto& [m, c] : terms_) {
    Rational v = c;
    for (int i = 0; i < dim_; ++i)
      for (uint32_t e = 0; e < m[i]; ++e) v *= point[i];
    total += v;
  }
  return total;
}

Poly compose_linear(const Poly& p, const std::vector<std::vector<Rational>>& m) {
  const int d = p.dim();
  if (static_cast<int>(m.size()) != d) throw DimensionError("substitution matrix has wrong size");
  std::vector<Poly> image;
  for (int i = 0; i < d; ++i) {
    if (static_cast<int>(m[i].size()) != d)
      throw DimensionError("substitution matrix is not square");
    Poly s(d);
    for (int j = 0; j < d; ++j)
      if (m[i][j] != 0) s += Poly::variable(d, j) * m[i][j];
    image.push_back(s);
  }
  Poly out(d);
  for (const auto& [mi, c] : p.terms()) {
    Poly t = Poly::constant(d, c);
    for (int i = 0; i < d; ++i)
      for (uint32_t e = 0; e < mi[i]; ++e) t = t * image[i];
    out += t;
  }
  return out;
}

std::string Poly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational a = c;
    if (first) {
      if (a < 0) {
        os << "-";
        a = -a;
      }
    } else {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    first = false;
    bool unit = (a == 1);
    bool has_var = mi_degree(m) > 0;
    if (!unit || !has_var) os << a.get_str();
    bool star = !unit && has_var;
    for (int i = 0; i < dim_; ++i) {
      if (m[i] == 0) continue;
      if (star) os << "*";
      star = true;
      os << "x" << (i + 1);
      if (m[i] > 1) os << "^" << m[i];
    }
  }
  return os.str();
}

}  // namespace dq
