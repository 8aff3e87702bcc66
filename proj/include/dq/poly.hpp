#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dq/error.hpp"
#include "dq/rational.hpp"

namespace dq {

// Exponent vector; length equals the ambient dimension.
using MultiIndex = std::vector<uint32_t>;

MultiIndex mi_add(const MultiIndex& a, const MultiIndex& b);
int mi_degree(const MultiIndex& m);

// Sparse multivariate polynomial with exact rational coefficients.
// Terms are kept in a sorted map so iteration order (and hence every
// serialization) is deterministic.  No zero coefficient is ever stored.
class Poly {
 public:
  Poly() : dim_(0) {}
  explicit Poly(int dim) : dim_(dim) {}

  static Poly constant(int dim, const Rational& c);
  static Poly variable(int dim, int i);  // x_i, 0-based
  static Poly monomial(int dim, const MultiIndex& m, const Rational& c);

  int dim() const { return dim_; }
  bool is_zero() const { return terms_.empty(); }
  // Total degree; -1 for the zero polynomial.
  int degree() const;
  const std::map<MultiIndex, Rational>& terms() const { return terms_; }

  Rational coeff(const MultiIndex& m) const;
  void add_term(const MultiIndex& m, const Rational& c);

  Poly operator-() const;
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(const Rational& c) const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  bool operator==(const Poly& o) const { return dim_ == o.dim_ && terms_ == o.terms_; }
  bool operator!=(const Poly& o) const { return !(*this == o); }

  // Formal partial derivative in x_i (0-based).
  Poly partial(int i) const;
  Rational eval(const std::vector<Rational>& point) const;

  // Human-readable form using variables x1..xd ("0" when zero).
  std::string str() const;

  // Total-degree cap shared by all products on this thread.  Products whose
  // factors' degrees sum beyond the cap throw DegreeCapError instead of
  // silently truncating.
  static int degree_cap();
  static void set_degree_cap(int cap);

 private:
  int dim_;
  std::map<MultiIndex, Rational> terms_;
};

// Substitute x_i -> sum_j m[i][j] x_j for a constant square matrix m.
Poly compose_linear(const Poly& p, const std::vector<std::vector<Rational>>& m);

// RAII scope for a temporary degree cap.
class DegreeCapGuard {
 public:
  explicit DegreeCapGuard(int cap) : prev_(Poly::degree_cap()) { Poly::set_degree_cap(cap); }
  ~DegreeCapGuard() { Poly::set_degree_cap(prev_); }

 private:
  int prev_;
};

}  // namespace dq
