#include "dq/vanishing.hpp"

#include <algorithm>
#include <map>

#include "dq/enumerate.hpp"
#include "dq/error.hpp"
#include "dq/rng.hpp"

namespace dq {

namespace {

using Tuple = std::vector<int>;

void sorted_tuples(int len, int dim, Tuple& cur, std::vector<Tuple>& out) {
  if ((int)cur.size() == len) {
    out.push_back(cur);
    return;
  }
  int lo = cur.empty() ? 0 : cur.back();
  for (int v = lo; v < dim; ++v) {
    cur.push_back(v);
    sorted_tuples(len, dim, cur, out);
    cur.pop_back();
  }
}

std::vector<Tuple> sorted_tuples(int len, int dim) {
  std::vector<Tuple> out;
  Tuple cur;
  sorted_tuples(len, dim, cur, out);
  return out;
}

Rational draw(Rng& rng) {
  long num = (long)rng.below(19) - 9;
  long den = 1 + (long)rng.below(9);
  return rat(num, den);
}

Rational rabs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

}  // namespace

VanishingCertificate verify_parallel_edge_vanishing(int m, int n, int dim,
                                                    uint64_t seed) {
  if (m < 1 || n < 1) throw IndexError("vertex arities must be positive");
  if (dim < 1) throw DimensionError("dimension must be positive");

  Rng rng(seed);
  VanishingCertificate cert;
  cert.m = m;
  cert.n = n;
  cert.dim = dim;

  std::vector<Tuple> ks = sorted_tuples(m - 1, dim);
  std::vector<Tuple> ms = sorted_tuples(n - 1, dim);

  // Bivector side: random in the ordered slot pair, antisymmetrized below.
  std::map<std::pair<std::pair<int, int>, Tuple>, Rational> raw_a;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (const auto& k : ks) raw_a[{{i, j}, k}] = draw(rng);
  // Generator side: stored on the unordered slot pair, symmetric as is.
  std::map<std::pair<std::pair<int, int>, Tuple>, Rational> raw_s;
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j)
      for (const auto& mt : ms) raw_s[{{i, j}, mt}] = draw(rng);

  auto a_at = [&](int i, int j, const Tuple& k) {
    return raw_a.at({{i, j}, k}) - raw_a.at({{j, i}, k});
  };
  auto s_at = [&](int i, int j, const Tuple& mt) {
    return raw_s.at({{std::min(i, j), std::max(i, j)}, mt});
  };

  cert.zero = true;
  cert.max_term = Rational(0);
  for (const auto& k : ks)
    for (const auto& mt : ms) {
      Rational sum(0);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
          Rational term = a_at(i, j, k) * s_at(i, j, mt);
          sum += term;
          Rational mag = rabs(term);
          if (mag > cert.max_term) cert.max_term = mag;
        }
      ++cert.contractions;
      if (sum != 0) cert.zero = false;
    }
  return cert;
}

VacuumReport regular_vacuum_vanishing(const PoissonStructure& pi, int max_loops,
                                      int arity_cap) {
  VacuumReport rep;
  rep.max_loops = max_loops;
  rep.constant = pi.is_constant();

  EnumOptions opt;
  opt.allow_l = false;
  opt.allow_pi = true;
  opt.arity_cap = rep.constant ? 1 : arity_cap;
  opt.dim = pi.dim();

  for (int l = 1; l <= max_loops; ++l) {
    // A closed graph with every bivector vertex emitting two edges satisfies
    // the top-degree condition only with l - 1 vertices, so the cap is
    // exhaustive for candidates.
    opt.max_internal = std::max(0, l - 1);
    for (const auto& cls : enumerate_graphs(0, l, opt))
      if (vacuum_filter(cls)) {
        rep.candidates.push_back(cls);
        rep.loops_of.push_back(l);
      }
  }
  return rep;
}

}  // namespace dq
