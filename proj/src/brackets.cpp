#include "dq/brackets.hpp"

#include <algorithm>
#include <functional>

#include "dq/error.hpp"
#include "dq/json_util.hpp"
#include <json.hpp>

namespace dq {

using Json = nlohmann::ordered_json;

namespace {

// Pad a base-coordinate polynomial into the 2*dim generating ring.
Poly embed_base(const Poly& p, int d) {
  Poly out(2 * d);
  for (const auto& [mi, c] : p.terms()) {
    MultiIndex m(2 * d, 0);
    for (int i = 0; i < d; ++i) m[i] = mi[i];
    out.add_term(m, c);
  }
  return out;
}

// Drop the fiber half of an exponent vector; requires it to be zero.
Poly project_base(const Poly& p, int d) {
  Poly out(d);
  for (const auto& [mi, c] : p.terms()) {
    MultiIndex m(d, 0);
    for (int i = 0; i < d; ++i) {
      m[i] = mi[i];
      if (mi[d + i] != 0) throw IndexError("fiber exponent survives projection");
    }
    out.add_term(m, c);
  }
  return out;
}

Rational factorial(int n) {
  Rational f(1);
  for (int i = 2; i <= n; ++i) f *= Rational(i);
  return f;
}

using PolyVec = std::vector<Poly>;
using PolyMat = std::vector<std::vector<Poly>>;

// Antisymmetrized composition of the fiber-degree-m generator against W.
// S[j][c] is the generator applied through the fiber slot j; with_d adds the
// base-derivative piece carried only by the unary stage.
PolyMat d_op(const PolyMat& S, const PolyVec& W, bool with_d, int d) {
  PolyMat U(d, PolyVec(d, Poly(2 * d)));
  for (int c = 0; c < d; ++c)
    for (int a = 0; a < d; ++a) {
      Poly u(2 * d);
      if (with_d) u -= W[a].partial(c);
      for (int j = 0; j < d; ++j) u += S[j][c] * W[a].partial(d + j);
      U[c][a] = u;
    }
  PolyMat A(d, PolyVec(d, Poly(2 * d)));
  for (int c = 0; c < d; ++c)
    for (int a = 0; a < d; ++a) A[c][a] = U[c][a] - U[a][c];
  return A;
}

PolyVec delta_star(const PolyMat& A, int q, int d) {
  PolyVec out(d, Poly(2 * d));
  Rational f = Rational(1) / Rational(q + 2);
  for (int a = 0; a < d; ++a) {
    Poly s(2 * d);
    for (int i = 0; i < d; ++i) s += Poly::variable(2 * d, d + i) * A[i][a];
    out[a] = s * f;
  }
  return out;
}

PolyMat delta_op(const PolyVec& W, int d) {
  PolyMat A(d, PolyVec(d, Poly(2 * d)));
  for (int c = 0; c < d; ++c)
    for (int a = 0; a < d; ++a) A[c][a] = W[a].partial(d + c) - W[c].partial(d + a);
  return A;
}

void check_pairing_matrix(const Matrix& omega, int d) {
  if (static_cast<int>(omega.size()) != d) throw DimensionError("omega has wrong size");
  for (const auto& row : omega)
    if (static_cast<int>(row.size()) != d) throw DimensionError("omega is not square");
  if (!matrix_is_antisymmetric(omega)) throw FormatError("omega is not antisymmetric");
  if (matrix_det(omega) == 0) throw FormatError("omega is degenerate");
}

}  // namespace

BracketSystem::BracketSystem(int dim, int max_arity) : dim_(dim), max_arity_(max_arity) {
  if (dim < 1) throw DimensionError("bracket dimension must be positive");
  if (max_arity < 1) throw IndexError("max arity must be at least 1");
  comp_.assign(max_arity + 1,
               std::vector<std::vector<Poly>>(dim, std::vector<Poly>(dim, Poly(2 * dim))));
}

const Poly& BracketSystem::comp(int n, int k, int a) const {
  if (n < 1 || n > max_arity_ || k < 0 || k >= dim_ || a < 0 || a >= dim_)
    throw IndexError("bracket component index out of range");
  return comp_[n][k][a];
}

Poly& BracketSystem::comp_mut(int n, int k, int a) {
  if (n < 1 || n > max_arity_ || k < 0 || k >= dim_ || a < 0 || a >= dim_)
    throw IndexError("bracket component index out of range");
  return comp_[n][k][a];
}

BracketSystem build_brackets(const Connection& c, int max_arity) {
  if (!c.is_torsion_free()) throw FormatError("connection has torsion");
  const int d = c.dim();
  BracketSystem br(d, max_arity);
  for (int k = 0; k < d; ++k)
    for (int a = 0; a < d; ++a) {
      Poly s(2 * d);
      for (int m = 0; m < d; ++m)
        s += embed_base(c.gamma(k, a, m), d) * Poly::variable(2 * d, d + m);
      br.comp_mut(1, k, a) = s;
    }
  for (int n = 2; n <= max_arity; ++n)
    for (int k = 0; k < d; ++k) {
      PolyMat acc(d, PolyVec(d, Poly(2 * d)));
      for (int m = 1; m < n; ++m) {
        PolyMat S(d, PolyVec(d, Poly(2 * d)));
        for (int j = 0; j < d; ++j)
          for (int cc = 0; cc < d; ++cc) S[j][cc] = br.comp(m, j, cc);
        PolyVec W(d, Poly(2 * d));
        for (int a = 0; a < d; ++a) W[a] = br.comp(n - m, k, a);
        PolyMat piece = d_op(S, W, m == 1, d);
        for (int cc = 0; cc < d; ++cc)
          for (int a = 0; a < d; ++a) acc[cc][a] += piece[cc][a];
      }
      PolyVec next = delta_star(acc, n - 1, d);
      for (int a = 0; a < d; ++a) br.comp_mut(n, k, a) = -next[a];
    }
  return br;
}

BracketTensor bracket_tensor(const BracketSystem& br, int n) {
  if (n < 1 || n > br.max_arity()) throw IndexError("tensor arity out of range");
  const int d = br.dim();
  const Rational nfac = factorial(n);
  BracketTensor out;
  for (int k = 0; k < d; ++k)
    for (int a = 0; a < d; ++a) {
      for (const auto& [mi, c] : br.comp(n, k, a).terms()) {
        std::vector<int> idx;
        Rational rep(1);
        for (int i = 0; i < d; ++i) {
          for (uint32_t r = 0; r < mi[d + i]; ++r) idx.push_back(i);
          rep *= factorial(static_cast<int>(mi[d + i]));
        }
        if (static_cast<int>(idx.size()) != n)
          throw IndexError("component is not homogeneous in fiber degree");
        MultiIndex base(d, 0);
        for (int i = 0; i < d; ++i) base[i] = mi[i];
        TensorKey key;
        key.push_back(k);
        key.push_back(a);
        for (int i : idx) key.push_back(i);
        auto it = out.find(key);
        if (it == out.end()) it = out.emplace(key, Poly(d)).first;
        it->second.add_term(base, c * rep / nfac);
      }
    }
  for (auto it = out.begin(); it != out.end();)
    it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

Poly tensor_at(const BracketTensor& t, int dim_hint, int k, int a, std::vector<int> idx) {
  std::sort(idx.begin(), idx.end());
  TensorKey key;
  key.push_back(k);
  key.push_back(a);
  for (int i : idx) key.push_back(i);
  auto it = t.find(key);
  if (it == t.end()) return Poly(dim_hint);
  return it->second;
}

std::vector<ArityResidual> check_homotopy_identities(const BracketSystem& br, int arity_max) {
  if (arity_max < 1 || arity_max > br.max_arity())
    throw IndexError("arity exceeds the built cutoff");
  const int d = br.dim();
  std::vector<ArityResidual> reports;
  for (int n = 1; n <= arity_max; ++n) {
    ArityResidual rep;
    rep.arity = n;
    for (int k = 0; k < d; ++k) {
      PolyVec W(d, Poly(2 * d));
      for (int a = 0; a < d; ++a) W[a] = br.comp(n, k, a);
      PolyMat R = delta_op(W, d);
      for (int m = 1; m < n; ++m) {
        PolyMat S(d, PolyVec(d, Poly(2 * d)));
        for (int j = 0; j < d; ++j)
          for (int cc = 0; cc < d; ++cc) S[j][cc] = br.comp(m, j, cc);
        PolyVec V(d, Poly(2 * d));
        for (int a = 0; a < d; ++a) V[a] = br.comp(n - m, k, a);
        PolyMat piece = d_op(S, V, m == 1, d);
        for (int cc = 0; cc < d; ++cc)
          for (int a = 0; a < d; ++a) R[cc][a] += piece[cc][a];
      }
      for (int cc = 0; cc < d; ++cc)
        for (int a = 0; a < d; ++a)
          if (!R[cc][a].is_zero()) ++rep.nonzero_entries;
    }
    rep.is_zero = rep.nonzero_entries == 0;
    reports.push_back(rep);
  }
  return reports;
}

std::vector<PairingReport> check_pairing_invariance(const BracketSystem& br, const Matrix& omega,
                                                    int arity_max) {
  const int d = br.dim();
  check_pairing_matrix(omega, d);
  if (arity_max < 1 || arity_max > br.max_arity())
    throw IndexError("arity exceeds the built cutoff");
  std::vector<PairingReport> reports;
  for (int n = 1; n <= arity_max; ++n) {
    BracketTensor t = bracket_tensor(br, n);
    // Lowered tensor over the slot list (i0, i1..in); a stays fixed.
    auto lowered = [&](int i0, int a, const std::vector<int>& idx) {
      Poly s(d);
      for (int k = 0; k < d; ++k) {
        if (omega[i0][k] == 0) continue;
        s += tensor_at(t, d, k, a, idx) * omega[i0][k];
      }
      return s;
    };
    PairingReport rep;
    rep.arity = n;
    rep.transposition_nonzero.assign(n, 0);
    std::vector<int> tuple(n + 1, 0);
    for (;;) {
      for (int a = 0; a < d; ++a) {
        for (int tpos = 0; tpos < n; ++tpos) {
          std::vector<int> sw = tuple;
          std::swap(sw[tpos], sw[tpos + 1]);
          Poly diff = lowered(tuple[0], a, {tuple.begin() + 1, tuple.end()}) -
                      lowered(sw[0], a, {sw.begin() + 1, sw.end()});
          if (!diff.is_zero()) ++rep.transposition_nonzero[tpos];
        }
      }
      int pos = n;
      while (pos >= 0 && tuple[pos] == d - 1) tuple[pos--] = 0;
      if (pos < 0) break;
      ++tuple[pos];
    }
    rep.is_zero = true;
    for (int c : rep.transposition_nonzero)
      if (c != 0) rep.is_zero = false;
    reports.push_back(rep);
  }
  return reports;
}

bool check_gauge_condition(const BracketSystem& br, int n) {
  if (n < 1 || n > br.max_arity()) throw IndexError("arity exceeds the built cutoff");
  const int d = br.dim();
  BracketTensor t = bracket_tensor(br, n);
  std::vector<int> tuple(n + 1, 0);
  for (int k = 0; k < d; ++k) {
    std::fill(tuple.begin(), tuple.end(), 0);
    for (;;) {
      Poly s(d);
      for (int pos = 0; pos <= n; ++pos) {
        std::vector<int> rest;
        for (int q = 0; q <= n; ++q)
          if (q != pos) rest.push_back(tuple[q]);
        s += tensor_at(t, d, k, tuple[pos], rest);
      }
      if (!s.is_zero()) return false;
      int pos = n;
      while (pos >= 0 && tuple[pos] == d - 1) tuple[pos--] = 0;
      if (pos < 0) break;
      ++tuple[pos];
    }
  }
  return true;
}

ShuffleReport shuffle_cancellation_check(const BracketSystem& br, int total_arity) {
  if (total_arity < 2 || total_arity > br.max_arity())
    throw IndexError("total arity exceeds the built cutoff");
  const int d = br.dim();
  std::vector<BracketTensor> tens(total_arity + 1);
  for (int m = 1; m <= total_arity; ++m) tens[m] = bracket_tensor(br, m);

  // Everything below lives in a fresh 2*dim ring: base coordinates first,
  // then the diagonal symbols the tensor slots are contracted with.
  auto sym = [&](int i) { return Poly::variable(2 * d, d + i); };
  auto all_tuples = [&](int len, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> tuple(len, 0);
    if (len == 0) {
      fn(tuple);
      return;
    }
    for (;;) {
      fn(tuple);
      int pos = len - 1;
      while (pos >= 0 && tuple[pos] == d - 1) tuple[pos--] = 0;
      if (pos < 0) break;
      ++tuple[pos];
    }
  };
  // Sum of tensor entries against full symbol products.
  auto gen = [&](int m, int k, int a) {
    Poly out(2 * d);
    all_tuples(m, [&](const std::vector<int>& idx) {
      Poly v = tensor_at(tens[m], d, k, a, idx);
      if (v.is_zero()) return;
      Poly t = embed_base(v, d);
      for (int i : idx) t = t * sym(i);
      out += t;
    });
    return out;
  };
  // m * (sum over the remaining m-1 slots) with the first slot pinned to c.
  auto dgen = [&](int m, int k, int a, int c) {
    Poly out(2 * d);
    all_tuples(m - 1, [&](const std::vector<int>& idx) {
      std::vector<int> full;
      full.push_back(c);
      full.insert(full.end(), idx.begin(), idx.end());
      Poly v = tensor_at(tens[m], d, k, a, full);
      if (v.is_zero()) return;
      Poly t = embed_base(v, d);
      for (int i : idx) t = t * sym(i);
      out += t;
    });
    return out * Rational(m);
  };

  ShuffleReport rep;
  rep.total_arity = total_arity;
  const int N = total_arity;
  for (int k = 0; k < d; ++k)
    for (int c = 0; c < d; ++c)
      for (int a = 0; a < d; ++a) {
        Poly r = dgen(N, k, a, c) - dgen(N, k, c, a);
        for (int m = 1; m < N; ++m) {
          const int rest = N - m;
          auto u = [&](int cc, int aa) {
            Poly out(2 * d);
            if (m == 1) out -= gen(rest, k, aa).partial(cc);
            for (int j = 0; j < d; ++j) out += gen(m, j, cc) * dgen(rest, k, aa, j);
            return out;
          };
          r += u(c, a) - u(a, c);
        }
        if (!r.is_zero()) ++rep.nonzero_entries;
      }
  rep.is_zero = rep.nonzero_entries == 0;
  return rep;
}

std::vector<HolographyKernel> holography_homotopy_term(const BracketSystem& br,
                                                       const Matrix& omega, int truncation) {
  const int d = br.dim();
  check_pairing_matrix(omega, d);
  if (truncation < 0 || truncation > br.max_arity())
    throw IndexError("truncation exceeds the built cutoff");
  std::vector<HolographyKernel> kernels;
  HolographyKernel head;
  head.arity = 0;
  head.weight = Rational(1) / Rational(2);
  for (int i0 = 0; i0 < d; ++i0)
    for (int a = 0; a < d; ++a)
      if (omega[i0][a] != 0)
        head.tensor[{i0, a}] = Poly::constant(d, omega[i0][a]);
  kernels.push_back(std::move(head));
  for (int n = 1; n <= truncation; ++n) {
    BracketTensor t = bracket_tensor(br, n);
    HolographyKernel ker;
    ker.arity = n;
    ker.weight = Rational(1) / factorial(n + 1);
    for (const auto& [key, val] : t) {
      for (int i0 = 0; i0 < d; ++i0) {
        if (omega[i0][key[0]] == 0) continue;
        TensorKey low;
        low.push_back(i0);
        for (size_t q = 1; q < key.size(); ++q) low.push_back(key[q]);
        auto it = ker.tensor.find(low);
        if (it == ker.tensor.end()) it = ker.tensor.emplace(low, Poly(d)).first;
        it->second += val * omega[i0][key[0]];
      }
    }
    for (auto it = ker.tensor.begin(); it != ker.tensor.end();)
      it = it->second.is_zero() ? ker.tensor.erase(it) : std::next(it);
    if (!ker.tensor.empty()) kernels.push_back(std::move(ker));
  }
  return kernels;
}

Connection conjugate_connection(const Connection& c, const Matrix& A) {
  const int d = c.dim();
  if (static_cast<int>(A.size()) != d) throw DimensionError("frame matrix has wrong size");
  Matrix B = matrix_inverse(A);
  std::vector<std::vector<std::vector<Poly>>> g(
      d, std::vector<std::vector<Poly>>(d, std::vector<Poly>(d, Poly(d))));
  for (int k = 0; k < d; ++k)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        Poly s(d);
        for (int m = 0; m < d; ++m)
          for (int p = 0; p < d; ++p)
            for (int q = 0; q < d; ++q) {
              Rational fac = A[k][m] * B[p][a] * B[q][b];
              if (fac == 0) continue;
              s += compose_linear(c.gamma(m, p, q), B) * fac;
            }
        g[k][a][b] = s;
      }
  std::optional<Matrix> w;
  if (c.omega()) {
    const Matrix& om = *c.omega();
    Matrix nw(d, std::vector<Rational>(d, Rational(0)));
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int p = 0; p < d; ++p)
          for (int q = 0; q < d; ++q) nw[a][b] += om[p][q] * B[p][a] * B[q][b];
    w = std::move(nw);
  }
  return Connection::from_raw(d, std::move(g), std::move(w));
}

std::string brackets_to_json(const BracketSystem& br) {
  Json j;
  j["format"] = "brackets/1";
  j["dimension"] = br.dim();
  j["max_arity"] = br.max_arity();
  Json comps = Json::array();
  for (int n = 1; n <= br.max_arity(); ++n) {
    BracketTensor t = bracket_tensor(br, n);
    for (const auto& [key, val] : t) {
      Json e;
      e["arity"] = n;
      e["k"] = key[0] + 1;
      e["a"] = key[1] + 1;
      Json idx = Json::array();
      for (size_t q = 2; q < key.size(); ++q) idx.push_back(key[q] + 1);
      e["indices"] = std::move(idx);
      e["terms"] = poly_terms_json(val);
      comps.push_back(std::move(e));
    }
  }
  j["components"] = std::move(comps);
  return j.dump(2);
}

}  // namespace dq
