#include "dq/bidiff.hpp"

#include <algorithm>

#include "dq/error.hpp"

namespace dq {

void BiDiffOperator::add_term(const MultiIndex& left, const MultiIndex& right,
                              const Poly& coeff) {
  if ((int)left.size() != dim_ || (int)right.size() != dim_)
    throw DimensionError("derivative multi-index length does not match dimension");
  if (coeff.is_zero()) return;
  auto key = std::make_pair(left, right);
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(key, coeff);
    return;
  }
  it->second += coeff;
  if (it->second.is_zero()) terms_.erase(it);
}

static Poly multi_partial(const Poly& p, const MultiIndex& m) {
  Poly r = p;
  for (size_t i = 0; i < m.size(); ++i)
    for (uint32_t k = 0; k < m[i]; ++k) {
      if (r.is_zero()) return r;
      r = r.partial((int)i);
    }
  return r;
}

Poly BiDiffOperator::apply(const Poly& f, const Poly& g) const {
  if (f.dim() != dim_ || g.dim() != dim_)
    throw DimensionError("operand dimension does not match operator");
  Poly out(dim_);
  for (const auto& [key, coeff] : terms_) {
    Poly df = multi_partial(f, key.first);
    if (df.is_zero()) continue;
    Poly dg = multi_partial(g, key.second);
    if (dg.is_zero()) continue;
    out += coeff * df * dg;
  }
  return out;
}

BiDiffOperator BiDiffOperator::operator+(const BiDiffOperator& o) const {
  if (dim_ != o.dim_) throw DimensionError("operator dimensions differ");
  BiDiffOperator r = *this;
  for (const auto& [key, coeff] : o.terms_) r.add_term(key.first, key.second, coeff);
  return r;
}

BiDiffOperator BiDiffOperator::operator*(const Rational& c) const {
  BiDiffOperator r(dim_);
  if (c == Rational(0)) return r;
  for (const auto& [key, coeff] : terms_) r.terms_.emplace(key, coeff * c);
  return r;
}

BiDiffOperator graph_to_bidiff(const GraphClass& gc, const PoissonStructure& pi) {
  const FeynmanGraph& g = gc.rep;
  validate_graph(g);
  if (!g.legs.empty())
    throw FormatError("graph with external legs has no boundary-product operator");

  int obs_left = -1, obs_right = -1;
  for (int v = 0; v < (int)g.vertices.size(); ++v) {
    switch (g.vertices[v].kind) {
      case VertexKind::Observable:
        if (obs_left < 0)
          obs_left = v;
        else if (obs_right < 0)
          obs_right = v;
        else
          throw FormatError("more than two observable vertices");
        break;
      case VertexKind::L:
        throw FormatError("generator vertex rejected in flat-target mode");
      case VertexKind::Pi:
        break;
    }
  }
  if (obs_right < 0) throw FormatError("boundary-product graph needs two observables");

  const int d = pi.dim();
  const int ne = (int)g.edges.size();
  std::vector<std::vector<int>> outs(g.vertices.size()), ins(g.vertices.size());
  for (int e = 0; e < ne; ++e) {
    outs[g.edges[e].first].push_back(e);
    ins[g.edges[e].second].push_back(e);
  }

  std::vector<int> internal;
  for (int v = 0; v < (int)g.vertices.size(); ++v)
    if (g.vertices[v].kind == VertexKind::Pi) internal.push_back(v);

  BiDiffOperator op(d);
  std::vector<int> idx(ne, 0);
  while (true) {
    Poly coeff = Poly::constant(d, Rational(1));
    for (int v : internal) {
      Poly p = pi.at(idx[outs[v][0]], idx[outs[v][1]]);
      for (int e : ins[v]) {
        if (p.is_zero()) break;
        p = p.partial(idx[e]);
      }
      if (p.is_zero()) {
        coeff = Poly(d);
        break;
      }
      coeff = coeff * p;
    }
    if (!coeff.is_zero()) {
      MultiIndex left(d, 0), right(d, 0);
      for (int e = 0; e < ne; ++e) {
        if (g.edges[e].second == obs_left) ++left[idx[e]];
        if (g.edges[e].second == obs_right) ++right[idx[e]];
      }
      op.add_term(left, right, coeff);
    }
    int pos = ne - 1;
    while (pos >= 0 && idx[pos] == d - 1) idx[pos--] = 0;
    if (pos < 0) break;
    ++idx[pos];
  }
  return op;
}

}  // namespace dq
