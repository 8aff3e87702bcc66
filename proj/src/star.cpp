#include "dq/star.hpp"

#include <cmath>

#include "dq/enumerate.hpp"
#include "dq/error.hpp"
#include "dq/rng.hpp"

namespace dq {

bool is_multiwedge(const FeynmanGraph& g) {
  for (int v = 0; v < (int)g.vertices.size(); ++v) {
    const Vertex& vx = g.vertices[v];
    if (vx.kind == VertexKind::Observable) continue;
    if (vx.kind != VertexKind::Pi || vx.arity != 1) return false;
  }
  for (const auto& e : g.edges)
    if (g.vertices[e.second].kind != VertexKind::Observable) return false;
  return true;
}

namespace {

using OpsByOrder = std::vector<std::vector<std::pair<GraphClass, BiDiffOperator>>>;

OpsByOrder boundary_ops(const PoissonStructure& pi, int order, int arity_cap) {
  OpsByOrder ops(order + 1);
  for (int k = 0; k <= order; ++k)
    for (const auto& cls : enumerate_boundary_graphs(k, arity_cap)) {
      BiDiffOperator b = graph_to_bidiff(cls, pi);
      if (!b.is_zero()) ops[k].emplace_back(cls, std::move(b));
    }
  return ops;
}

StarSeries star_series_exact(const StarSeries& A, const StarSeries& B,
                             const PoissonStructure& pi, const OpsByOrder& ops) {
  const int K = A.order();
  StarSeries s(K, Poly(pi.dim()));
  for (int k = 0; k <= K; ++k)
    for (const auto& [cls, op] : ops[k]) {
      if (!is_multiwedge(cls.rep))
        throw FormatError("no exact weight for boundary graph " + cls.hash);
      Rational w = rat(1, 1L << k) / rat(cls.aut);
      for (int a = 0; a + k <= K; ++a)
        for (int b = 0; a + b + k <= K; ++b) {
          Poly t = op.apply(A.at(a), B.at(b));
          if (!t.is_zero()) s.at(k + a + b) += t * w;
        }
    }
  return s;
}

StarSeries lift(const Poly& f, int order, int dim) {
  StarSeries s(order, Poly(dim));
  s.at(0) = f;
  return s;
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

StarSeries star_product_exact(const Poly& f, const Poly& g,
                              const PoissonStructure& pi, int order,
                              int arity_cap) {
  if (!pi.is_constant())
    throw FormatError("exact weights cover only constant bivectors");
  OpsByOrder ops = boundary_ops(pi, order, arity_cap);
  return star_series_exact(lift(f, order, pi.dim()), lift(g, order, pi.dim()),
                           pi, ops);
}

StarSeries associativity_defect_exact(const Poly& f, const Poly& g,
                                      const Poly& h, const PoissonStructure& pi,
                                      int order, int arity_cap) {
  if (!pi.is_constant())
    throw FormatError("exact weights cover only constant bivectors");
  OpsByOrder ops = boundary_ops(pi, order, arity_cap);
  StarSeries F = lift(f, order, pi.dim());
  StarSeries G = lift(g, order, pi.dim());
  StarSeries H = lift(h, order, pi.dim());
  StarSeries left = star_series_exact(star_series_exact(F, G, pi, ops), H, pi, ops);
  StarSeries right = star_series_exact(F, star_series_exact(G, H, pi, ops), pi, ops);
  return left - right;
}

int NumericWeights::require(const std::string& hash) const {
  auto it = slot.find(hash);
  if (it == slot.end()) throw FormatError("missing weight for " + hash);
  return it->second;
}

bool NumericWeights::all_converged() const {
  for (char c : converged)
    if (!c) return false;
  return true;
}

uint64_t boundary_weight_seed(uint64_t master, const std::string& hash) {
  return derive_seed(master, fnv1a(hash));
}

NumericWeights collect_boundary_weights(int order, int arity_cap,
                                        const McOptions& base,
                                        WeightCache* cache) {
  NumericWeights w;
  std::vector<double> eff =
      base.boundary.empty() ? std::vector<double>{0.0, 1.0} : base.boundary;
  for (int k = 0; k <= order; ++k)
    for (const auto& cls : enumerate_boundary_graphs(k, arity_cap)) {
      McOptions opt = base;
      opt.boundary = eff;
      opt.seed = boundary_weight_seed(base.seed, cls.hash);
      WeightResult r;
      bool fresh = true;
      if (cache) {
        auto hit = cache->get(cls.hash, eff);
        if (hit && hit->seed == opt.seed && hit->samples == opt.samples &&
            hit->normalization == kNormalizationTag) {
          r = *hit;
          fresh = false;
        }
      }
      if (fresh) {
        r = graph_weight_mc(cls, opt);
        if (cache) cache->put(r);
      }
      w.slot[cls.hash] = (int)w.hashes.size();
      w.hashes.push_back(cls.hash);
      w.value.push_back(r.estimate);
      w.sigma.push_back(r.std_error);
      w.converged.push_back(r.converged ? 1 : 0);
    }
  return w;
}

double Dual::sigma(const NumericWeights& w) const {
  double s2 = 0;
  for (size_t i = 0; i < g.size(); ++i) {
    double t = g[i] * w.sigma[i];
    s2 += t * t;
  }
  return std::sqrt(s2);
}

static void check_params(const Dual& a, const Dual& b) {
  if (a.g.size() != b.g.size())
    throw DimensionError("dual parameter counts differ");
}

Dual dual_add(const Dual& a, const Dual& b) {
  check_params(a, b);
  Dual r = a;
  r.v += b.v;
  for (size_t i = 0; i < r.g.size(); ++i) r.g[i] += b.g[i];
  return r;
}

Dual dual_sub(const Dual& a, const Dual& b) {
  check_params(a, b);
  Dual r = a;
  r.v -= b.v;
  for (size_t i = 0; i < r.g.size(); ++i) r.g[i] -= b.g[i];
  return r;
}

Dual dual_mul(const Dual& a, const Dual& b) {
  check_params(a, b);
  Dual r(a.v * b.v, a.g.size());
  for (size_t i = 0; i < r.g.size(); ++i) r.g[i] = a.v * b.g[i] + b.v * a.g[i];
  return r;
}

DualPoly DualPoly::from_poly(const Poly& p, size_t nparam) {
  DualPoly r(p.dim(), nparam);
  for (const auto& [m, c] : p.terms()) r.terms_.emplace(m, Dual(c.get_d(), nparam));
  return r;
}

Dual DualPoly::coeff(const MultiIndex& m) const {
  auto it = terms_.find(m);
  if (it != terms_.end()) return it->second;
  return Dual(0.0, nparam_);
}

void DualPoly::add_term(const MultiIndex& m, const Dual& c) {
  if ((int)m.size() != dim_)
    throw DimensionError("multi-index length does not match dimension");
  if (c.g.size() != nparam_)
    throw DimensionError("dual parameter counts differ");
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    bool zero = c.v == 0.0;
    for (double x : c.g) zero = zero && x == 0.0;
    if (!zero) terms_.emplace(m, c);
    return;
  }
  it->second = dual_add(it->second, c);
  bool zero = it->second.v == 0.0;
  for (double x : it->second.g) zero = zero && x == 0.0;
  if (zero) terms_.erase(it);
}

static void check_shape(const DualPoly& a, const DualPoly& b) {
  if (a.dim() != b.dim() || a.nparam() != b.nparam())
    throw DimensionError("dual polynomial shapes differ");
}

DualPoly DualPoly::operator+(const DualPoly& o) const {
  check_shape(*this, o);
  DualPoly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

DualPoly DualPoly::operator-(const DualPoly& o) const {
  check_shape(*this, o);
  DualPoly r = *this;
  for (const auto& [m, c] : o.terms_) {
    Dual neg(-c.v, nparam_);
    for (size_t i = 0; i < nparam_; ++i) neg.g[i] = -c.g[i];
    r.add_term(m, neg);
  }
  return r;
}

DualPoly DualPoly::operator*(const DualPoly& o) const {
  check_shape(*this, o);
  DualPoly r(dim_, nparam_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) r.add_term(mi_add(ma, mb), dual_mul(ca, cb));
  return r;
}

DualPoly& DualPoly::operator+=(const DualPoly& o) {
  *this = *this + o;
  return *this;
}

DualPoly& DualPoly::operator-=(const DualPoly& o) {
  *this = *this - o;
  return *this;
}

DualPoly DualPoly::scaled(const Dual& c) const {
  DualPoly r(dim_, nparam_);
  for (const auto& [m, t] : terms_) r.add_term(m, dual_mul(t, c));
  return r;
}

DualPoly DualPoly::partial(int i) const {
  if (i < 0 || i >= dim_) throw IndexError("variable index out of range");
  DualPoly r(dim_, nparam_);
  for (const auto& [m, c] : terms_) {
    if (m[i] == 0) continue;
    MultiIndex mm = m;
    double k = mm[i];
    --mm[i];
    Dual scaled(c.v * k, nparam_);
    for (size_t p = 0; p < nparam_; ++p) scaled.g[p] = c.g[p] * k;
    r.add_term(mm, scaled);
  }
  return r;
}

double DualPoly::max_abs() const {
  double m = 0;
  for (const auto& [mi, c] : terms_) m = std::max(m, std::fabs(c.v));
  return m;
}

ErrorBoundReport check_within(const DualPoly& p, const NumericWeights& w,
                              double nsigma, double abs_floor) {
  ErrorBoundReport rep;
  for (const auto& [m, c] : p.terms()) {
    double bound = nsigma * c.sigma(w) + abs_floor;
    double mag = std::fabs(c.v);
    if (mag > bound) rep.ok = false;
    if (mag >= rep.max_abs) {
      rep.max_abs = mag;
      rep.bound_at_max = bound;
    }
  }
  return rep;
}

ErrorBoundReport check_within(const NumericStarSeries& s,
                              const NumericWeights& w, double nsigma,
                              double abs_floor) {
  ErrorBoundReport rep;
  for (int k = 0; k <= s.order(); ++k) {
    ErrorBoundReport r = check_within(s.at(k), w, nsigma, abs_floor);
    rep.ok = rep.ok && r.ok;
    if (r.max_abs >= rep.max_abs) {
      rep.max_abs = r.max_abs;
      rep.bound_at_max = r.bound_at_max;
    }
  }
  return rep;
}

namespace {

DualPoly apply_dual(const BiDiffOperator& op, const DualPoly& f,
                    const DualPoly& g, size_t np) {
  DualPoly out(f.dim(), np);
  for (const auto& [key, coeff] : op.terms()) {
    DualPoly df = f;
    for (size_t i = 0; i < key.first.size() && !df.is_zero(); ++i)
      for (uint32_t k = 0; k < key.first[i]; ++k) df = df.partial((int)i);
    if (df.is_zero()) continue;
    DualPoly dg = g;
    for (size_t i = 0; i < key.second.size() && !dg.is_zero(); ++i)
      for (uint32_t k = 0; k < key.second[i]; ++k) dg = dg.partial((int)i);
    if (dg.is_zero()) continue;
    out += DualPoly::from_poly(coeff, np) * df * dg;
  }
  return out;
}

NumericStarSeries star_series_numeric(const NumericStarSeries& A,
                                      const NumericStarSeries& B,
                                      const PoissonStructure& pi,
                                      const OpsByOrder& ops,
                                      const NumericWeights& w) {
  const int K = A.order();
  const size_t np = w.hashes.size();
  NumericStarSeries s(K, DualPoly(pi.dim(), np));
  for (int k = 0; k <= K; ++k)
    for (const auto& [cls, op] : ops[k]) {
      int slot = w.require(cls.hash);
      Dual wt(w.value[slot] / (double)cls.aut, np);
      wt.g[slot] = 1.0 / (double)cls.aut;
      for (int a = 0; a + k <= K; ++a)
        for (int b = 0; a + b + k <= K; ++b) {
          DualPoly t = apply_dual(op, A.at(a), B.at(b), np);
          if (!t.is_zero()) s.at(k + a + b) += t.scaled(wt);
        }
    }
  return s;
}

NumericStarSeries lift_dual(const Poly& f, int order, int dim, size_t np) {
  NumericStarSeries s(order, DualPoly(dim, np));
  s.at(0) = DualPoly::from_poly(f, np);
  return s;
}

}  // namespace

NumericStarSeries star_product_numeric(const Poly& f, const Poly& g,
                                       const PoissonStructure& pi,
                                       const NumericWeights& w, int order,
                                       int arity_cap) {
  OpsByOrder ops = boundary_ops(pi, order, arity_cap);
  const size_t np = w.hashes.size();
  return star_series_numeric(lift_dual(f, order, pi.dim(), np),
                             lift_dual(g, order, pi.dim(), np), pi, ops, w);
}

NumericStarSeries associativity_defect_numeric(const Poly& f, const Poly& g,
                                               const Poly& h,
                                               const PoissonStructure& pi,
                                               const NumericWeights& w,
                                               int order, int arity_cap) {
  OpsByOrder ops = boundary_ops(pi, order, arity_cap);
  const size_t np = w.hashes.size();
  NumericStarSeries F = lift_dual(f, order, pi.dim(), np);
  NumericStarSeries G = lift_dual(g, order, pi.dim(), np);
  NumericStarSeries H = lift_dual(h, order, pi.dim(), np);
  NumericStarSeries left =
      star_series_numeric(star_series_numeric(F, G, pi, ops, w), H, pi, ops, w);
  NumericStarSeries right =
      star_series_numeric(F, star_series_numeric(G, H, pi, ops, w), pi, ops, w);
  return left - right;
}

}  // namespace dq
