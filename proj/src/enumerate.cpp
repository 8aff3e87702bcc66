#include "dq/enumerate.hpp"

#include <algorithm>
#include <functional>
#include <map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dq/canonical.hpp"
#include "dq/error.hpp"

namespace dq {

namespace {

struct KindSpec {
  VertexKind kind;
  int arity;
};

int spec_out(const KindSpec& k) { return k.kind == VertexKind::L ? 1 : 2; }
int spec_in(const KindSpec& k) { return k.kind == VertexKind::L ? k.arity : k.arity - 1; }

std::vector<KindSpec> kind_menu(const EnumOptions& opt) {
  std::vector<KindSpec> menu;
  if (opt.allow_l)
    for (int a = 1; a <= opt.arity_cap; ++a) menu.push_back({VertexKind::L, a});
  if (opt.allow_pi)
    for (int a = 1; a <= opt.arity_cap; ++a) menu.push_back({VertexKind::Pi, a});
  return menu;
}

// All non-decreasing index sequences of length n over the menu.
void multisets(int n, int menu_size, std::vector<int>& cur,
               std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == n) {
    out.push_back(cur);
    return;
  }
  int start = cur.empty() ? 0 : cur.back();
  for (int i = start; i < menu_size; ++i) {
    cur.push_back(i);
    multisets(n, menu_size, cur, out);
    cur.pop_back();
  }
}

// Fill `e` distinct ordered pairs over the given capacities, codes strictly
// increasing; every complete selection is handed to sink.
struct EdgeFiller {
  int n = 0;
  int target = 0;
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> out_cap, in_cap, out_use, in_use;
  std::vector<std::pair<int, int>> chosen;
  std::function<void(const std::vector<std::pair<int, int>>&)> sink;

  void run(size_t from) {
    if (static_cast<int>(chosen.size()) == target) {
      sink(chosen);
      return;
    }
    int need = target - static_cast<int>(chosen.size());
    for (size_t c = from; c + need <= pairs.size(); ++c) {
      auto [t, h] = pairs[c];
      if (out_use[t] >= out_cap[t] || in_use[h] >= in_cap[h]) continue;
      ++out_use[t];
      ++in_use[h];
      chosen.push_back(pairs[c]);
      run(c + 1);
      chosen.pop_back();
      --out_use[t];
      --in_use[h];
    }
  }
};

int derived_cap(const FinitenessBound& fb, int n_ext, int loops, int dim) {
  int chains = std::max(fb.v_max + loops - 1, 0) + n_ext + 1;
  return fb.v_max + chains * (dim + 1);
}

void enumerate_for_multiset(const std::vector<KindSpec>& kinds, int n_ext, int loops,
                            const EnumOptions& opt,
                            std::map<std::string, GraphClass>& sink) {
  const int n = static_cast<int>(kinds.size());
  const int e = n + loops - 1;
  if (e < 0) return;
  int out_total = 0, in_total = 0;
  for (const auto& k : kinds) {
    out_total += spec_out(k);
    in_total += spec_in(k);
  }
  if (out_total + in_total - 2 * e != n_ext) return;
  if (e > out_total || e > in_total) return;

  EdgeFiller filler;
  filler.n = n;
  filler.target = e;
  for (int t = 0; t < n; ++t)
    for (int h = 0; h < n; ++h)
      if (t != h) filler.pairs.emplace_back(t, h);
  filler.out_cap.resize(n);
  filler.in_cap.resize(n);
  for (int v = 0; v < n; ++v) {
    filler.out_cap[v] = spec_out(kinds[v]);
    filler.in_cap[v] = spec_in(kinds[v]);
  }
  filler.out_use.assign(n, 0);
  filler.in_use.assign(n, 0);
  filler.sink = [&](const std::vector<std::pair<int, int>>& edges) {
    FeynmanGraph g;
    for (const auto& k : kinds) g.vertices.push_back({k.kind, k.arity, ""});
    g.edges = edges;
    for (int v = 0; v < n; ++v) {
      for (int r = filler.in_use[v]; r < filler.in_cap[v]; ++r)
        g.legs.emplace_back(v, FieldTag::X);
      for (int r = filler.out_use[v]; r < filler.out_cap[v]; ++r)
        g.legs.emplace_back(v, FieldTag::Eta);
    }
    std::sort(g.legs.begin(), g.legs.end());
    if (!is_connected(g)) return;
    if (!chains_within_caps(g, opt.dim)) return;
    CanonicalForm cf = canonicalize(g);
    if (sink.count(cf.hash)) return;
    GraphClass gc;
    gc.hash = cf.hash;
    gc.rep = std::move(g);
    gc.aut = cf.aut;
    sink.emplace(gc.hash, std::move(gc));
  };
  filler.run(0);
}

}  // namespace

FinitenessBound finiteness_bound(int n_ext, int loops, int dim) {
  if (n_ext < 0 || loops < 0) throw IndexError("leg and loop counts must be non-negative");
  if (dim < 1) throw DimensionError("dimension must be positive");
  FinitenessBound fb;
  fb.v_max = std::max(0, 2 * loops + n_ext - 2);
  fb.chain_l1_cap = dim;
  fb.chain_pi1_cap = 1;
  return fb;
}

std::vector<GraphClass> enumerate_graphs(int n_ext, int loops, const EnumOptions& opt) {
  FinitenessBound fb = finiteness_bound(n_ext, loops, opt.dim);
  if (opt.arity_cap < 1) throw IndexError("arity cap must be at least one");
  const int cap = opt.max_internal >= 0 ? opt.max_internal
                                        : derived_cap(fb, n_ext, loops, opt.dim);
  std::vector<KindSpec> menu = kind_menu(opt);
  std::vector<std::vector<int>> jobs;
  for (int n = 1; n <= cap; ++n) {
    std::vector<int> cur;
    multisets(n, static_cast<int>(menu.size()), cur, jobs);
  }

  std::vector<std::map<std::string, GraphClass>> partial(jobs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (opt.threads != 1) \
    num_threads(opt.threads > 0 ? opt.threads : omp_get_max_threads())
#endif
  for (size_t j = 0; j < jobs.size(); ++j) {
    std::vector<KindSpec> kinds;
    for (int i : jobs[j]) kinds.push_back(menu[i]);
    enumerate_for_multiset(kinds, n_ext, loops, opt, partial[j]);
  }

  std::map<std::string, GraphClass> merged;
  for (auto& m : partial)
    for (auto& [h, gc] : m) merged.emplace(h, std::move(gc));
  std::vector<GraphClass> out;
  out.reserve(merged.size());
  for (auto& [h, gc] : merged) out.push_back(std::move(gc));
  return out;
}

std::vector<GraphClass> enumerate_boundary_graphs(int order, int arity_cap) {
  if (order < 0) throw IndexError("order must be non-negative");
  if (arity_cap < 1) throw IndexError("arity cap must be at least one");
  std::map<std::string, GraphClass> merged;

  std::vector<std::vector<int>> jobs;
  {
    std::vector<int> cur;
    multisets(order, arity_cap, cur, jobs);
  }
  for (const auto& job : jobs) {
    const int n = order + 2;
    FeynmanGraph base;
    base.vertices.push_back({VertexKind::Observable, 0, "f"});
    base.vertices.push_back({VertexKind::Observable, 0, "g"});
    for (int i : job) base.vertices.push_back({VertexKind::Pi, i + 1, ""});

    EdgeFiller filler;
    filler.n = n;
    filler.target = 2 * order;
    for (int t = 2; t < n; ++t)
      for (int h = 0; h < n; ++h)
        if (t != h) filler.pairs.emplace_back(t, h);
    filler.out_cap.assign(n, 0);
    filler.in_cap.assign(n, 0);
    filler.in_cap[0] = filler.in_cap[1] = 2 * order;
    for (int v = 2; v < n; ++v) {
      filler.out_cap[v] = 2;
      filler.in_cap[v] = base.vertices[v].arity - 1;
    }
    filler.out_use.assign(n, 0);
    filler.in_use.assign(n, 0);
    filler.sink = [&](const std::vector<std::pair<int, int>>& edges) {
      for (int v = 2; v < n; ++v) {
        if (filler.out_use[v] != 2) return;
        if (filler.in_use[v] != base.vertices[v].arity - 1) return;
      }
      FeynmanGraph g = base;
      g.edges = edges;
      CanonicalForm cf = canonicalize(g);
      if (merged.count(cf.hash)) return;
      GraphClass gc;
      gc.hash = cf.hash;
      gc.rep = std::move(g);
      gc.aut = cf.aut;
      merged.emplace(gc.hash, std::move(gc));
    };
    filler.run(0);
  }

  std::vector<GraphClass> out;
  out.reserve(merged.size());
  for (auto& [h, gc] : merged) out.push_back(std::move(gc));
  return out;
}

bool vacuum_filter(const GraphClass& gc) {
  const FeynmanGraph& g = gc.rep;
  if (!g.legs.empty()) throw FormatError("vacuum filter needs a closed graph, legs present");
  for (const Vertex& v : g.vertices)
    if (v.kind == VertexKind::Observable)
      throw FormatError("vacuum filter needs a closed graph, observables present");
  if (g.edges.size() != 2 * g.vertices.size()) return false;
  std::vector<int> in_deg(g.vertices.size(), 0);
  for (const auto& [t, h] : g.edges) ++in_deg[h];
  for (size_t v = 0; v < g.vertices.size(); ++v)
    if (g.vertices[v].kind == VertexKind::Pi && in_deg[v] > 0) return true;
  return false;
}

}  // namespace dq
