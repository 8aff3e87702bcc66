#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dq/canonical.hpp"
#include "dq/enumerate.hpp"
#include "dq/error.hpp"
#include "dq/graph.hpp"

using namespace dq;

namespace {

Vertex lv(int n) { return {VertexKind::L, n, ""}; }
Vertex pv(int m) { return {VertexKind::Pi, m, ""}; }
Vertex ob(const std::string& s) { return {VertexKind::Observable, 0, s}; }

// Build a graph whose legs are exactly the unfilled slots.
FeynmanGraph make_graph(std::vector<Vertex> vs,
                        std::vector<std::pair<int, int>> es) {
  FeynmanGraph g;
  g.vertices = std::move(vs);
  g.edges = std::move(es);
  std::sort(g.edges.begin(), g.edges.end());
  std::vector<int> outd(g.vertices.size(), 0), ind(g.vertices.size(), 0);
  for (auto& e : g.edges) {
    outd[e.first]++;
    ind[e.second]++;
  }
  for (int v = 0; v < (int)g.vertices.size(); ++v) {
    if (g.vertices[v].kind == VertexKind::Observable) continue;
    for (int i = ind[v]; i < in_slots(g.vertices[v]); ++i)
      g.legs.push_back({v, FieldTag::X});
    for (int i = outd[v]; i < out_slots(g.vertices[v]); ++i)
      g.legs.push_back({v, FieldTag::Eta});
  }
  std::sort(g.legs.begin(), g.legs.end());
  return g;
}

FeynmanGraph make_boundary_graph(std::vector<Vertex> internal,
                                 std::vector<std::pair<int, int>> es) {
  std::vector<Vertex> vs = {ob("f"), ob("g")};
  for (auto& v : internal) vs.push_back(v);
  FeynmanGraph g;
  g.vertices = std::move(vs);
  g.edges = std::move(es);
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

bool local_connected(const FeynmanGraph& g) {
  int n = (int)g.vertices.size();
  if (n == 0) return false;
  std::vector<std::vector<int>> adj(n);
  for (auto& e : g.edges) {
    adj[e.first].push_back(e.second);
    adj[e.second].push_back(e.first);
  }
  std::vector<char> seen(n, 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
  }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

// Independent check of the bivalent-run caps, via union-find instead of DFS.
bool local_chains_ok(const FeynmanGraph& g, int dim) {
  int n = (int)g.vertices.size();
  auto bivalent = [&](int v) {
    const Vertex& vx = g.vertices[v];
    if (vx.kind == VertexKind::Observable) return false;
    return out_slots(vx) + in_slots(vx) == 2;
  };
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int v) {
    return parent[v] == v ? v : parent[v] = find(parent[v]);
  };
  for (auto& e : g.edges)
    if (bivalent(e.first) && bivalent(e.second))
      parent[find(e.first)] = find(e.second);
  std::map<int, std::pair<int, int>> counts;  // root -> (unary L, inputless Pi)
  for (int v = 0; v < n; ++v) {
    if (!bivalent(v)) continue;
    auto& c = counts[find(v)];
    if (g.vertices[v].kind == VertexKind::L) c.first++;
    if (g.vertices[v].kind == VertexKind::Pi) c.second++;
  }
  for (auto& [root, c] : counts)
    if (c.first > dim || c.second > 1) return false;
  return true;
}

long trivalent_or_more(const FeynmanGraph& g) {
  long v = 0;
  for (auto& vx : g.vertices) {
    if (vx.kind == VertexKind::Observable) continue;
    if (out_slots(vx) + in_slots(vx) >= 3) v++;
  }
  return v;
}

long factorial(long n) {
  long f = 1;
  for (long i = 2; i <= n; ++i) f *= i;
  return f;
}

// Product of count! over groups of identically-typed vertices.
long like_typed_order(const FeynmanGraph& g) {
  std::map<std::tuple<int, int, std::string>, long> groups;
  for (auto& v : g.vertices)
    groups[{(int)v.kind, v.arity, v.label}]++;
  long p = 1;
  for (auto& [key, c] : groups) p *= factorial(c);
  return p;
}

}  // namespace

TEST_CASE("vertex slot counts") {
  CHECK(out_slots(lv(1)) == 1);
  CHECK(in_slots(lv(1)) == 1);
  CHECK(in_slots(lv(3)) == 3);
  CHECK(out_slots(pv(1)) == 2);
  CHECK(in_slots(pv(1)) == 0);
  CHECK(in_slots(pv(3)) == 2);
  CHECK(out_slots(ob("f")) == 0);
  CHECK(in_slots(ob("f")) == -1);
}

TEST_CASE("graph validation") {
  CHECK_NOTHROW(validate_graph(make_graph({lv(1), lv(1)}, {{0, 1}, {1, 0}})));

  FeynmanGraph self = make_graph({lv(2)}, {});
  self.edges = {{0, 0}};
  CHECK_THROWS_AS(validate_graph(self), FormatError);

  FeynmanGraph rep = make_graph({pv(2), lv(2)}, {});
  rep.edges = {{0, 1}, {0, 1}};
  CHECK_THROWS_AS(validate_graph(rep), FormatError);

  FeynmanGraph zero;
  zero.vertices = {lv(0)};
  CHECK_THROWS_AS(validate_graph(zero), FormatError);

  FeynmanGraph overfull = make_graph({lv(1), lv(1)}, {{0, 1}, {1, 0}});
  overfull.edges.push_back({0, 1});
  CHECK_THROWS_AS(validate_graph(overfull), FormatError);

  FeynmanGraph bad_legs = make_graph({lv(1), lv(1)}, {{0, 1}, {1, 0}});
  bad_legs.legs.push_back({0, FieldTag::X});
  CHECK_THROWS_AS(validate_graph(bad_legs), FormatError);
}

TEST_CASE("finiteness bound") {
  FinitenessBound b21 = finiteness_bound(2, 1, 2);
  CHECK(b21.v_max == 2);
  CHECK(b21.chain_l1_cap == 2);
  CHECK(b21.chain_pi1_cap == 1);

  CHECK(finiteness_bound(3, 0, 2).v_max == 1);
  CHECK(finiteness_bound(0, 0, 2).v_max == 0);
  CHECK(finiteness_bound(0, 1, 5).chain_l1_cap == 5);
  CHECK(finiteness_bound(1, 0, 2).v_max == 0);
}

TEST_CASE("empty cells") {
  EnumOptions opt;
  CHECK(enumerate_graphs(0, 0, opt).empty());
  CHECK(enumerate_graphs(1, 0, opt).empty());
}

TEST_CASE("wedge-type tree") {
  EnumOptions opt;
  opt.allow_l = false;
  opt.arity_cap = 1;
  auto classes = enumerate_graphs(2, 0, opt);
  REQUIRE(classes.size() == 1);
  const GraphClass& c = classes[0];
  CHECK(c.aut == 1);
  REQUIRE(c.rep.vertices.size() == 1);
  CHECK(c.rep.vertices[0].kind == VertexKind::Pi);
  CHECK(c.rep.vertices[0].arity == 1);
  CHECK(c.rep.edges.empty());
  REQUIRE(c.rep.legs.size() == 2);
  CHECK(c.rep.legs[0].second == FieldTag::Eta);
  CHECK(c.rep.legs[1].second == FieldTag::Eta);
}

TEST_CASE("unary generator cycles gated by target dimension") {
  EnumOptions opt;
  opt.allow_pi = false;
  opt.arity_cap = 1;

  opt.dim = 2;
  auto d2 = enumerate_graphs(0, 1, opt);
  REQUIRE(d2.size() == 1);
  CHECK(d2[0].rep.vertices.size() == 2);
  CHECK(d2[0].aut == 2);

  opt.dim = 3;
  auto d3 = enumerate_graphs(0, 1, opt);
  REQUIRE(d3.size() == 2);
  std::multiset<size_t> sizes;
  std::multiset<long> auts;
  for (auto& c : d3) {
    sizes.insert(c.rep.vertices.size());
    auts.insert(c.aut);
  }
  CHECK(sizes == std::multiset<size_t>{2, 3});
  CHECK(auts == std::multiset<long>{2, 3});

  opt.dim = 4;
  CHECK(enumerate_graphs(0, 1, opt).size() == 3);
}

TEST_CASE("enumeration matches exhaustive generation") {
  const int dim = 2;
  const int arity_cap = 3;
  const int max_n = 4;

  struct Cell {
    long labeled = 0;
    std::set<std::string> hashes;
  };
  std::map<std::pair<int, int>, Cell> cells;

  std::vector<Vertex> menu;
  for (int a = 1; a <= arity_cap; ++a) menu.push_back(lv(a));
  for (int a = 1; a <= arity_cap; ++a) menu.push_back(pv(a));

  for (int N = 1; N <= max_n; ++N) {
    std::vector<std::pair<int, int>> univ;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        if (i != j) univ.push_back({i, j});
    const int U = (int)univ.size();

    std::vector<int> pick(N, 0);
    while (true) {
      std::vector<Vertex> vs;
      for (int i = 0; i < N; ++i) vs.push_back(menu[pick[i]]);

      for (unsigned mask = 0; mask < (1u << U); ++mask) {
        int e = __builtin_popcount(mask);
        int loops = e - N + 1;
        if (loops < 0 || loops > 2) continue;

        std::vector<int> outd(N, 0), ind(N, 0);
        bool ok = true;
        std::vector<std::pair<int, int>> es;
        for (int b = 0; b < U && ok; ++b) {
          if (!(mask & (1u << b))) continue;
          auto [t, h] = univ[b];
          if (++outd[t] > out_slots(vs[t])) ok = false;
          if (++ind[h] > in_slots(vs[h])) ok = false;
          es.push_back(univ[b]);
        }
        if (!ok) continue;

        int n_ext = 0;
        for (int i = 0; i < N; ++i)
          n_ext += (out_slots(vs[i]) - outd[i]) + (in_slots(vs[i]) - ind[i]);
        if (n_ext > 3) continue;

        FeynmanGraph g = make_graph(vs, es);
        if (!local_connected(g)) continue;
        if (!local_chains_ok(g, dim)) continue;

        Cell& cell = cells[{n_ext, loops}];
        cell.labeled++;
        cell.hashes.insert(canonical_hash(g));
      }

      int i = N - 1;
      while (i >= 0 && pick[i] == (int)menu.size() - 1) pick[i--] = 0;
      if (i < 0) break;
      ++pick[i];
    }
  }

  REQUIRE(cells[{2, 0}].labeled > 0);
  REQUIRE(cells[{0, 1}].labeled > 0);
  REQUIRE(cells[{2, 1}].labeled > 0);

  for (int n_ext = 0; n_ext <= 3; ++n_ext) {
    for (int loops = 0; loops <= 2; ++loops) {
      EnumOptions opt;
      opt.arity_cap = arity_cap;
      opt.dim = dim;
      opt.max_internal = max_n;
      auto classes = enumerate_graphs(n_ext, loops, opt);

      FinitenessBound fb = finiteness_bound(n_ext, loops, dim);
      std::set<std::string> got;
      long orbit_sum = 0;
      for (auto& c : classes) {
        got.insert(c.hash);
        CHECK_NOTHROW(validate_graph(c.rep));
        CHECK(is_connected(c.rep));
        CHECK(local_connected(c.rep));
        CHECK(chains_within_caps(c.rep, dim));
        CHECK(local_chains_ok(c.rep, dim));
        CHECK(trivalent_or_more(c.rep) <= fb.v_max);

        long v = 0, v2 = 0;
        for (auto& vx : c.rep.vertices) {
          int slots = out_slots(vx) + in_slots(vx);
          (slots >= 3 ? v : v2)++;
        }
        CHECK(v + v2 - (long)c.rep.edges.size() + loops == 1);

        long order = like_typed_order(c.rep);
        REQUIRE(c.aut >= 1);
        REQUIRE(order % c.aut == 0);
        long n_fact = factorial((long)c.rep.vertices.size());
        orbit_sum += n_fact / c.aut;
      }
      CHECK(got.size() == classes.size());

      Cell oracle;
      auto it = cells.find({n_ext, loops});
      if (it != cells.end()) oracle = it->second;
      CHECK(got == oracle.hashes);
      CHECK(orbit_sum == oracle.labeled);
    }
  }
}

TEST_CASE("boundary enumeration") {
  auto k0 = enumerate_boundary_graphs(0, 3);
  REQUIRE(k0.size() == 1);
  CHECK(k0[0].rep.vertices.size() == 2);
  CHECK(k0[0].rep.edges.empty());
  CHECK(k0[0].aut == 1);

  auto k1 = enumerate_boundary_graphs(1, 1);
  REQUIRE(k1.size() == 1);
  CHECK(k1[0].aut == 1);
  CHECK(k1[0].rep.edges ==
        std::vector<std::pair<int, int>>{{2, 0}, {2, 1}});

  auto k2c1 = enumerate_boundary_graphs(2, 1);
  REQUIRE(k2c1.size() == 1);
  CHECK(k2c1[0].aut == 2);

  auto k2 = enumerate_boundary_graphs(2, 2);
  REQUIRE(k2.size() == 6);
  std::multiset<long> auts;
  for (auto& c : k2) auts.insert(c.aut);
  CHECK(auts == std::multiset<long>{1, 1, 1, 2, 2, 2});

  FeynmanGraph dw =
      make_boundary_graph({pv(1), pv(1)}, {{2, 0}, {2, 1}, {3, 0}, {3, 1}});
  std::string dw_hash = canonical_hash(dw);
  bool found = false;
  for (auto& c : k2) {
    if (c.hash != dw_hash) continue;
    found = true;
    CHECK(c.aut == 2);
  }
  CHECK(found);

  auto k3 = enumerate_boundary_graphs(3, 1);
  REQUIRE(k3.size() == 1);
  CHECK(k3[0].aut == 6);

  for (int k = 0; k <= 3; ++k) {
    for (auto& c : enumerate_boundary_graphs(k, 3)) {
      CHECK_NOTHROW(validate_graph(c.rep));
      CHECK(c.rep.legs.empty());
      REQUIRE(c.rep.vertices.size() >= 2);
      CHECK(c.rep.vertices[0].kind == VertexKind::Observable);
      CHECK(c.rep.vertices[0].label == "f");
      CHECK(c.rep.vertices[1].kind == VertexKind::Observable);
      CHECK(c.rep.vertices[1].label == "g");
      CHECK((int)c.rep.edges.size() == 2 * k);

      std::vector<int> outd(c.rep.vertices.size(), 0),
          ind(c.rep.vertices.size(), 0);
      for (auto& e : c.rep.edges) {
        outd[e.first]++;
        ind[e.second]++;
      }
      for (size_t v = 2; v < c.rep.vertices.size(); ++v) {
        CHECK(c.rep.vertices[v].kind == VertexKind::Pi);
        CHECK(outd[v] == 2);
        CHECK(ind[v] == c.rep.vertices[v].arity - 1);
      }
    }
  }
}

TEST_CASE("canonical hashing and automorphisms") {
  FeynmanGraph a = make_graph({lv(1), pv(2)}, {{0, 1}});
  FeynmanGraph b = make_graph({pv(2), lv(1)}, {{1, 0}});
  CHECK(canonical_hash(a) == canonical_hash(b));
  CHECK(automorphisms(a) == 1);

  FeynmanGraph ladder = make_graph({lv(1), lv(1)}, {{0, 1}, {1, 0}});
  CHECK(automorphisms(ladder) == 2);

  FeynmanGraph wedge = make_boundary_graph({pv(1)}, {{2, 0}, {2, 1}});
  CHECK(automorphisms(wedge) == 1);

  FeynmanGraph tri =
      make_graph({pv(3), pv(3), pv(3)},
                 {{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 1}});
  CHECK(automorphisms(tri) == 6);

  FeynmanGraph tri_relabeled =
      make_graph({pv(3), pv(3), pv(3)},
                 {{1, 2}, {2, 1}, {1, 0}, {0, 1}, {2, 0}, {0, 2}});
  CHECK(canonical_hash(tri) == canonical_hash(tri_relabeled));
}

TEST_CASE("vacuum candidate filter") {
  FeynmanGraph tree = make_graph({pv(1)}, {});
  GraphClass tc{canonical_hash(tree), tree, 1};
  CHECK_THROWS_AS(vacuum_filter(tc), FormatError);

  FeynmanGraph wedge = make_boundary_graph({pv(1)}, {{2, 0}, {2, 1}});
  GraphClass wc{canonical_hash(wedge), wedge, 1};
  CHECK_THROWS_AS(vacuum_filter(wc), FormatError);

  // Degree count fails (2 edges vs 2 vertices), so the filter rejects it
  // before any slot bookkeeping matters.
  FeynmanGraph pair_g;
  pair_g.vertices = {pv(1), pv(1)};
  pair_g.edges = {{0, 1}, {1, 0}};
  GraphClass pc{"", pair_g, 1};
  CHECK_FALSE(vacuum_filter(pc));

  FeynmanGraph tri =
      make_graph({pv(3), pv(3), pv(3)},
                 {{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 1}});
  GraphClass trc{canonical_hash(tri), tri, automorphisms(tri)};
  CHECK(vacuum_filter(trc));

  // Any candidate with E = 2V at l loops has l-1 vertices, so a cap of 4
  // is exhaustive through four loops.
  for (int l = 0; l <= 3; ++l) {
    EnumOptions opt;
    opt.max_internal = 4;
    for (auto& c : enumerate_graphs(0, l, opt)) CHECK_FALSE(vacuum_filter(c));
  }

  EnumOptions opt4;
  opt4.allow_l = false;
  opt4.max_internal = 3;
  auto four = enumerate_graphs(0, 4, opt4);
  REQUIRE(four.size() == 1);
  CHECK(four[0].hash == canonical_hash(tri));
  CHECK(four[0].aut == 6);
  CHECK(vacuum_filter(four[0]));

  // Inputless-bivector-only theory: nothing survives at any loop order.
  for (int l = 0; l <= 3; ++l) {
    EnumOptions opt;
    opt.allow_l = false;
    opt.arity_cap = 1;
    opt.max_internal = 6;
    CHECK(enumerate_graphs(0, l, opt).empty());
  }
}

TEST_CASE("graph JSON round trip") {
  auto k2 = enumerate_boundary_graphs(2, 2);
  REQUIRE(!k2.empty());
  for (auto& c : k2) {
    GraphClass back = graph_class_from_json(graph_to_json(c));
    CHECK(back.hash == c.hash);
    CHECK(back.aut == c.aut);
    CHECK(back.rep.edges == c.rep.edges);
    CHECK(back.rep.legs == c.rep.legs);
    REQUIRE(back.rep.vertices.size() == c.rep.vertices.size());
    for (size_t i = 0; i < c.rep.vertices.size(); ++i) {
      CHECK(back.rep.vertices[i].kind == c.rep.vertices[i].kind);
      if (c.rep.vertices[i].kind == VertexKind::Observable)
        CHECK(back.rep.vertices[i].label == c.rep.vertices[i].label);
      else
        CHECK(back.rep.vertices[i].arity == c.rep.vertices[i].arity);
    }
  }

  auto j = nlohmann::ordered_json::parse(graph_to_json(k2[0]));
  j["hash"] = "bogus";
  CHECK_THROWS_AS(graph_class_from_json(j.dump()), FormatError);

  auto j2 = nlohmann::ordered_json::parse(graph_to_json(k2[0]));
  j2["edges"].push_back({2, 2});
  CHECK_THROWS_AS(graph_class_from_json(j2.dump()), FormatError);

  CHECK_THROWS_AS(graph_class_from_json("{\"format\": \"nope\"}"), FormatError);
}

TEST_CASE("deterministic output across thread counts") {
  EnumOptions serial;
  serial.max_internal = 4;
  serial.threads = 1;
  EnumOptions wide = serial;
  wide.threads = 4;

  auto ra = enumerate_graphs(2, 1, serial);
  auto rb = enumerate_graphs(2, 1, wide);
  auto rc = enumerate_graphs(2, 1, serial);
  REQUIRE(!ra.empty());
  REQUIRE(ra.size() == rb.size());
  REQUIRE(ra.size() == rc.size());
  for (size_t i = 0; i < ra.size(); ++i) {
    CHECK(ra[i].hash == rb[i].hash);
    CHECK(ra[i].aut == rb[i].aut);
    CHECK(ra[i].hash == rc[i].hash);
    CHECK(ra[i].rep.edges == rb[i].rep.edges);
  }
  for (size_t i = 1; i < ra.size(); ++i) CHECK(ra[i - 1].hash < ra[i].hash);

  auto ba = enumerate_boundary_graphs(2, 2);
  auto bb = enumerate_boundary_graphs(2, 2);
  REQUIRE(ba.size() == bb.size());
  for (size_t i = 0; i < ba.size(); ++i) CHECK(ba[i].hash == bb[i].hash);
}
