#include "dq/graph.hpp"

#include <json.hpp>
#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "dq/canonical.hpp"
#include "dq/error.hpp"

namespace dq {

using Json = nlohmann::ordered_json;

int out_slots(const Vertex& v) {
  switch (v.kind) {
    case VertexKind::L:
      return 1;
    case VertexKind::Pi:
      return 2;
    case VertexKind::Observable:
      return 0;
  }
  return 0;
}

int in_slots(const Vertex& v) {
  switch (v.kind) {
    case VertexKind::L:
      return v.arity;
    case VertexKind::Pi:
      return v.arity - 1;
    case VertexKind::Observable:
      return -1;
  }
  return 0;
}

std::string vertex_kind_name(VertexKind k) {
  switch (k) {
    case VertexKind::L:
      return "l";
    case VertexKind::Pi:
      return "pi";
    case VertexKind::Observable:
      return "observable";
  }
  return "?";
}

void validate_graph(const FeynmanGraph& g) {
  const int n = static_cast<int>(g.vertices.size());
  for (const Vertex& v : g.vertices) {
    if (v.kind != VertexKind::Observable && v.arity < 1)
      throw FormatError("generator vertices need arity at least one");
    if (v.kind == VertexKind::Observable && v.label.empty())
      throw FormatError("observables need a label");
  }
  std::set<std::pair<int, int>> seen;
  std::vector<int> out_deg(n, 0), in_deg(n, 0);
  for (const auto& [t, h] : g.edges) {
    if (t < 0 || t >= n || h < 0 || h >= n) throw FormatError("edge endpoint out of range");
    if (t == h) throw FormatError("self-edge");
    if (!seen.insert({t, h}).second) throw FormatError("repeated ordered edge");
    ++out_deg[t];
    ++in_deg[h];
  }
  std::vector<int> leg_x(n, 0), leg_eta(n, 0);
  for (const auto& [v, tag] : g.legs) {
    if (v < 0 || v >= n) throw FormatError("leg vertex out of range");
    if (g.vertices[v].kind == VertexKind::Observable)
      throw FormatError("observables take no legs");
    (tag == FieldTag::X ? leg_x[v] : leg_eta[v])++;
  }
  for (int v = 0; v < n; ++v) {
    const Vertex& vx = g.vertices[v];
    if (vx.kind == VertexKind::Observable) {
      if (out_deg[v] != 0) throw FormatError("observables emit no edges");
      continue;
    }
    if (out_deg[v] + leg_eta[v] != out_slots(vx))
      throw FormatError("generator-side slot count mismatch");
    if (in_deg[v] + leg_x[v] != in_slots(vx))
      throw FormatError("input slot count mismatch");
  }
}

bool is_connected(const FeynmanGraph& g) {
  const int n = static_cast<int>(g.vertices.size());
  if (n <= 1) return true;
  std::vector<std::vector<int>> adj(n);
  for (const auto& [t, h] : g.edges) {
    adj[t].push_back(h);
    adj[h].push_back(t);
  }
  std::vector<char> vis(n, 0);
  std::vector<int> stack{0};
  vis[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!vis[w]) {
        vis[w] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  return count == n;
}

bool chains_within_caps(const FeynmanGraph& g, int dim) {
  const int n = static_cast<int>(g.vertices.size());
  auto bivalent = [&](int v) {
    const Vertex& vx = g.vertices[v];
    if (vx.kind == VertexKind::Observable) return false;
    return out_slots(vx) + in_slots(vx) == 2;
  };
  std::vector<std::vector<int>> adj(n);
  for (const auto& [t, h] : g.edges) {
    adj[t].push_back(h);
    adj[h].push_back(t);
  }
  std::vector<char> vis(n, 0);
  for (int s = 0; s < n; ++s) {
    if (vis[s] || !bivalent(s)) continue;
    int unary = 0, inputless = 0;
    std::vector<int> stack{s};
    vis[s] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      if (g.vertices[v].kind == VertexKind::L)
        ++unary;
      else
        ++inputless;
      for (int w : adj[v])
        if (!vis[w] && bivalent(w)) {
          vis[w] = 1;
          stack.push_back(w);
        }
    }
    if (unary > dim || inputless > 1) return false;
  }
  return true;
}

std::string graph_to_json(const GraphClass& gc) {
  Json j;
  Json verts = Json::array();
  for (const Vertex& v : gc.rep.vertices) {
    Json e;
    e["kind"] = vertex_kind_name(v.kind);
    if (v.kind == VertexKind::Observable)
      e["label"] = v.label;
    else
      e["arity"] = v.arity;
    verts.push_back(std::move(e));
  }
  j["vertices"] = std::move(verts);
  Json edges = Json::array();
  for (const auto& [t, h] : gc.rep.edges) edges.push_back(Json::array({t, h}));
  j["edges"] = std::move(edges);
  Json legs = Json::array();
  for (const auto& [v, tag] : gc.rep.legs)
    legs.push_back(Json::array({v, tag == FieldTag::X ? "X" : "eta"}));
  j["legs"] = std::move(legs);
  j["hash"] = gc.hash;
  j["aut"] = gc.aut;
  return j.dump(2);
}

GraphClass graph_class_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
    throw FormatError("graph json needs vertices and edges");
  FeynmanGraph g;
  for (const auto& e : j["vertices"]) {
    Vertex v;
    std::string kind = e.value("kind", "");
    if (kind == "l")
      v.kind = VertexKind::L;
    else if (kind == "pi")
      v.kind = VertexKind::Pi;
    else if (kind == "observable")
      v.kind = VertexKind::Observable;
    else
      throw FormatError("unknown vertex kind: " + kind);
    if (v.kind == VertexKind::Observable)
      v.label = e.value("label", "");
    else {
      if (!e.contains("arity")) throw FormatError("generator vertices need an arity");
      v.arity = e["arity"].get<int>();
    }
    g.vertices.push_back(std::move(v));
  }
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2) throw FormatError("edges are [tail, head] pairs");
    g.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  if (j.contains("legs"))
    for (const auto& e : j["legs"]) {
      if (!e.is_array() || e.size() != 2) throw FormatError("legs are [vertex, tag] pairs");
      std::string tag = e[1].get<std::string>();
      if (tag != "X" && tag != "eta") throw FormatError("leg tag must be X or eta");
      g.legs.emplace_back(e[0].get<int>(), tag == "X" ? FieldTag::X : FieldTag::Eta);
    }
  std::sort(g.edges.begin(), g.edges.end());
  std::sort(g.legs.begin(), g.legs.end());
  validate_graph(g);
  CanonicalForm cf = canonicalize(g);
  if (j.contains("hash") && j["hash"].is_string() && j["hash"].get<std::string>() != cf.hash)
    throw FormatError("stored hash does not match the graph");
  GraphClass gc;
  gc.hash = cf.hash;
  gc.rep = std::move(g);
  gc.aut = cf.aut;
  return gc;
}

GraphClass graph_class_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return graph_class_from_json(ss.str());
}

}  // namespace dq
