#include "dq/canonical.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "dq/error.hpp"

namespace dq {

namespace {

struct VertexDesc {
  char kind;
  int arity;
  std::string label;
  int leg_x = 0;
  int leg_eta = 0;

  bool operator<(const VertexDesc& o) const {
    return std::tie(kind, arity, label, leg_x, leg_eta) <
           std::tie(o.kind, o.arity, o.label, o.leg_x, o.leg_eta);
  }
  bool operator==(const VertexDesc& o) const {
    return std::tie(kind, arity, label, leg_x, leg_eta) ==
           std::tie(o.kind, o.arity, o.label, o.leg_x, o.leg_eta);
  }
  std::string str() const {
    std::ostringstream os;
    os << kind;
    if (kind == 'O')
      os << label;
    else
      os << arity << ":" << leg_x << ":" << leg_eta;
    return os.str();
  }
};

// Colors start from the local vertex data and are sharpened by neighbor color
// multisets until stable; automorphisms can only permute within a color.
std::vector<int> refine_colors(const FeynmanGraph& g, const std::vector<VertexDesc>& desc) {
  const int n = static_cast<int>(g.vertices.size());
  std::vector<std::vector<int>> outn(n), inn(n);
  for (const auto& [t, h] : g.edges) {
    outn[t].push_back(h);
    inn[h].push_back(t);
  }
  std::vector<int> color(n, 0);
  {
    std::map<VertexDesc, int> rank;
    for (const auto& d : desc) rank.emplace(d, 0);
    int r = 0;
    for (auto& [d, v] : rank) v = r++;
    for (int i = 0; i < n; ++i) color[i] = rank.at(desc[i]);
  }
  for (;;) {
    using Sig = std::tuple<int, std::vector<int>, std::vector<int>>;
    std::vector<Sig> sig(n);
    for (int v = 0; v < n; ++v) {
      std::vector<int> oc, ic;
      for (int w : outn[v]) oc.push_back(color[w]);
      for (int w : inn[v]) ic.push_back(color[w]);
      std::sort(oc.begin(), oc.end());
      std::sort(ic.begin(), ic.end());
      sig[v] = {color[v], std::move(oc), std::move(ic)};
    }
    std::map<Sig, int> rank;
    for (const auto& s : sig) rank.emplace(s, 0);
    int r = 0;
    for (auto& [s, v] : rank) v = r++;
    std::vector<int> next(n);
    for (int v = 0; v < n; ++v) next[v] = rank.at(sig[v]);
    if (next == color) return color;
    color = std::move(next);
  }
}

std::string encode(const FeynmanGraph& g, const std::vector<VertexDesc>& desc,
                   const std::vector<int>& pos) {
  const int n = static_cast<int>(g.vertices.size());
  std::vector<int> inv(n);
  for (int v = 0; v < n; ++v) inv[pos[v]] = v;
  std::ostringstream os;
  os << "V:";
  for (int j = 0; j < n; ++j) {
    if (j) os << ",";
    os << desc[inv[j]].str();
  }
  std::vector<std::pair<int, int>> edges;
  edges.reserve(g.edges.size());
  for (const auto& [t, h] : g.edges) edges.emplace_back(pos[t], pos[h]);
  std::sort(edges.begin(), edges.end());
  os << ";E:";
  for (size_t i = 0; i < edges.size(); ++i) {
    if (i) os << ",";
    os << edges[i].first << ">" << edges[i].second;
  }
  return os.str();
}

}  // namespace

CanonicalForm canonicalize(const FeynmanGraph& g) {
  const int n = static_cast<int>(g.vertices.size());
  std::vector<VertexDesc> desc(n);
  for (int v = 0; v < n; ++v) {
    const Vertex& vx = g.vertices[v];
    desc[v].kind = vx.kind == VertexKind::L ? 'L' : vx.kind == VertexKind::Pi ? 'P' : 'O';
    desc[v].arity = vx.kind == VertexKind::Observable ? 0 : vx.arity;
    desc[v].label = vx.label;
  }
  for (const auto& [v, tag] : g.legs) (tag == FieldTag::X ? desc[v].leg_x : desc[v].leg_eta)++;

  std::vector<int> color = refine_colors(g, desc);
  // Vertices grouped by color; positions are assigned class-block by
  // class-block, permuting only within a class.
  std::map<int, std::vector<int>> classes;
  for (int v = 0; v < n; ++v) classes[color[v]].push_back(v);
  std::vector<std::vector<int>> blocks;
  std::vector<int> base(n, 0);
  {
    int at = 0;
    for (auto& [c, members] : classes) {
      for (int v : members) base[v] = at++;
      blocks.push_back(members);
    }
  }

  CanonicalForm best;
  long hits = 0;
  std::vector<int> pos(n);
  std::function<void(size_t)> walk = [&](size_t b) {
    if (b == blocks.size()) {
      std::string enc = encode(g, desc, pos);
      if (best.hash.empty() || enc < best.hash) {
        best.hash = enc;
        hits = 1;
      } else if (enc == best.hash) {
        ++hits;
      }
      return;
    }
    std::vector<int>& members = blocks[b];
    int start = n;
    for (int v : members) start = std::min(start, base[v]);
    std::sort(members.begin(), members.end());
    do {
      for (size_t i = 0; i < members.size(); ++i) pos[members[i]] = start + static_cast<int>(i);
      walk(b + 1);
    } while (std::next_permutation(members.begin(), members.end()));
  };
  if (n == 0) {
    best.hash = "V:;E:";
    best.aut = 1;
    return best;
  }
  walk(0);
  best.aut = hits;
  return best;
}

std::string canonical_hash(const FeynmanGraph& g) { return canonicalize(g).hash; }

long automorphisms(const FeynmanGraph& g) { return canonicalize(g).aut; }

}  // namespace dq
