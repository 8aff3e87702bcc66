#include "dq/qme_audit.hpp"

#include <json.hpp>

#include "dq/error.hpp"

namespace dq {

long QmeLedger::count(const std::string& classification) const {
  long n = 0;
  for (const auto& s : strata)
    if (s.classification == classification) ++n;
  return n;
}

QmeLedger qme_degree_audit(const GraphClass& gc) {
  const FeynmanGraph& g = gc.rep;
  validate_graph(g);
  if (!g.legs.empty())
    throw FormatError("audit expects a boundary-product graph without legs");

  std::vector<int> obs, internal;
  for (int v = 0; v < (int)g.vertices.size(); ++v) {
    if (g.vertices[v].kind == VertexKind::Observable)
      obs.push_back(v);
    else if (g.vertices[v].kind == VertexKind::Pi)
      internal.push_back(v);
    else
      throw FormatError("audit covers bivector vertices only");
  }
  if (obs.size() != 2)
    throw FormatError("audit expects exactly two boundary observables");

  QmeLedger ledger;
  ledger.graph_hash = gc.hash;

  for (int v : internal) {
    for (int o : obs)
      ledger.strata.push_back(
          {"vertex_to_boundary", {v}, g.vertices[o].label, "product_stratum"});
    ledger.strata.push_back({"vertex_to_boundary", {v}, "interior", "dirichlet_zero"});
  }

  auto edges_between = [&](int u, int v) {
    int n = 0;
    for (const auto& e : g.edges)
      if ((e.first == u && e.second == v) || (e.first == v && e.second == u)) ++n;
    return n;
  };

  const int k = (int)internal.size();
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      int u = internal[a], v = internal[b];
      std::string cls;
      switch (edges_between(u, v)) {
        case 0: cls = "kontsevich_vanishing"; break;
        case 1: cls = "linfty_identity_term"; break;
        default: cls = "delta_term"; break;
      }
      ledger.strata.push_back({"bulk_collapse", {u, v}, "interior", cls});
    }

  // Groups of three or more vanish regardless of their wiring.
  std::vector<int> pick;
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    pick.clear();
    for (int i = 0; i < k; ++i)
      if (mask & (1u << i)) pick.push_back(internal[i]);
    if (pick.size() < 3) continue;
    ledger.strata.push_back({"bulk_collapse", pick, "interior", "kontsevich_vanishing"});
  }
  return ledger;
}

std::string qme_ledger_to_json(const QmeLedger& ledger) {
  nlohmann::ordered_json j;
  j["format"] = "qme_ledger/1";
  j["graph"] = ledger.graph_hash;
  j["strata"] = nlohmann::ordered_json::array();
  for (const auto& s : ledger.strata) {
    nlohmann::ordered_json e;
    e["kind"] = s.kind;
    e["vertices"] = s.vertices;
    e["target"] = s.target;
    e["classification"] = s.classification;
    j["strata"].push_back(e);
  }
  return j.dump(2);
}

}  // namespace dq
