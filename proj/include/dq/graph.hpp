#pragma once
#include <string>
#include <utility>
#include <vector>

namespace dq {

enum class VertexKind { L, Pi, Observable };
enum class FieldTag { X, Eta };

struct Vertex {
  VertexKind kind = VertexKind::L;
  int arity = 0;       // L: n inputs; Pi: m (so m-1 inputs); observables ignore it
  std::string label;   // observables only
};

// Directed graph with edges running from the generator side of one vertex
// into an input slot of another.  Legs are unfilled slots exposed to the
// outside, recorded as (vertex, field tag).
struct FeynmanGraph {
  std::vector<Vertex> vertices;
  std::vector<std::pair<int, int>> edges;          // (tail, head), kept sorted
  std::vector<std::pair<int, FieldTag>> legs;      // kept sorted, X before Eta
};

int out_slots(const Vertex& v);  // L: 1, Pi: 2, observables: 0
int in_slots(const Vertex& v);   // L: n, Pi: m-1, observables: unbounded (-1)

// Structural checks: slot bookkeeping, no self-edges, no repeated ordered
// pair, no arity-zero generator vertices.  Throws FormatError on violation.
void validate_graph(const FeynmanGraph& g);

// Connectivity over the underlying undirected graph (legs do not connect).
bool is_connected(const FeynmanGraph& g);

// Maximal runs of degree-two vertices: at most `dim` unary generator vertices
// and at most one inputless bivector vertex per run.
bool chains_within_caps(const FeynmanGraph& g, int dim);

struct GraphClass {
  std::string hash;
  FeynmanGraph rep;
  long aut = 1;
};

std::string graph_to_json(const GraphClass& gc);
GraphClass graph_class_from_json(const std::string& text);
GraphClass graph_class_from_file(const std::string& path);

std::string vertex_kind_name(VertexKind k);

}  // namespace dq
