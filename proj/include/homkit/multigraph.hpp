#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace homkit {

// Undirected multigraph. Loops (u == v) and parallel edges allowed.
// Edge ids are dense in [0, |E|): the id of edges[e] is e.
// Edge e owns two darts (edge-ends): dart 2e at edges[e].first,
// dart 2e+1 at edges[e].second. A loop owns both darts at the same vertex.
struct MultiGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  int edge_count() const { return static_cast<int>(edges.size()); }
  void add_edge(int u, int v);
  // Loops count 2 toward degree.
  int degree(int v) const;
  void validate() const;  // endpoint range check
};

int dart_vertex(const MultiGraph& g, int dart);
inline int dart_twin(int dart) { return dart ^ 1; }

// Combinatorial embedding: a cyclic ordering of incident darts per vertex.
struct RotationSystem {
  std::vector<std::vector<int>> cycles;  // cycles[v] lists v's darts
};

// Throws a Precondition error naming the offending vertex.
void validate_rotation(const MultiGraph& g, const RotationSystem& rot);

struct FaceTrace {
  std::vector<int> component_of_vertex;
  int component_count = 0;
  std::vector<int> faces_per_component;  // dartless components count 1 face
  std::vector<int> genus_per_component;
  bool is_planar = false;  // every component has genus 0
  int darts_visited = 0;   // equals 2|E| by construction
  // face id -> list of darts on that face walk (component-local faces)
  std::vector<std::vector<int>> faces;
};

FaceTrace trace_faces(const MultiGraph& g, const RotationSystem& rot);

MultiGraph disjoint_union(const MultiGraph& g1, const MultiGraph& g2);

// Vertex sets sorted ascending, ordered by smallest member.
std::vector<std::vector<int>> connected_components(const MultiGraph& g);

// 2-coloring valid on every component, or nullopt (loops and odd cycles).
// Deterministic: the smallest vertex of each component lands in side 0.
std::optional<std::pair<std::vector<int>, std::vector<int>>> bipartition(
    const MultiGraph& g);

// Vertex (h, b) maps to index h + b*n. Always bipartite.
MultiGraph double_cover(const MultiGraph& g);

// Small graph builders used across tests and the CLI corpus.
MultiGraph path_graph(int num_edges);
MultiGraph cycle_graph(int len);
MultiGraph complete_graph(int n);

// Any rotation at all (darts in incidence order); used where only a
// combinatorial embedding structure is needed, not a planar one.
RotationSystem incidence_rotation(const MultiGraph& g);

}  // namespace homkit
