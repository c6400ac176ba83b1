#include "homkit/multigraph.hpp"

#include <algorithm>
#include <numeric>

#include "homkit/errors.hpp"

namespace homkit {

void MultiGraph::add_edge(int u, int v) {
  if (u < 0 || u >= n || v < 0 || v >= n)
    throw_precondition("add_edge: endpoint out of range");
  edges.emplace_back(u, v);
}

int MultiGraph::degree(int v) const {
  int d = 0;
  for (const auto& [a, b] : edges) {
    if (a == v) ++d;
    if (b == v) ++d;
  }
  return d;
}

void MultiGraph::validate() const {
  for (const auto& [a, b] : edges)
    if (a < 0 || a >= n || b < 0 || b >= n)
      throw_precondition("multigraph: endpoint out of range");
}

int dart_vertex(const MultiGraph& g, int dart) {
  int e = dart / 2;
  return (dart & 1) ? g.edges[e].second : g.edges[e].first;
}

void validate_rotation(const MultiGraph& g, const RotationSystem& rot) {
  if (static_cast<int>(rot.cycles.size()) != g.n)
    throw_precondition("rotation: cycle count " +
                       std::to_string(rot.cycles.size()) +
                       " does not match vertex count " + std::to_string(g.n));
  int total_darts = 2 * g.edge_count();
  std::vector<int> seen(total_darts, 0);
  for (int v = 0; v < g.n; ++v) {
    if (static_cast<int>(rot.cycles[v].size()) != g.degree(v))
      throw_precondition("rotation: cycle at vertex " + std::to_string(v) +
                         " has length " +
                         std::to_string(rot.cycles[v].size()) +
                         ", degree is " + std::to_string(g.degree(v)));
    for (int d : rot.cycles[v]) {
      if (d < 0 || d >= total_darts)
        throw_precondition("rotation: dart out of range at vertex " +
                           std::to_string(v));
      if (dart_vertex(g, d) != v)
        throw_precondition("rotation: dart " + std::to_string(d) +
                           " listed at vertex " + std::to_string(v) +
                           " but belongs to vertex " +
                           std::to_string(dart_vertex(g, d)));
      if (seen[d]++)
        throw_precondition("rotation: dart " + std::to_string(d) +
                           " appears more than once (vertex " +
                           std::to_string(v) + ")");
    }
  }
  for (int d = 0; d < total_darts; ++d)
    if (!seen[d])
      throw_precondition("rotation: dart " + std::to_string(d) +
                         " missing at vertex " +
                         std::to_string(dart_vertex(g, d)));
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

FaceTrace trace_faces(const MultiGraph& g, const RotationSystem& rot) {
  validate_rotation(g, rot);
  FaceTrace out;

  UnionFind uf(g.n);
  for (const auto& [a, b] : g.edges) uf.unite(a, b);
  out.component_of_vertex.assign(g.n, -1);
  std::vector<int> root_to_comp(g.n, -1);
  for (int v = 0; v < g.n; ++v) {
    int r = uf.find(v);
    if (root_to_comp[r] < 0) root_to_comp[r] = out.component_count++;
    out.component_of_vertex[v] = root_to_comp[r];
  }

  int total_darts = 2 * g.edge_count();
  // successor of dart d inside its vertex cycle
  std::vector<int> next_at_vertex(total_darts, -1);
  for (int v = 0; v < g.n; ++v) {
    const auto& cyc = rot.cycles[v];
    for (size_t i = 0; i < cyc.size(); ++i)
      next_at_vertex[cyc[i]] = cyc[(i + 1) % cyc.size()];
  }

  out.faces_per_component.assign(out.component_count, 0);
  std::vector<char> used(total_darts, 0);
  for (int d0 = 0; d0 < total_darts; ++d0) {
    if (used[d0]) continue;
    std::vector<int> walk;
    int d = d0;
    do {
      used[d] = 1;
      walk.push_back(d);
      d = next_at_vertex[dart_twin(d)];
    } while (d != d0);
    out.darts_visited += static_cast<int>(walk.size());
    out.faces_per_component[out.component_of_vertex[dart_vertex(g, d0)]]++;
    out.faces.push_back(std::move(walk));
  }

  // A vertex with no darts still bounds one face.
  std::vector<int> vcount(out.component_count, 0), ecount(out.component_count, 0);
  std::vector<char> has_dart(out.component_count, 0);
  for (int v = 0; v < g.n; ++v) vcount[out.component_of_vertex[v]]++;
  for (const auto& [a, b] : g.edges) {
    ecount[out.component_of_vertex[a]]++;
    has_dart[out.component_of_vertex[a]] = 1;
    (void)b;
  }
  out.genus_per_component.assign(out.component_count, 0);
  out.is_planar = true;
  for (int c = 0; c < out.component_count; ++c) {
    if (!has_dart[c]) out.faces_per_component[c] = 1;
    int euler = vcount[c] - ecount[c] + out.faces_per_component[c];
    // V - E + F = 2 - 2g on a closed orientable surface
    out.genus_per_component[c] = (2 - euler) / 2;
    if (euler != 2) out.is_planar = false;
  }
  return out;
}

MultiGraph disjoint_union(const MultiGraph& g1, const MultiGraph& g2) {
  MultiGraph out;
  out.n = g1.n + g2.n;
  out.edges = g1.edges;
  out.edges.reserve(g1.edges.size() + g2.edges.size());
  for (const auto& [a, b] : g2.edges) out.edges.emplace_back(a + g1.n, b + g1.n);
  return out;
}

std::vector<std::vector<int>> connected_components(const MultiGraph& g) {
  UnionFind uf(g.n);
  for (const auto& [a, b] : g.edges) uf.unite(a, b);
  std::vector<std::vector<int>> comps;
  std::vector<int> root_to_comp(g.n, -1);
  for (int v = 0; v < g.n; ++v) {
    int r = uf.find(v);
    if (root_to_comp[r] < 0) {
      root_to_comp[r] = static_cast<int>(comps.size());
      comps.emplace_back();
    }
    comps[root_to_comp[r]].push_back(v);
  }
  return comps;
}

std::optional<std::pair<std::vector<int>, std::vector<int>>> bipartition(
    const MultiGraph& g) {
  std::vector<std::vector<std::pair<int, int>>> adj(g.n);  // (neighbor, edge)
  for (int e = 0; e < g.edge_count(); ++e) {
    auto [a, b] = g.edges[e];
    if (a == b) return std::nullopt;  // loop: odd closed walk
    adj[a].emplace_back(b, e);
    adj[b].emplace_back(a, e);
  }
  std::vector<int> color(g.n, -1);
  for (int s = 0; s < g.n; ++s) {
    if (color[s] >= 0) continue;
    color[s] = 0;
    std::vector<int> stack{s};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (auto [w, e] : adj[v]) {
        (void)e;
        if (color[w] < 0) {
          color[w] = 1 - color[v];
          stack.push_back(w);
        } else if (color[w] == color[v]) {
          return std::nullopt;  // odd cycle
        }
      }
    }
  }
  std::pair<std::vector<int>, std::vector<int>> sides;
  for (int v = 0; v < g.n; ++v)
    (color[v] == 0 ? sides.first : sides.second).push_back(v);
  return sides;
}

MultiGraph double_cover(const MultiGraph& g) {
  MultiGraph out;
  out.n = 2 * g.n;
  for (const auto& [u, v] : g.edges) {
    if (u == v) {
      out.edges.emplace_back(u, u + g.n);
    } else {
      out.edges.emplace_back(u, v + g.n);
      out.edges.emplace_back(u + g.n, v);
    }
  }
  return out;
}

MultiGraph path_graph(int num_edges) {
  MultiGraph g;
  g.n = num_edges + 1;
  for (int i = 0; i < num_edges; ++i) g.edges.emplace_back(i, i + 1);
  return g;
}

MultiGraph cycle_graph(int len) {
  MultiGraph g;
  g.n = len;
  if (len == 1) {
    g.edges.emplace_back(0, 0);
    return g;
  }
  for (int i = 0; i < len; ++i) g.edges.emplace_back(i, (i + 1) % len);
  return g;
}

MultiGraph complete_graph(int n) {
  MultiGraph g;
  g.n = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.edges.emplace_back(i, j);
  return g;
}

RotationSystem incidence_rotation(const MultiGraph& g) {
  RotationSystem rot;
  rot.cycles.assign(g.n, {});
  for (int e = 0; e < g.edge_count(); ++e) {
    rot.cycles[g.edges[e].first].push_back(2 * e);
    rot.cycles[g.edges[e].second].push_back(2 * e + 1);
  }
  return rot;
}

}  // namespace homkit
