#include "homkit/gadgets.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "homkit/errors.hpp"

namespace homkit {

namespace {

EdgeGadget finish(EdgeGadget k) {
  certify_planar(k);
  return k;
}

}  // namespace

bool certify_planar(EdgeGadget& k) {
  k.planar_certified = false;
  if (!k.rotation) return false;
  FaceTrace ft = trace_faces(k.graph, *k.rotation);
  if (!ft.is_planar) return false;
  int c1 = ft.component_of_vertex[k.l1];
  int c2 = ft.component_of_vertex[k.l2];
  bool ok = true;
  if (c1 == c2 && k.graph.degree(k.l1) > 0 && k.graph.degree(k.l2) > 0) {
    ok = false;
    for (const auto& face : ft.faces) {
      bool has1 = false, has2 = false;
      for (int d : face) {
        int v = dart_vertex(k.graph, d);
        if (v == k.l1) has1 = true;
        if (v == k.l2) has2 = true;
      }
      if (has1 && has2) {
        ok = true;
        break;
      }
    }
  }
  k.planar_certified = ok;
  return ok;
}

EdgeGadget thicken(int n) {
  if (n < 1) throw_precondition("thicken: n >= 1 required");
  EdgeGadget k;
  k.graph.n = 2;
  for (int e = 0; e < n; ++e) k.graph.edges.emplace_back(0, 1);
  k.l1 = 0;
  k.l2 = 1;
  RotationSystem rot;
  rot.cycles.resize(2);
  for (int e = n - 1; e >= 0; --e) rot.cycles[0].push_back(2 * e);
  for (int e = 0; e < n; ++e) rot.cycles[1].push_back(2 * e + 1);
  k.rotation = std::move(rot);
  return finish(std::move(k));
}

EdgeGadget stretch(int n) {
  if (n < 1) throw_precondition("stretch: n >= 1 required");
  EdgeGadget k;
  k.graph.n = n + 1;
  for (int e = 0; e < n; ++e) k.graph.edges.emplace_back(e, e + 1);
  k.l1 = 0;
  k.l2 = n;
  RotationSystem rot;
  rot.cycles.resize(n + 1);
  rot.cycles[0] = {0};
  for (int v = 1; v < n; ++v) rot.cycles[v] = {2 * (v - 1) + 1, 2 * v};
  rot.cycles[n] = {2 * (n - 1) + 1};
  k.rotation = std::move(rot);
  return finish(std::move(k));
}

EdgeGadget bridge(int n) {
  if (n < 1) throw_precondition("bridge: n >= 1 required");
  EdgeGadget k;
  k.graph.n = 4;
  k.l1 = 0;
  k.l2 = 3;
  k.graph.edges.emplace_back(0, 1);                            // e0
  for (int e = 0; e < n; ++e) k.graph.edges.emplace_back(1, 2);  // e1..en
  k.graph.edges.emplace_back(2, 3);  // e_{n+1}
  RotationSystem rot;
  rot.cycles.resize(4);
  rot.cycles[0] = {0};
  rot.cycles[1].push_back(1);
  for (int e = n; e >= 1; --e) rot.cycles[1].push_back(2 * e);
  rot.cycles[2].push_back(2 * (n + 1));
  for (int e = 1; e <= n; ++e) rot.cycles[2].push_back(2 * e + 1);
  rot.cycles[3] = {2 * (n + 1) + 1};
  k.rotation = std::move(rot);
  return finish(std::move(k));
}

EdgeGadget loop_gadget(int n) {
  if (n < 1) throw_precondition("loop gadget: n >= 1 required");
  EdgeGadget k;
  k.graph.n = 2;
  k.l1 = 0;
  k.l2 = 1;
  k.graph.edges.emplace_back(0, 1);  // e0
  for (int e = 0; e < n; ++e) k.graph.edges.emplace_back(0, 0);
  for (int e = 0; e < n; ++e) k.graph.edges.emplace_back(1, 1);
  RotationSystem rot;
  rot.cycles.resize(2);
  rot.cycles[0].push_back(0);
  for (int e = 1; e <= n; ++e) {
    rot.cycles[0].push_back(2 * e);
    rot.cycles[0].push_back(2 * e + 1);
  }
  rot.cycles[1].push_back(1);
  for (int e = n + 1; e <= 2 * n; ++e) {
    rot.cycles[1].push_back(2 * e);
    rot.cycles[1].push_back(2 * e + 1);
  }
  k.rotation = std::move(rot);
  return finish(std::move(k));
}

EdgeGadget single_edge() { return thicken(1); }

EdgeGadget trivial_binary() {
  EdgeGadget k;
  k.graph.n = 1;
  k.l1 = k.l2 = 0;
  RotationSystem rot;
  rot.cycles.resize(1);
  k.rotation = std::move(rot);
  return finish(std::move(k));
}

RatMatrix signature_serial(const EdgeGadget& k, const WeightMatrix& m,
                           const EvalOptions& opt) {
  k.graph.validate();
  int q = m.q();
  const MultiGraph& g = k.graph;
  std::vector<int> free_vertices;
  for (int v = 0; v < g.n; ++v)
    if (v != k.l1 && v != k.l2) free_vertices.push_back(v);

  Int cells = (k.l1 == k.l2) ? Int(q) : Int(q) * Int(q);
  Int cost = cells * int_pow(Int(q), free_vertices.size()) *
             Int(std::max(1, g.edge_count()));
  if (cost > opt.max_ops)
    throw_budget("signature enumeration budget exceeded: " + cost.get_str());

  RatMatrix sig(q, q);
  std::vector<int> sigma(g.n, 0);
  Rat p;
  for (int i = 0; i < q; ++i) {
    for (int j = 0; j < q; ++j) {
      if (k.l1 == k.l2 && i != j) continue;
      opt.check_deadline();
      sigma.assign(g.n, 0);
      sigma[k.l1] = i;
      sigma[k.l2] = j;
      Rat sum(0);
      unsigned long long total = 1;
      for (size_t t = 0; t < free_vertices.size(); ++t) total *= q;
      for (unsigned long long it = 0; it < total; ++it) {
        p = 1;
        for (const auto& [a, b] : g.edges) {
          const Rat& w = m.at(sigma[a], sigma[b]);
          if (w == 0) {
            p = 0;
            break;
          }
          p *= w;
        }
        sum += p;
        for (int fv : free_vertices) {
          if (++sigma[fv] < q) break;
          sigma[fv] = 0;
        }
      }
      sig.at(i, j) = sum;
    }
  }
  return sig;
}

RatMatrix signature(const EdgeGadget& k, const WeightMatrix& m,
                    const EvalOptions& opt) {
#ifndef _OPENMP
  return signature_serial(k, m, opt);
#else
  k.graph.validate();
  int q = m.q();
  const MultiGraph& g = k.graph;
  std::vector<int> free_vertices;
  for (int v = 0; v < g.n; ++v)
    if (v != k.l1 && v != k.l2) free_vertices.push_back(v);

  Int cells = (k.l1 == k.l2) ? Int(q) : Int(q) * Int(q);
  Int cost = cells * int_pow(Int(q), free_vertices.size()) *
             Int(std::max(1, g.edge_count()));
  if (cost > opt.max_ops)
    throw_budget("signature enumeration budget exceeded: " + cost.get_str());

  RatMatrix sig(q, q);
  bool timed_out = false;
#pragma omp parallel for collapse(2) schedule(dynamic, 1)
  for (int i = 0; i < q; ++i) {
    for (int j = 0; j < q; ++j) {
      if (k.l1 == k.l2 && i != j) continue;
      if (opt.deadline && std::chrono::steady_clock::now() > *opt.deadline) {
#pragma omp atomic write
        timed_out = true;
        continue;
      }
      std::vector<int> sigma(g.n, 0);
      sigma[k.l1] = i;
      sigma[k.l2] = j;
      Rat sum(0), p;
      unsigned long long total = 1;
      for (size_t t = 0; t < free_vertices.size(); ++t) total *= q;
      for (unsigned long long it = 0; it < total; ++it) {
        p = 1;
        for (const auto& [a, b] : g.edges) {
          const Rat& w = m.at(sigma[a], sigma[b]);
          if (w == 0) {
            p = 0;
            break;
          }
          p *= w;
        }
        sum += p;
        for (int fv : free_vertices) {
          if (++sigma[fv] < q) break;
          sigma[fv] = 0;
        }
      }
      sig.at(i, j) = std::move(sum);
    }
  }
  if (timed_out) throw_budget("wall-clock budget exhausted");
  return sig;
#endif
}

namespace {

// Disjoint union of two gadget graphs followed by vertex identifications.
// merge_order lists, per output merged vertex, the source vertices whose
// rotation fans concatenate (in order) to form the merged fan.
struct TwoPartMerge {
  const EdgeGadget& a;
  const EdgeGadget& b;
  // pairs (side, vertex): side 0 = a, side 1 = b
  using Src = std::pair<int, int>;
  std::vector<std::vector<Src>> merge_groups;

  MultiGraph graph;
  std::optional<RotationSystem> rotation;
  std::vector<int> map_a, map_b;  // source vertex -> output vertex

  TwoPartMerge(const EdgeGadget& a_, const EdgeGadget& b_,
               std::vector<std::vector<Src>> groups)
      : a(a_), b(b_), merge_groups(std::move(groups)) {
    int na = a.graph.n, nb = b.graph.n;
    std::vector<int> group_of_a(na, -1), group_of_b(nb, -1);
    for (size_t gi = 0; gi < merge_groups.size(); ++gi)
      for (auto [side, v] : merge_groups[gi])
        (side == 0 ? group_of_a : group_of_b)[v] = static_cast<int>(gi);

    map_a.assign(na, -1);
    map_b.assign(nb, -1);
    std::vector<int> group_out(merge_groups.size(), -1);
    int next = 0;
    auto assign = [&](int side, int v) {
      int gi = (side == 0 ? group_of_a : group_of_b)[v];
      int& slot = (side == 0 ? map_a : map_b)[v];
      if (gi >= 0) {
        if (group_out[gi] < 0) group_out[gi] = next++;
        slot = group_out[gi];
      } else {
        slot = next++;
      }
    };
    for (int v = 0; v < na; ++v) assign(0, v);
    for (int v = 0; v < nb; ++v) assign(1, v);

    graph.n = next;
    for (const auto& [u, v] : a.graph.edges)
      graph.edges.emplace_back(map_a[u], map_a[v]);
    for (const auto& [u, v] : b.graph.edges)
      graph.edges.emplace_back(map_b[u], map_b[v]);

    if (a.rotation && b.rotation) {
      int dart_off = 2 * a.graph.edge_count();
      RotationSystem rot;
      rot.cycles.resize(graph.n);
      auto fan_of = [&](int side, int v) {
        const auto& cyc = (side == 0 ? a.rotation : b.rotation)->cycles[v];
        std::vector<int> out;
        for (int d : cyc) out.push_back(side == 0 ? d : d + dart_off);
        return out;
      };
      std::vector<char> done_a(na, 0), done_b(nb, 0);
      for (size_t gi = 0; gi < merge_groups.size(); ++gi) {
        int out_v = -1;
        std::vector<int> fan;
        for (auto [side, v] : merge_groups[gi]) {
          auto& done = side == 0 ? done_a : done_b;
          if (done[v]) continue;  // a source may appear once per group list
          done[v] = 1;
          out_v = (side == 0 ? map_a : map_b)[v];
          auto f = fan_of(side, v);
          fan.insert(fan.end(), f.begin(), f.end());
        }
        if (out_v >= 0) rot.cycles[out_v] = std::move(fan);
      }
      for (int v = 0; v < na; ++v)
        if (!done_a[v]) rot.cycles[map_a[v]] = fan_of(0, v);
      for (int v = 0; v < nb; ++v)
        if (!done_b[v]) rot.cycles[map_b[v]] = fan_of(1, v);
      rotation = std::move(rot);
    }
  }
};

}  // namespace

EdgeGadget compose_series(const EdgeGadget& k1, const EdgeGadget& k2) {
  // glue k1.l2 with k2.l1; fans concatenate in that order
  TwoPartMerge merge(k1, k2, {{{0, k1.l2}, {1, k2.l1}}});
  EdgeGadget out;
  out.graph = std::move(merge.graph);
  out.rotation = std::move(merge.rotation);
  out.l1 = merge.map_a[k1.l1];
  out.l2 = merge.map_b[k2.l2];
  return finish(std::move(out));
}

EdgeGadget compose_parallel(const EdgeGadget& k1, const EdgeGadget& k2) {
  using Src = std::pair<int, int>;
  std::vector<std::vector<Src>> groups;
  bool single = (k1.l1 == k1.l2) || (k2.l1 == k2.l2);
  if (single) {
    // identifications cascade into one merged vertex
    groups.push_back({Src{1, k2.l1}, Src{0, k1.l1}, Src{0, k1.l2}, Src{1, k2.l2}});
  } else {
    groups.push_back({Src{1, k2.l1}, Src{0, k1.l1}});
    groups.push_back({Src{0, k1.l2}, Src{1, k2.l2}});
  }
  TwoPartMerge merge(k1, k2, groups);
  EdgeGadget out;
  out.graph = std::move(merge.graph);
  out.rotation = std::move(merge.rotation);
  out.l1 = merge.map_a[k1.l1];
  out.l2 = merge.map_a[k1.l2];
  return finish(std::move(out));
}

EdgeGadget series(const EdgeGadget& k1, const EdgeGadget& k2) {
  if (k1.l1 == k1.l2 || k2.l1 == k2.l2)
    throw_precondition("series: labels must be distinct in both inputs");
  return compose_series(k1, k2);
}

EdgeGadget parallel(const EdgeGadget& k1, const EdgeGadget& k2) {
  if (k1.l1 == k1.l2 || k2.l1 == k2.l2)
    throw_precondition("parallel: labels must be distinct in both inputs");
  return compose_parallel(k1, k2);
}

EdgeGadget symmetrize(const EdgeGadget& k) {
  if (k.l1 == k.l2)
    throw_precondition("symmetrize: labels must be distinct");
  using Src = std::pair<int, int>;
  // copy2's l2 merges into the new l1, copy2's l1 into the new l2
  TwoPartMerge merge(k, k,
                     {{Src{1, k.l2}, Src{0, k.l1}}, {Src{0, k.l2}, Src{1, k.l1}}});
  EdgeGadget out;
  out.graph = std::move(merge.graph);
  out.rotation = std::move(merge.rotation);
  out.l1 = merge.map_a[k.l1];
  out.l2 = merge.map_a[k.l2];
  return finish(std::move(out));
}

EdgeGadget diag_square(const EdgeGadget& k) {
  if (k.l1 != k.l2)
    throw_precondition("diag_square: labels must coincide");
  TwoPartMerge merge(k, k, {});
  EdgeGadget out;
  out.graph = std::move(merge.graph);
  out.rotation = std::move(merge.rotation);
  out.l1 = merge.map_a[k.l1];
  out.l2 = merge.map_b[k.l2];
  return finish(std::move(out));
}

EdgeGadget loop_dress(const EdgeGadget& k) {
  EdgeGadget out = k;
  auto add_loop = [&](int v) {
    int e = out.graph.edge_count();
    out.graph.edges.emplace_back(v, v);
    if (out.rotation) {
      out.rotation->cycles[v].push_back(2 * e);
      out.rotation->cycles[v].push_back(2 * e + 1);
    }
  };
  add_loop(out.l1);
  add_loop(out.l2);
  return finish(std::move(out));
}

EmbeddedGraph replace_edges(const EmbeddedGraph& g, const EdgeGadget& k) {
  g.graph.validate();
  k.graph.validate();
  if (k.l1 == k.l2)
    throw_precondition(
        "replace_edges: gadget labels coincide; edge replacement undefined");

  int nk = k.graph.n;
  std::vector<int> interior;  // gadget vertices other than the labels
  for (int v = 0; v < nk; ++v)
    if (v != k.l1 && v != k.l2) interior.push_back(v);
  int per_copy = static_cast<int>(interior.size());

  EmbeddedGraph out;
  out.graph.n = g.graph.n + g.graph.edge_count() * per_copy;

  int ne_g = g.graph.edge_count();
  int ne_k = k.graph.edge_count();
  // vertex map for copy e: label -> endpoint, interior -> block after g's
  auto vmap = [&](int e, int kv) -> int {
    auto [u, v] = g.graph.edges[e];
    if (kv == k.l1) return u;
    if (kv == k.l2) return v;
    int idx = static_cast<int>(std::lower_bound(interior.begin(), interior.end(),
                                                kv) -
                               interior.begin());
    return g.graph.n + e * per_copy + idx;
  };
  for (int e = 0; e < ne_g; ++e)
    for (const auto& [a, b] : k.graph.edges)
      out.graph.edges.emplace_back(vmap(e, a), vmap(e, b));

  if (g.rotation && k.rotation) {
    RotationSystem rot;
    rot.cycles.resize(out.graph.n);
    auto copy_dart = [&](int e, int kd) { return 2 * (e * ne_k) + kd; };
    // fans presented by copy e at its two label vertices
    auto label_fan = [&](int e, int label) {
      std::vector<int> fan;
      for (int d : k.rotation->cycles[label]) fan.push_back(copy_dart(e, d));
      return fan;
    };
    for (int v = 0; v < g.graph.n; ++v) {
      for (int d : g.rotation->cycles[v]) {
        int e = d / 2;
        int label = (d & 1) ? k.l2 : k.l1;
        auto fan = label_fan(e, label);
        rot.cycles[v].insert(rot.cycles[v].end(), fan.begin(), fan.end());
      }
    }
    for (int e = 0; e < ne_g; ++e)
      for (int kv : interior) {
        std::vector<int> cyc;
        for (int d : k.rotation->cycles[kv]) cyc.push_back(copy_dart(e, d));
        rot.cycles[vmap(e, kv)] = std::move(cyc);
      }
    out.rotation = std::move(rot);
  }
  return out;
}

EmbeddedGraph ring_transform(const EmbeddedGraph& g, int m, int n) {
  if (m < 1 || n < 1) throw_precondition("ring_transform: m, n >= 1 required");
  if (!g.rotation)
    throw_precondition("ring_transform: a rotation system is required");
  g.graph.validate();
  validate_rotation(g.graph, *g.rotation);

  const MultiGraph& G = g.graph;
  int ne = G.edge_count();

  EmbeddedGraph out;
  // ring vertex for each dart position; isolated vertices carry over
  std::vector<std::vector<int>> ring(G.n);       // v -> ring vertex ids
  std::vector<int> ring_of_dart(2 * ne, -1);     // dart -> ring vertex id
  for (int v = 0; v < G.n; ++v) {
    int deg = static_cast<int>(g.rotation->cycles[v].size());
    if (deg == 0) {
      ring[v] = {out.graph.n++};
      continue;
    }
    for (int t = 0; t < deg; ++t) {
      int rv = out.graph.n++;
      ring[v].push_back(rv);
      ring_of_dart[g.rotation->cycles[v][t]] = rv;
    }
  }

  const int ring_count = out.graph.n;
  RotationSystem rot;
  // original edges keep their ids 0..ne-1, reattached to ring vertices
  for (int e = 0; e < ne; ++e)
    out.graph.edges.emplace_back(ring_of_dart[2 * e], ring_of_dart[2 * e + 1]);

  // Fans collected per ring vertex: [external, toward-next..., from-prev...].
  std::vector<std::vector<int>> fan_external(ring_count), fan_next(ring_count),
      fan_prev(ring_count);
  for (int e = 0; e < ne; ++e) {
    fan_external[ring_of_dart[2 * e]].push_back(2 * e);
    fan_external[ring_of_dart[2 * e + 1]].push_back(2 * e + 1);
  }

  // interior path vertices get their cycles immediately
  std::vector<std::vector<int>> interior_cycles;
  auto add_bundle = [&](int a, int b) {
    // n parallel edges between a and b; returns (first edge id)
    int first = out.graph.edge_count();
    for (int t = 0; t < n; ++t) out.graph.edges.emplace_back(a, b);
    return first;
  };
  auto bundle_start_fan = [&](int first) {  // at the first endpoint
    std::vector<int> fan;
    for (int t = n - 1; t >= 0; --t) fan.push_back(2 * (first + t));
    return fan;
  };
  auto bundle_end_fan = [&](int first) {  // at the second endpoint
    std::vector<int> fan;
    for (int t = 0; t < n; ++t) fan.push_back(2 * (first + t) + 1);
    return fan;
  };

  std::vector<std::vector<int>> mid_cycles;  // collected for new vertices
  std::vector<int> mid_vertex_ids;
  auto ring_path = [&](int a, int b) {
    // path of m segments from ring vertex a to ring vertex b, each segment an
    // n-bundle; appends to fan_next[a] and fan_prev[b]
    int prev = a;
    int prev_first = -1;
    for (int s = 0; s < m; ++s) {
      int cur = (s + 1 == m) ? b : out.graph.n++;
      int first = add_bundle(prev, cur);
      if (s == 0) {
        auto f = bundle_start_fan(first);
        fan_next[a].insert(fan_next[a].end(), f.begin(), f.end());
      } else {
        // interior vertex: arrivals then departures
        std::vector<int> cyc = bundle_end_fan(prev_first);
        auto dep = bundle_start_fan(first);
        cyc.insert(cyc.end(), dep.begin(), dep.end());
        mid_cycles.push_back(std::move(cyc));
        mid_vertex_ids.push_back(prev);
      }
      if (s + 1 == m) {
        auto f = bundle_end_fan(first);
        fan_prev[b].insert(fan_prev[b].end(), f.begin(), f.end());
      }
      prev_first = first;
      prev = cur;
    }
  };

  for (int v = 0; v < G.n; ++v) {
    int deg = static_cast<int>(ring[v].size());
    if (G.degree(v) == 0) continue;
    for (int t = 0; t < deg; ++t) ring_path(ring[v][t], ring[v][(t + 1) % deg]);
  }

  rot.cycles.resize(out.graph.n);
  for (int rv = 0; rv < ring_count; ++rv) {
    auto& cyc = rot.cycles[rv];
    cyc.insert(cyc.end(), fan_external[rv].begin(), fan_external[rv].end());
    cyc.insert(cyc.end(), fan_next[rv].begin(), fan_next[rv].end());
    cyc.insert(cyc.end(), fan_prev[rv].begin(), fan_prev[rv].end());
  }
  for (size_t i = 0; i < mid_cycles.size(); ++i)
    rot.cycles[mid_vertex_ids[i]] = std::move(mid_cycles[i]);

  out.rotation = std::move(rot);
  return out;
}

}  // namespace homkit
