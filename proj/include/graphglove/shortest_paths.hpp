#pragma once

#include <algorithm>
#include <cstdint>
#include <queue>
#include <vector>

#include "graphglove/common.hpp"
#include "graphglove/stochastic_graph.hpp"

namespace graphglove {

// Flattened adjacency for query-time traversal. `eid` keeps the edge index of
// the source graph so gradients can be attributed to parameters.
struct Csr {
  uint32_t n = 0;
  std::vector<uint32_t> offset;  // n + 1
  std::vector<uint32_t> nbr;
  std::vector<double> wt;
  std::vector<uint32_t> eid;

  template <class EdgeRange, class WeightFn, class KeepFn>
  void build(uint32_t n_vertices, const EdgeRange& edges, WeightFn&& weight_of, KeepFn&& keep) {
    n = n_vertices;
    offset.assign(n + 1, 0);
    size_t kept = 0;
    for (uint32_t e = 0; e < edges.size(); ++e) {
      if (!keep(e)) continue;
      ++offset[edges[e].u + 1];
      ++offset[edges[e].v + 1];
      ++kept;
    }
    for (uint32_t v = 0; v < n; ++v) offset[v + 1] += offset[v];
    nbr.resize(2 * kept);
    wt.resize(2 * kept);
    eid.resize(2 * kept);
    std::vector<uint32_t> cursor(offset.begin(), offset.end() - 1);
    for (uint32_t e = 0; e < edges.size(); ++e) {
      if (!keep(e)) continue;
      double w = weight_of(e);
      uint32_t a = edges[e].u, b = edges[e].v;
      nbr[cursor[a]] = b;
      wt[cursor[a]] = w;
      eid[cursor[a]++] = e;
      nbr[cursor[b]] = a;
      wt[cursor[b]] = w;
      eid[cursor[b]++] = e;
    }
  }
};

inline Csr csr_from(const PrunedGraph& graph) {
  Csr csr;
  csr.build(
      graph.n_vertices, graph.edges, [&](uint32_t e) { return graph.edges[e].weight; },
      [](uint32_t) { return true; });
  return csr;
}

inline Csr csr_from(const StochasticGraph& graph, const EdgeMask& mask) {
  if (mask.present.size() != graph.edges.size())
    throw std::invalid_argument("csr_from: mask length mismatch");
  Csr csr;
  csr.build(
      graph.n_vertices, graph.edges, [&](uint32_t e) { return graph.weight(e); },
      [&](uint32_t e) { return mask.present[e] != 0; });
  return csr;
}

inline Csr csr_from(const StochasticGraph& graph) {
  Csr csr;
  csr.build(
      graph.n_vertices, graph.edges, [&](uint32_t e) { return graph.weight(e); },
      [](uint32_t) { return true; });
  return csr;
}

struct ShortestPaths {
  std::vector<double> dist;          // +inf when unreached
  std::vector<int64_t> parent_edge;  // edge id entering the vertex, -1 at source/unreached
  std::vector<int64_t> parent;       // predecessor vertex, -1 at source/unreached
  std::vector<uint32_t> settled;     // vertices in settle order
};

// Binary-heap Dijkstra with lazy deletion. When `targets` is non-empty the
// search stops as soon as every requested target is settled.
inline ShortestPaths dijkstra(const Csr& g, uint32_t source,
                              const std::vector<uint32_t>& targets = {}) {
  if (source >= g.n) throw std::invalid_argument("dijkstra: source out of range");
  ShortestPaths sp;
  sp.dist.assign(g.n, kInf);
  sp.parent_edge.assign(g.n, -1);
  sp.parent.assign(g.n, -1);

  std::vector<uint8_t> is_target;
  size_t pending = 0;
  if (!targets.empty()) {
    is_target.assign(g.n, 0);
    for (uint32_t t : targets) {
      if (t >= g.n) throw std::invalid_argument("dijkstra: target out of range");
      if (!is_target[t]) {
        is_target[t] = 1;
        ++pending;
      }
    }
  }

  using Item = std::pair<double, uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  sp.dist[source] = 0.0;
  heap.push({0.0, source});
  std::vector<uint8_t> done(g.n, 0);

  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (done[u]) continue;
    done[u] = 1;
    sp.settled.push_back(u);
    if (!is_target.empty() && is_target[u] && --pending == 0) break;
    for (uint32_t k = g.offset[u]; k < g.offset[u + 1]; ++k) {
      uint32_t v = g.nbr[k];
      double nd = d + g.wt[k];
      if (nd < sp.dist[v]) {
        sp.dist[v] = nd;
        sp.parent[v] = u;
        sp.parent_edge[v] = g.eid[k];
        heap.push({nd, v});
      }
    }
  }
  return sp;
}

// Edge ids along the recovered shortest path to `target` (target-to-source
// order); empty when the target is the source or unreachable.
inline std::vector<uint32_t> path_edges(const ShortestPaths& sp, uint32_t target) {
  std::vector<uint32_t> out;
  if (target >= sp.dist.size() || sp.dist[target] == kInf) return out;
  int64_t v = target;
  while (sp.parent[v] >= 0) {
    out.push_back(static_cast<uint32_t>(sp.parent_edge[v]));
    v = sp.parent[v];
  }
  return out;
}

// Eq.-8-style dot product anchored at the zero node:
// <i,j> = (d(i,0)^2 + d(j,0)^2 - d(i,j)^2) / 2.
// The zero node itself is a legal argument: <0, v> = 0 by construction.
inline double graph_dot(const Csr& g, uint32_t zero_node, uint32_t i, uint32_t j) {
  if (i > zero_node || j > zero_node)
    throw std::invalid_argument("graph_dot: vertex id out of range");
  auto from_i = dijkstra(g, i, {j, zero_node});
  double di0 = from_i.dist[zero_node];
  if (di0 == kInf) throw numeric_error("graph_dot: zero node unreachable from first argument");
  double dj0;
  if (i == j) {
    dj0 = di0;
  } else {
    auto from_j = dijkstra(g, j, {zero_node});
    dj0 = from_j.dist[zero_node];
    if (dj0 == kInf) throw numeric_error("graph_dot: zero node unreachable from second argument");
  }
  double dij = from_i.dist[j];
  return 0.5 * (di0 * di0 + dj0 * dj0 - dij * dij);
}

inline double graph_dot(const PrunedGraph& graph, uint32_t i, uint32_t j) {
  Csr csr = csr_from(graph);
  return graph_dot(csr, graph.n_vertices - 1, i, j);
}

}  // namespace graphglove
