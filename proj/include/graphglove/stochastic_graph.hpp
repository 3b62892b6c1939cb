#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "graphglove/common.hpp"

namespace graphglove {

// Undirected learnable graph over word nodes 0..|V|-1 plus a reserved zero
// node with id |V| (the last vertex). Effective weight/probability come from
// softplus/sigmoid of the stored parameters.
struct StochasticEdge {
  uint32_t u = 0, v = 0;  // u < v
  double theta_w = 0.0, theta_p = 0.0;
};

struct StochasticGraph {
  uint32_t n_vertices = 0;           // |V| + 1
  std::vector<StochasticEdge> edges;  // sorted by (u, v)
  std::vector<double> bias;           // per word node, size |V|
  std::vector<std::vector<uint32_t>> adjacency;  // vertex -> sorted incident edge ids

  uint32_t n_words() const { return n_vertices - 1; }
  uint32_t zero_node() const { return n_vertices - 1; }

  double weight(size_t e) const { return softplus(edges[e].theta_w); }
  double prob(size_t e) const { return sigmoid(edges[e].theta_p); }

  void canonicalize() {
    std::sort(edges.begin(), edges.end(), [](const StochasticEdge& a, const StochasticEdge& b) {
      return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    rebuild_adjacency();
  }

  void rebuild_adjacency() {
    adjacency.assign(n_vertices, {});
    for (uint32_t e = 0; e < edges.size(); ++e) {
      adjacency[edges[e].u].push_back(e);
      adjacency[edges[e].v].push_back(e);
    }
  }

  void validate() const {
    if (n_vertices < 2) throw data_error("stochastic graph: need at least one word node");
    if (bias.size() != n_words()) throw data_error("stochastic graph: bias size mismatch");
    for (size_t e = 0; e < edges.size(); ++e) {
      const auto& ed = edges[e];
      if (ed.u >= ed.v) throw data_error("stochastic graph: edge not canonical (u < v)");
      if (ed.v >= n_vertices) throw data_error("stochastic graph: vertex id out of range");
      if (!std::isfinite(ed.theta_w) || !std::isfinite(ed.theta_p))
        throw numeric_error("stochastic graph: nonfinite edge parameter");
      if (e > 0 && !(edges[e - 1].u < ed.u || (edges[e - 1].u == ed.u && edges[e - 1].v < ed.v)))
        throw data_error("stochastic graph: duplicate or unsorted edge");
    }
    for (double b : bias)
      if (!std::isfinite(b)) throw numeric_error("stochastic graph: nonfinite bias");
  }

  double mean_edge_prob() const {
    if (edges.empty()) return 0.0;
    double s = 0.0;
    for (size_t e = 0; e < edges.size(); ++e) s += prob(e);
    return s / static_cast<double>(edges.size());
  }

  // Edges that survive pruning at the p >= 0.5 threshold.
  uint64_t kept_edge_count() const {
    uint64_t kept = 0;
    for (size_t e = 0; e < edges.size(); ++e)
      if (prob(e) >= 0.5) ++kept;
    return kept;
  }
};

struct EdgeMask {
  std::vector<uint8_t> present;
  uint64_t seed = 0;
};

inline constexpr uint64_t kMaskTag = 0x6d61736b73616d70ULL;

inline EdgeMask sample_mask(const StochasticGraph& graph, uint64_t seed) {
  EdgeMask mask;
  mask.seed = seed;
  mask.present.resize(graph.edges.size());
  Rng rng(substream(seed, kMaskTag));
  for (size_t e = 0; e < graph.edges.size(); ++e)
    mask.present[e] = rng.bernoulli(graph.prob(e)) ? 1 : 0;
  return mask;
}

// Deterministic graph after thresholding. Weights are non-negative; graphs
// induced from embeddings may carry exact-zero weights for identical vectors.
struct PrunedEdge {
  uint32_t u = 0, v = 0;
  double weight = 0.0;
};

struct PrunedGraph {
  uint32_t n_vertices = 0;
  std::vector<PrunedEdge> edges;
  std::vector<std::vector<uint32_t>> adjacency;

  void canonicalize() {
    std::sort(edges.begin(), edges.end(), [](const PrunedEdge& a, const PrunedEdge& b) {
      return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    rebuild_adjacency();
  }

  void rebuild_adjacency() {
    adjacency.assign(n_vertices, {});
    for (uint32_t e = 0; e < edges.size(); ++e) {
      adjacency[edges[e].u].push_back(e);
      adjacency[edges[e].v].push_back(e);
    }
  }

  void validate() const {
    for (size_t e = 0; e < edges.size(); ++e) {
      const auto& ed = edges[e];
      if (ed.u >= ed.v) throw data_error("pruned graph: edge not canonical (u < v)");
      if (ed.v >= n_vertices) throw data_error("pruned graph: vertex id out of range");
      if (!(ed.weight >= 0.0) || !std::isfinite(ed.weight))
        throw numeric_error("pruned graph: negative or nonfinite weight");
      if (e > 0 && !(edges[e - 1].u < ed.u || (edges[e - 1].u == ed.u && edges[e - 1].v < ed.v)))
        throw data_error("pruned graph: duplicate or unsorted edge");
    }
  }
};

// Keeps exactly the edges with p(e) >= 0.5 ("less than 0.5 are removed").
inline PrunedGraph prune(const StochasticGraph& graph) {
  PrunedGraph out;
  out.n_vertices = graph.n_vertices;
  for (size_t e = 0; e < graph.edges.size(); ++e)
    if (graph.prob(e) >= 0.5)
      out.edges.push_back({graph.edges[e].u, graph.edges[e].v, graph.weight(e)});
  out.rebuild_adjacency();
  return out;
}

inline double parameters_per_token(const PrunedGraph& graph, uint64_t vocab_size) {
  if (vocab_size == 0) throw std::invalid_argument("parameters_per_token: vocab_size must be > 0");
  return (static_cast<double>(vocab_size) + 2.0 * static_cast<double>(graph.edges.size())) /
         static_cast<double>(vocab_size);
}

// Removes the last vertex (the zero node) and its incident edges, leaving a
// graph over word nodes only; used by evaluation and analysis.
inline PrunedGraph drop_last_vertex(const PrunedGraph& graph) {
  if (graph.n_vertices < 2) throw std::invalid_argument("drop_last_vertex: too few vertices");
  PrunedGraph out;
  out.n_vertices = graph.n_vertices - 1;
  for (const auto& e : graph.edges)
    if (e.v < out.n_vertices) out.edges.push_back(e);
  out.rebuild_adjacency();
  return out;
}

// Binary format: "GGLV1", u64 n_vertices, f64 bias[|V|], u64 n_edges,
// then per edge (u32 u, u32 v, f64 theta_w, f64 theta_p).
inline void save_graph(const std::string& path, const StochasticGraph& graph) {
  auto out = open_output(path, std::ios::binary);
  write_bytes(out, "GGLV1", 5);
  write_u64(out, graph.n_vertices);
  for (double b : graph.bias) write_f64(out, b);
  write_u64(out, graph.edges.size());
  for (const auto& e : graph.edges) {
    write_u32(out, e.u);
    write_u32(out, e.v);
    write_f64(out, e.theta_w);
    write_f64(out, e.theta_p);
  }
  if (!out) throw data_error("failed writing graph: " + path);
}

inline StochasticGraph load_graph(const std::string& path) {
  auto in = open_input(path, std::ios::binary);
  expect_magic(in, "GGLV1", "graph file");
  StochasticGraph graph;
  uint64_t nv = read_u64(in, "graph n_vertices");
  if (nv < 2 || nv > 0xffffffffULL) throw data_error(path + ": bad vertex count");
  graph.n_vertices = static_cast<uint32_t>(nv);
  graph.bias.resize(graph.n_words());
  for (auto& b : graph.bias) b = read_f64(in, "graph bias");
  uint64_t ne = read_u64(in, "graph n_edges");
  graph.edges.resize(ne);
  for (auto& e : graph.edges) {
    e.u = read_u32(in, "graph edge");
    e.v = read_u32(in, "graph edge");
    e.theta_w = read_f64(in, "graph edge");
    e.theta_p = read_f64(in, "graph edge");
  }
  if (in.peek() != std::char_traits<char>::eof())
    throw data_error(path + ": trailing bytes after edge records");
  graph.rebuild_adjacency();
  graph.validate();
  return graph;
}

// Edge-list TSV `u<TAB>v<TAB>weight` of the pruned graph, for external tooling.
inline void export_pruned_tsv(const std::string& path, const PrunedGraph& graph) {
  auto out = open_output(path);
  for (const auto& e : graph.edges)
    out << e.u << '\t' << e.v << '\t' << fmt_double(e.weight) << '\n';
  if (!out) throw data_error("failed writing edge list: " + path);
}

}  // namespace graphglove
