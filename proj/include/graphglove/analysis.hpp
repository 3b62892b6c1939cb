#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <numeric>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "graphglove/common.hpp"
#include "graphglove/dense_embedding.hpp"
#include "graphglove/evaluation.hpp"
#include "graphglove/shortest_paths.hpp"
#include "graphglove/stochastic_graph.hpp"
#include "graphglove/vocabulary.hpp"

namespace graphglove {

// ---------------------------------------------------------------------------
// Graph induction from vector embeddings

struct InducedGraphSpec {
  enum class Mode { thr, knn };
  Mode mode = Mode::thr;
  double tau = 0.0;
  uint32_t k = 0;
};

// THR: edge iff cosine distance < tau, weight = the distance. KNN: union of
// each node's K nearest-neighbor edges. Identical vectors produce exact-zero
// weights, which PrunedGraph accepts.
inline PrunedGraph induce_graph(const DenseEmbedding& emb, const InducedGraphSpec& spec) {
  const uint32_t n = static_cast<uint32_t>(emb.size());
  if (n < 2) throw std::invalid_argument("induce_graph: need at least two words");
  CosineIndex index(emb);
  if (index.has_zero_vector()) throw numeric_error("induce_graph: zero vector in embedding");

  PrunedGraph out;
  out.n_vertices = n;
  if (spec.mode == InducedGraphSpec::Mode::thr) {
    if (!(spec.tau > 0.0)) throw std::invalid_argument("induce_graph: tau must be positive");
    for (uint32_t i = 0; i < n; ++i)
      for (uint32_t j = i + 1; j < n; ++j) {
        double d = index.dist(i, j);
        if (d < spec.tau) out.edges.push_back({i, j, d});
      }
  } else {
    if (spec.k == 0 || spec.k >= n)
      throw std::invalid_argument("induce_graph: need 1 <= K < |V|");
    std::unordered_set<uint64_t> seen;
    for (uint32_t i = 0; i < n; ++i) {
      for (uint32_t j : index.nearest(i, spec.k)) {
        uint32_t a = std::min(i, j), b = std::max(i, j);
        if (seen.insert((static_cast<uint64_t>(a) << 32) | b).second)
          out.edges.push_back({a, b, index.dist(a, b)});
      }
    }
  }
  out.canonicalize();
  out.validate();
  return out;
}

// Threshold whose THR edge count matches the KNN-induced edge count (the
// density-calibration step used when comparing the two induction modes).
inline double calibrate_tau(const DenseEmbedding& emb, uint32_t k) {
  const uint32_t n = static_cast<uint32_t>(emb.size());
  InducedGraphSpec spec;
  spec.mode = InducedGraphSpec::Mode::knn;
  spec.k = k;
  const size_t target = induce_graph(emb, spec).edges.size();

  CosineIndex index(emb);
  std::vector<double> dists;
  dists.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j = i + 1; j < n; ++j) dists.push_back(index.dist(i, j));
  if (target >= dists.size()) {
    return *std::max_element(dists.begin(), dists.end()) + 1.0;
  }
  std::nth_element(dists.begin(), dists.begin() + target, dists.end());
  double above = dists[target];  // first distance that must stay excluded
  std::nth_element(dists.begin(), dists.begin() + (target - 1), dists.begin() + target);
  double below = dists[target - 1];
  return 0.5 * (below + above);
}

// ---------------------------------------------------------------------------
// Components and centralities

inline std::vector<std::vector<uint32_t>> connected_components(const PrunedGraph& graph) {
  std::vector<std::vector<uint32_t>> comps;
  std::vector<uint8_t> seen(graph.n_vertices, 0);
  for (uint32_t s = 0; s < graph.n_vertices; ++s) {
    if (seen[s]) continue;
    std::vector<uint32_t> comp{s};
    seen[s] = 1;
    for (size_t head = 0; head < comp.size(); ++head) {
      uint32_t v = comp[head];
      for (uint32_t e : graph.adjacency[v]) {
        uint32_t u = graph.edges[e].u == v ? graph.edges[e].v : graph.edges[e].u;
        if (!seen[u]) {
          seen[u] = 1;
          comp.push_back(u);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

inline size_t largest_component(const std::vector<std::vector<uint32_t>>& comps) {
  size_t best = 0;
  for (size_t c = 1; c < comps.size(); ++c)
    if (comps[c].size() > comps[best].size()) best = c;
  return best;
}

// Frequency percentile in [0, 100]; 100 = most frequent, average-rank ties.
inline std::vector<double> frequency_percentiles(const Vocabulary& vocab) {
  std::vector<double> freq(vocab.freq.begin(), vocab.freq.end());
  auto ranks = fractional_ranks(freq);
  std::vector<double> pct(freq.size(), 100.0);
  if (freq.size() > 1)
    for (size_t i = 0; i < freq.size(); ++i)
      pct[i] = 100.0 * (ranks[i] - 1.0) / (static_cast<double>(freq.size()) - 1.0);
  return pct;
}

struct CentralityRow {
  uint32_t rank = 0;
  uint32_t word = 0;
  double score = 0.0;
  double freq_percentile = 0.0;
};

inline std::vector<CentralityRow> degree_centrality_top(const PrunedGraph& graph,
                                                        const Vocabulary& vocab, uint32_t top) {
  if (graph.n_vertices != vocab.size())
    throw std::invalid_argument("degree_centrality_top: graph must cover exactly the word nodes");
  if (top > graph.n_vertices)
    throw std::invalid_argument("degree_centrality_top: top exceeds vocabulary");
  std::vector<uint32_t> order(graph.n_vertices);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    size_t da = graph.adjacency[a].size(), db = graph.adjacency[b].size();
    if (da != db) return da > db;
    if (vocab.freq[a] != vocab.freq[b]) return vocab.freq[a] > vocab.freq[b];
    return a < b;
  });
  auto pct = frequency_percentiles(vocab);
  std::vector<CentralityRow> rows(top);
  for (uint32_t r = 0; r < top; ++r)
    rows[r] = {r + 1, order[r], static_cast<double>(graph.adjacency[order[r]].size()),
               pct[order[r]]};
  return rows;
}

// Power iteration on the binary adjacency of the largest connected component
// (other nodes score 0). Iterates with A+I, which has the same leading
// eigenvector but cannot oscillate on bipartite components.
inline std::vector<double> eigenvector_centrality(const PrunedGraph& graph, double tol,
                                                  uint32_t max_iter) {
  if (graph.n_vertices == 0) throw std::invalid_argument("eigenvector_centrality: empty graph");
  if (!(tol > 0.0)) throw std::invalid_argument("eigenvector_centrality: tol must be positive");
  auto comps = connected_components(graph);
  const auto& comp = comps[largest_component(comps)];

  std::vector<double> score(graph.n_vertices, 0.0);
  for (uint32_t v : comp) score[v] = 1.0 / std::sqrt(static_cast<double>(comp.size()));
  std::vector<double> next(graph.n_vertices, 0.0);
  double residual = kInf;
  for (uint32_t it = 0; it < max_iter; ++it) {
    for (uint32_t v : comp) {
      double s = score[v];
      for (uint32_t e : graph.adjacency[v]) {
        uint32_t u = graph.edges[e].u == v ? graph.edges[e].v : graph.edges[e].u;
        s += score[u];
      }
      next[v] = s;
    }
    double norm = 0.0;
    for (uint32_t v : comp) norm += next[v] * next[v];
    norm = std::sqrt(norm);
    residual = 0.0;
    for (uint32_t v : comp) {
      next[v] /= norm;
      residual = std::max(residual, std::fabs(next[v] - score[v]));
      score[v] = next[v];
    }
    if (residual < tol) return score;
  }
  throw numeric_error("eigenvector_centrality: no convergence after " +
                      std::to_string(max_iter) + " iterations, residual " + fmt_double(residual));
}

// ---------------------------------------------------------------------------
// k-core decomposition (peeling in ascending degree order)

struct KCoreResult {
  std::vector<uint32_t> core;       // core number per node
  uint32_t k_max = 0;
  std::vector<uint32_t> main_core;  // sorted members of the non-empty core with largest k
};

inline KCoreResult k_core(const PrunedGraph& graph) {
  const uint32_t n = graph.n_vertices;
  KCoreResult result;
  result.core.assign(n, 0);
  if (n == 0) return result;

  std::vector<uint32_t> deg(n);
  uint32_t max_deg = 0;
  for (uint32_t v = 0; v < n; ++v) {
    deg[v] = static_cast<uint32_t>(graph.adjacency[v].size());
    max_deg = std::max(max_deg, deg[v]);
  }
  std::vector<uint32_t> bin(max_deg + 2, 0);
  for (uint32_t v = 0; v < n; ++v) ++bin[deg[v]];
  uint32_t start = 0;
  for (uint32_t d = 0; d <= max_deg; ++d) {
    uint32_t count = bin[d];
    bin[d] = start;
    start += count;
  }
  std::vector<uint32_t> vert(n), pos(n);
  for (uint32_t v = 0; v < n; ++v) {
    pos[v] = bin[deg[v]];
    vert[pos[v]] = v;
    ++bin[deg[v]];
  }
  for (uint32_t d = max_deg + 1; d > 0; --d) bin[d] = bin[d - 1];
  bin[0] = 0;

  for (uint32_t idx = 0; idx < n; ++idx) {
    uint32_t v = vert[idx];
    result.core[v] = deg[v];
    for (uint32_t e : graph.adjacency[v]) {
      uint32_t u = graph.edges[e].u == v ? graph.edges[e].v : graph.edges[e].u;
      if (deg[u] > deg[v]) {
        uint32_t du = deg[u], pu = pos[u];
        uint32_t pw = bin[du], w = vert[pw];
        if (u != w) {
          pos[u] = pw;
          vert[pu] = w;
          pos[w] = pu;
          vert[pw] = u;
        }
        ++bin[du];
        --deg[u];
      }
    }
  }
  result.k_max = *std::max_element(result.core.begin(), result.core.end());
  for (uint32_t v = 0; v < n; ++v)
    if (result.core[v] == result.k_max) result.main_core.push_back(v);
  return result;
}

// ---------------------------------------------------------------------------
// Hierarchy against a taxonomy

struct Taxonomy {
  std::string root;
  std::vector<std::pair<std::string, std::string>> edges;  // child -> parent
  std::unordered_map<std::string, std::vector<std::string>> children;

  // Hop depth from the root; words not reachable from the root are absent.
  std::unordered_map<std::string, int64_t> depths() const {
    std::unordered_map<std::string, int64_t> depth;
    depth[root] = 0;
    std::deque<std::string> queue{root};
    while (!queue.empty()) {
      std::string node = std::move(queue.front());
      queue.pop_front();
      auto it = children.find(node);
      if (it == children.end()) continue;
      for (const auto& child : it->second) {
        if (depth.count(child)) continue;
        depth[child] = depth[node] + 1;
        queue.push_back(child);
      }
    }
    return depth;
  }
};

// TSV with a `#root<TAB>token` header line, then `child<TAB>parent` edges.
inline Taxonomy load_taxonomy(const std::string& path) {
  auto in = open_input(path);
  Taxonomy tax;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cols = split_char(line, '\t');
    if (cols.size() != 2)
      throw data_error(path + ":" + std::to_string(lineno) + ": expected two tab-separated fields");
    if (tax.root.empty()) {
      if (cols[0] != "#root")
        throw data_error(path + ": first line must be `#root<TAB>token`");
      tax.root = lowercase(cols[1]);
      continue;
    }
    std::string child = lowercase(cols[0]), parent = lowercase(cols[1]);
    if (child == tax.root) throw data_error(path + ": root must not have a parent");
    tax.edges.emplace_back(child, parent);
    tax.children[parent].push_back(child);
  }
  if (tax.root.empty()) throw data_error(path + ": missing `#root` header");
  return tax;
}

struct HierarchyLevels {
  std::vector<std::string> words;  // nouns present in both vocab and taxonomy
  std::vector<double> ours;        // BFS hop level in the graph
  std::vector<double> theirs;      // hop depth in the taxonomy
};

inline std::vector<int64_t> bfs_hops(const PrunedGraph& graph, uint32_t root) {
  std::vector<int64_t> hops(graph.n_vertices, -1);
  hops[root] = 0;
  std::deque<uint32_t> queue{root};
  while (!queue.empty()) {
    uint32_t v = queue.front();
    queue.pop_front();
    for (uint32_t e : graph.adjacency[v]) {
      uint32_t u = graph.edges[e].u == v ? graph.edges[e].v : graph.edges[e].u;
      if (hops[u] < 0) {
        hops[u] = hops[v] + 1;
        queue.push_back(u);
      }
    }
  }
  return hops;
}

// Our levels are unweighted BFS hop counts from the taxonomy root over the
// full graph; nouns disconnected from the root form one extra last level.
inline HierarchyLevels extract_hierarchy(const PrunedGraph& graph, const Vocabulary& vocab,
                                         const Taxonomy& taxonomy) {
  if (graph.n_vertices != vocab.size())
    throw std::invalid_argument("extract_hierarchy: graph must cover exactly the word nodes");
  int64_t root_id = vocab.id_of(taxonomy.root);
  if (root_id < 0) throw data_error("extract_hierarchy: taxonomy root `" + taxonomy.root +
                                    "` is not in the vocabulary");
  auto hops = bfs_hops(graph, static_cast<uint32_t>(root_id));
  auto tax_depth = taxonomy.depths();

  HierarchyLevels out;
  int64_t max_reachable = 0;
  for (uint32_t id = 0; id < vocab.size(); ++id) {
    auto it = tax_depth.find(vocab.tokens[id]);
    if (it == tax_depth.end()) continue;
    out.words.push_back(vocab.tokens[id]);
    out.ours.push_back(static_cast<double>(hops[id]));  // -1 placeholder for unreachable
    out.theirs.push_back(static_cast<double>(it->second));
    if (hops[id] > max_reachable) max_reachable = hops[id];
  }
  for (double& level : out.ours)
    if (level < 0) level = static_cast<double>(max_reachable + 1);
  return out;
}

struct HierarchyCorrelation {
  double word_correlation = 0.0;
  double level_correlation = 0.0;
};

// word: Spearman over the shared noun set. level: Spearman over distinct
// taxonomy levels k of (k, mean our-level of nouns at k).
inline HierarchyCorrelation hierarchy_correlations(const std::vector<double>& ours,
                                                   const std::vector<double>& theirs) {
  if (ours.size() != theirs.size())
    throw std::invalid_argument("hierarchy_correlations: length mismatch");
  if (ours.size() < 2)
    throw std::invalid_argument("hierarchy_correlations: need at least two shared nouns");
  HierarchyCorrelation out;
  out.word_correlation = spearman(ours, theirs);

  std::unordered_map<int64_t, std::pair<double, uint64_t>> by_level;
  for (size_t i = 0; i < ours.size(); ++i) {
    auto& acc = by_level[static_cast<int64_t>(theirs[i])];
    acc.first += ours[i];
    acc.second += 1;
  }
  if (by_level.size() < 2)
    throw std::invalid_argument("hierarchy_correlations: need at least two distinct levels");
  std::vector<int64_t> levels;
  for (const auto& [k, acc] : by_level) levels.push_back(k);
  std::sort(levels.begin(), levels.end());
  std::vector<double> ks, means;
  for (int64_t k : levels) {
    const auto& acc = by_level[k];
    ks.push_back(static_cast<double>(k));
    means.push_back(acc.first / static_cast<double>(acc.second));
  }
  out.level_correlation = spearman(ks, means);
  return out;
}

// ---------------------------------------------------------------------------
// Chinese Whispers clustering

struct ClusterSet {
  std::vector<uint32_t> assignment;            // node -> compact cluster id
  std::vector<std::vector<uint32_t>> clusters;  // cluster id -> sorted members
};

inline constexpr uint64_t kWhispersTag = 0x77686973706572ULL;

// Label propagation with affinity exp(-beta * weight); edge weights are
// distances, so nearer neighbors pull harder. Ties are broken by a seeded
// draw. Stops early once an iteration changes nothing.
inline ClusterSet chinese_whispers(const PrunedGraph& graph, uint32_t iterations, uint64_t seed,
                                   double affinity_beta = 1.0) {
  const uint32_t n = graph.n_vertices;
  std::vector<uint32_t> labels(n);
  std::iota(labels.begin(), labels.end(), 0);
  std::vector<double> affinity(graph.edges.size());
  for (size_t e = 0; e < graph.edges.size(); ++e)
    affinity[e] = std::exp(-affinity_beta * graph.edges[e].weight);

  std::vector<uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::unordered_map<uint32_t, double> sums;
  std::vector<std::pair<uint32_t, double>> cand;

  for (uint32_t it = 0; it < iterations; ++it) {
    Rng rng(substream(seed, kWhispersTag, it));
    rng.shuffle(order);
    bool changed = false;
    for (uint32_t v : order) {
      if (graph.adjacency[v].empty()) continue;
      sums.clear();
      for (uint32_t e : graph.adjacency[v]) {
        uint32_t u = graph.edges[e].u == v ? graph.edges[e].v : graph.edges[e].u;
        sums[labels[u]] += affinity[e];
      }
      cand.assign(sums.begin(), sums.end());
      std::sort(cand.begin(), cand.end());
      double best = -1.0;
      for (const auto& [label, s] : cand) best = std::max(best, s);
      std::vector<uint32_t> tied;
      for (const auto& [label, s] : cand)
        if (s == best) tied.push_back(label);
      uint32_t pick = tied.size() == 1 ? tied[0] : tied[rng.below(tied.size())];
      if (pick != labels[v]) {
        labels[v] = pick;
        changed = true;
      }
    }
    if (!changed) break;
  }

  ClusterSet out;
  out.assignment.resize(n);
  std::unordered_map<uint32_t, uint32_t> compact;
  for (uint32_t v = 0; v < n; ++v) {
    auto [it, fresh] = compact.emplace(labels[v], static_cast<uint32_t>(compact.size()));
    out.assignment[v] = it->second;
    if (fresh) out.clusters.emplace_back();
    out.clusters[it->second].push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gromov delta-hyperbolicity

struct GromovResult {
  double mean_delta = 0.0;
  double normalized_delta = 0.0;  // mean_delta / average sampled path length
  uint64_t quadruples = 0;
};

// Subgraph over `members` (new ids follow member order); edges kept when both
// endpoints are members.
inline PrunedGraph induced_subgraph(const PrunedGraph& graph, const std::vector<uint32_t>& members) {
  std::unordered_map<uint32_t, uint32_t> remap;
  remap.reserve(members.size());
  for (uint32_t i = 0; i < members.size(); ++i) {
    if (members[i] >= graph.n_vertices)
      throw std::invalid_argument("induced_subgraph: member id out of range");
    remap.emplace(members[i], i);
  }
  PrunedGraph sub;
  sub.n_vertices = static_cast<uint32_t>(members.size());
  for (const auto& e : graph.edges) {
    auto u = remap.find(e.u), v = remap.find(e.v);
    if (u != remap.end() && v != remap.end())
      sub.edges.push_back({u->second, v->second, e.weight});
  }
  sub.canonicalize();
  return sub;
}

// Four-point condition: of the three pairing sums, (largest - second)/2.
inline double gromov_quad_delta(double d_xy, double d_zt, double d_xz, double d_yt, double d_xt,
                                double d_yz) {
  double s1 = d_xy + d_zt, s2 = d_xz + d_yt, s3 = d_xt + d_yz;
  double hi = std::max({s1, s2, s3});
  double lo = std::min({s1, s2, s3});
  double mid = s1 + s2 + s3 - hi - lo;
  return 0.5 * (hi - mid);
}

inline constexpr uint64_t kGromovTag = 0x67726f6d6f763031ULL;

// Operates on the largest connected component. Components of up to 12 nodes
// are enumerated exhaustively; larger ones draw seeded quadruples. The
// normalizer averages path lengths over exactly the pairs that entered deltas.
inline GromovResult gromov_delta(const PrunedGraph& graph, uint64_t samples, uint64_t seed) {
  auto comps = connected_components(graph);
  const auto& comp = comps[largest_component(comps)];
  const size_t m = comp.size();
  if (m < 4) throw std::invalid_argument("gromov_delta: component smaller than four nodes");
  Csr csr = csr_from(graph);

  GromovResult out;
  double delta_sum = 0.0, dist_sum = 0.0;
  uint64_t dist_count = 0;

  auto all_pairs = [&]() {
    std::vector<std::vector<double>> d(m, std::vector<double>(m, 0.0));
    for (size_t i = 0; i < m; ++i) {
      auto sp = dijkstra(csr, comp[i]);
      for (size_t j = 0; j < m; ++j) d[i][j] = sp.dist[comp[j]];
    }
    return d;
  };

  if (m <= 12) {
    auto d = all_pairs();
    for (size_t x = 0; x < m; ++x)
      for (size_t y = x + 1; y < m; ++y)
        for (size_t z = y + 1; z < m; ++z)
          for (size_t t = z + 1; t < m; ++t) {
            delta_sum += gromov_quad_delta(d[x][y], d[z][t], d[x][z], d[y][t], d[x][t], d[y][z]);
            ++out.quadruples;
          }
    for (size_t i = 0; i < m; ++i)
      for (size_t j = i + 1; j < m; ++j) {
        dist_sum += d[i][j];
        ++dist_count;
      }
  } else {
    Rng rng(substream(seed, kGromovTag));
    std::vector<std::vector<double>> matrix;
    const bool precompute = m <= 1500;
    if (precompute) matrix = all_pairs();
    for (uint64_t q = 0; q < samples; ++q) {
      size_t idx[4];
      for (int k = 0; k < 4; ++k) {
        bool fresh;
        do {
          idx[k] = static_cast<size_t>(rng.below(m));
          fresh = true;
          for (int p = 0; p < k; ++p) fresh = fresh && idx[p] != idx[k];
        } while (!fresh);
      }
      double d6[6];
      if (precompute) {
        d6[0] = matrix[idx[0]][idx[1]];
        d6[1] = matrix[idx[2]][idx[3]];
        d6[2] = matrix[idx[0]][idx[2]];
        d6[3] = matrix[idx[1]][idx[3]];
        d6[4] = matrix[idx[0]][idx[3]];
        d6[5] = matrix[idx[1]][idx[2]];
      } else {
        std::vector<uint32_t> targets = {comp[idx[1]], comp[idx[2]], comp[idx[3]]};
        auto sp_x = dijkstra(csr, comp[idx[0]], targets);
        auto sp_y = dijkstra(csr, comp[idx[1]], {comp[idx[2]], comp[idx[3]]});
        auto sp_z = dijkstra(csr, comp[idx[2]], {comp[idx[3]]});
        d6[0] = sp_x.dist[comp[idx[1]]];
        d6[1] = sp_z.dist[comp[idx[3]]];
        d6[2] = sp_x.dist[comp[idx[2]]];
        d6[3] = sp_y.dist[comp[idx[3]]];
        d6[4] = sp_x.dist[comp[idx[3]]];
        d6[5] = sp_y.dist[comp[idx[2]]];
      }
      delta_sum += gromov_quad_delta(d6[0], d6[1], d6[2], d6[3], d6[4], d6[5]);
      ++out.quadruples;
      for (double d : d6) dist_sum += d;
      dist_count += 6;
    }
  }

  out.mean_delta = delta_sum / static_cast<double>(out.quadruples);
  double avg_dist = dist_sum / static_cast<double>(dist_count);
  out.normalized_delta = avg_dist > 0.0 ? out.mean_delta / avg_dist : 0.0;
  return out;
}

}  // namespace graphglove
