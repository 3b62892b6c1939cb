#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "graphglove/common.hpp"
#include "graphglove/cooccurrence.hpp"
#include "graphglove/dense_embedding.hpp"
#include "graphglove/shortest_paths.hpp"
#include "graphglove/sparse_adam.hpp"
#include "graphglove/stochastic_graph.hpp"

namespace graphglove {

enum class LossKind { distance, dot_product };

struct TrainConfig {
  LossKind loss_kind = LossKind::distance;
  double lambda = 0.0;         // L0 coefficient on mean edge probability
  uint32_t K = 64;             // nearest-neighbor edges per word
  uint32_t M = 10;             // random edges per word
  uint32_t R = 64;             // zero-node fan-out
  uint32_t b_anchors = 64;
  uint32_t n_per_anchor = 10000;
  double lr = 0.01, beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;
  double x_max = 100.0, alpha = 0.75;
  uint64_t seed = 1;
  uint64_t steps = 1;
  double target_ppt = 0.0;  // early stop once parameters-per-token drops this low; 0 = off
  uint32_t workers = 1;
  double baseline_momentum = 0.99;
  double init_p = 0.9;
  double zero_edge_weight = 1.0;
  double init_weight_lo = 0.05, init_weight_hi = 2.0;

  void validate() const {
    if (lambda < 0.0) throw std::invalid_argument("train config: lambda must be >= 0");
    if (K < 1) throw std::invalid_argument("train config: K must be >= 1");
    if (b_anchors < 1) throw std::invalid_argument("train config: b_anchors must be >= 1");
    if (n_per_anchor < 1) throw std::invalid_argument("train config: n_per_anchor must be >= 1");
    if (lr <= 0.0) throw std::invalid_argument("train config: lr must be positive");
    if (steps < 1) throw std::invalid_argument("train config: steps must be >= 1");
    if (!(init_p > 0.0 && init_p < 1.0))
      throw std::invalid_argument("train config: init_p must lie in (0,1)");
  }
};

// A sampled mini-batch: pairs grouped contiguously by anchor, anchors ascending.
// importance_weight is p_ij/q_ij from the sampling distributions; coeff is the
// per-pair loss coefficient importance_weight / (b_actual * contexts_of_anchor),
// which makes the batch loss an unbiased estimate of the mean per-pair loss.
struct BatchPair {
  uint32_t anchor = 0, context = 0;
  double x = 0.0;
  double importance_weight = 1.0;
  double coeff = 1.0;
};

struct Batch {
  std::vector<uint32_t> anchors;
  std::vector<BatchPair> pairs;
};

inline constexpr uint64_t kBatchTag = 0x62617463682d3031ULL;
inline constexpr uint64_t kInitBiasTag = 0x696e697462696173ULL;
inline constexpr uint64_t kInitRandTag = 0x696e697472616e64ULL;
inline constexpr uint64_t kInitZeroTag = 0x696e69747a65726fULL;
inline constexpr uint64_t kTrainBatchTag = 0x747261696e626174ULL;
inline constexpr uint64_t kTrainMaskTag = 0x747261696e6d736bULL;

// Edge set: K cosine-nearest neighbors plus M random words per word, plus R
// zero-node edges. Initial weights clamp(1 - cos_sim, lo, hi) through
// softplus^-1; edge probabilities start at init_p; biases ~ N(0, 0.01).
inline StochasticGraph init_graph(const DenseEmbedding& emb, const TrainConfig& cfg) {
  cfg.validate();
  const uint32_t n = static_cast<uint32_t>(emb.size());
  if (n < 2) throw std::invalid_argument("init_graph: need at least two words");
  if (cfg.K + cfg.M >= n)
    throw std::invalid_argument("init_graph: K + M must be smaller than the vocabulary");
  if (cfg.R > n) throw std::invalid_argument("init_graph: R cannot exceed the vocabulary");

  StochasticGraph graph;
  graph.n_vertices = n + 1;  // zero node last
  const double theta_p0 = logit(cfg.init_p);

  CosineIndex index(emb);
  auto key = [](uint32_t a, uint32_t b) {
    if (a > b) std::swap(a, b);
    return (static_cast<uint64_t>(a) << 32) | b;
  };
  std::unordered_set<uint64_t> seen;
  seen.reserve(static_cast<size_t>(n) * (cfg.K + cfg.M) * 2);

  auto add_word_edge = [&](uint32_t a, uint32_t b) {
    if (!seen.insert(key(a, b)).second) return;
    double w = std::clamp(1.0 - index.sim(a, b), cfg.init_weight_lo, cfg.init_weight_hi);
    graph.edges.push_back({std::min(a, b), std::max(a, b), inv_softplus(w), theta_p0});
  };

  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j : index.nearest(i, cfg.K)) add_word_edge(i, j);

  Rng rand_rng(substream(cfg.seed, kInitRandTag));
  for (uint32_t i = 0; i < n; ++i) {
    uint32_t added = 0;
    while (added < cfg.M) {
      uint32_t j = static_cast<uint32_t>(rand_rng.below(n));
      if (j == i) continue;
      add_word_edge(i, j);  // duplicates merge silently but still consume the draw
      ++added;
    }
  }

  if (cfg.R > 0) {
    Rng zero_rng(substream(cfg.seed, kInitZeroTag));
    std::vector<uint32_t> words(n);
    std::iota(words.begin(), words.end(), 0);
    zero_rng.partial_shuffle(words, cfg.R);
    const double theta_w0 = inv_softplus(cfg.zero_edge_weight);
    for (uint32_t r = 0; r < cfg.R; ++r)
      graph.edges.push_back({words[r], n, theta_w0, theta_p0});
  }

  Rng bias_rng(substream(cfg.seed, kInitBiasTag));
  graph.bias.resize(n);
  for (auto& b : graph.bias) b = bias_rng.normal(0.0, 0.1);

  graph.canonicalize();
  graph.validate();
  return graph;
}

// Anchors uniform without replacement over words with nonempty rows; contexts
// uniform without replacement within each anchor's row. importance_weight is
// (1/nnz) / ((1/|V|) * (1/row_len)).
inline Batch sample_batch(const SparseCooccurrence& cooc, const TrainConfig& cfg, uint64_t seed) {
  if (cooc.nnz_total == 0) throw data_error("sample_batch: empty cooccurrence matrix");
  Rng rng(substream(seed, kBatchTag));

  std::vector<uint32_t> candidates;
  candidates.reserve(cooc.rows.size());
  for (uint32_t i = 0; i < cooc.rows.size(); ++i)
    if (!cooc.rows[i].empty()) candidates.push_back(i);

  const size_t b_actual = std::min<size_t>(cfg.b_anchors, candidates.size());
  rng.partial_shuffle(candidates, b_actual);
  Batch batch;
  batch.anchors.assign(candidates.begin(), candidates.begin() + b_actual);
  std::sort(batch.anchors.begin(), batch.anchors.end());

  const double v_over_nnz =
      static_cast<double>(cooc.n_words) / static_cast<double>(cooc.nnz_total);
  std::vector<uint32_t> sel;
  for (uint32_t i : batch.anchors) {
    const auto& row = cooc.rows[i];
    const size_t c = std::min<size_t>(cfg.n_per_anchor, row.size());
    sel.resize(row.size());
    std::iota(sel.begin(), sel.end(), 0);
    if (c < row.size()) {
      rng.partial_shuffle(sel, c);
      std::sort(sel.begin(), sel.begin() + c);
    }
    const double iw = v_over_nnz * static_cast<double>(row.size());
    const double coeff = iw / (static_cast<double>(b_actual) * static_cast<double>(c));
    for (size_t t = 0; t < c; ++t) {
      const auto& [j, x] = row[sel[t]];
      batch.pairs.push_back({i, j, x, iw, coeff});
    }
  }
  return batch;
}

struct LossBreakdown {
  double loss = 0.0;
  uint64_t used_pairs = 0, skipped_pairs = 0;
};

namespace detail {

// Pair score S_ij: negative sampled-graph distance, or the zero-node dot product.
inline bool pair_score(LossKind kind, const ShortestPaths& sp, const ShortestPaths* zero_sp,
                       uint32_t anchor, uint32_t context, double& out) {
  if (kind == LossKind::distance) {
    double d = sp.dist[context];
    if (d == kInf) return false;
    out = -d;
    return true;
  }
  double di0 = zero_sp->dist[anchor], dj0 = zero_sp->dist[context], dij = sp.dist[context];
  if (di0 == kInf || dj0 == kInf || dij == kInf) return false;
  out = 0.5 * (di0 * di0 + dj0 * dj0 - dij * dij);
  return true;
}

struct AnchorRange {
  size_t begin = 0, end = 0;
};

inline std::vector<AnchorRange> anchor_ranges(const Batch& batch) {
  std::vector<AnchorRange> ranges;
  size_t start = 0;
  for (size_t k = 1; k <= batch.pairs.size(); ++k) {
    if (k == batch.pairs.size() || batch.pairs[k].anchor != batch.pairs[start].anchor) {
      ranges.push_back({start, k});
      start = k;
    }
  }
  return ranges;
}

inline std::vector<uint32_t> range_targets(const Batch& batch, const AnchorRange& r) {
  std::vector<uint32_t> targets;
  targets.reserve(r.end - r.begin);
  for (size_t k = r.begin; k < r.end; ++k) targets.push_back(batch.pairs[k].context);
  return targets;
}

inline std::vector<uint32_t> batch_words(const Batch& batch, uint32_t n_vertices) {
  std::vector<uint8_t> seen(n_vertices, 0);
  std::vector<uint32_t> words;
  for (const auto& p : batch.pairs) {
    if (!seen[p.anchor]) {
      seen[p.anchor] = 1;
      words.push_back(p.anchor);
    }
    if (!seen[p.context]) {
      seen[p.context] = 1;
      words.push_back(p.context);
    }
  }
  return words;
}

}  // namespace detail

// Importance-weighted GloVe loss on one sampled graph. Pairs whose required
// distances are infinite in the sample are excluded and counted.
inline LossBreakdown glove_graph_loss(const StochasticGraph& graph, const EdgeMask& mask,
                                      const Batch& batch, const TrainConfig& cfg) {
  if (batch.pairs.empty()) throw std::invalid_argument("glove_graph_loss: empty batch");
  Csr csr = csr_from(graph, mask);
  ShortestPaths zero_sp;
  if (cfg.loss_kind == LossKind::dot_product)
    zero_sp = dijkstra(csr, graph.zero_node(), detail::batch_words(batch, graph.n_vertices));

  LossBreakdown out;
  for (const auto& r : detail::anchor_ranges(batch)) {
    auto sp = dijkstra(csr, batch.pairs[r.begin].anchor, detail::range_targets(batch, r));
    for (size_t k = r.begin; k < r.end; ++k) {
      const auto& p = batch.pairs[k];
      double s;
      if (!detail::pair_score(cfg.loss_kind, sp, &zero_sp, p.anchor, p.context, s)) {
        ++out.skipped_pairs;
        continue;
      }
      double err = s + graph.bias[p.anchor] + graph.bias[p.context] - std::log(p.x);
      out.loss += p.coeff * glove_weight(p.x, cfg.x_max, cfg.alpha) * err * err;
      ++out.used_pairs;
    }
  }
  return out;
}

struct GradientSet {
  std::vector<std::pair<uint32_t, double>> theta_w;  // sorted by edge id
  std::vector<std::pair<uint32_t, double>> theta_p;
  std::vector<std::pair<uint32_t, double>> bias;     // sorted by word id
  double data_loss = 0.0;
  uint64_t used_pairs = 0, skipped_pairs = 0;
};

namespace detail {

struct AnchorGrad {
  double loss = 0.0;
  uint64_t used = 0, skipped = 0;
  std::vector<std::pair<uint32_t, double>> d_weight;  // dL/dw(e) in effective-weight space
  std::vector<std::pair<uint32_t, double>> d_bias;
  std::vector<uint32_t> settled;
};

inline AnchorGrad anchor_gradients(const StochasticGraph& graph, const Csr& csr,
                                   const Batch& batch, const AnchorRange& r,
                                   const TrainConfig& cfg, const ShortestPaths* zero_sp) {
  AnchorGrad out;
  const uint32_t anchor = batch.pairs[r.begin].anchor;
  auto sp = dijkstra(csr, anchor, range_targets(batch, r));
  for (size_t k = r.begin; k < r.end; ++k) {
    const auto& p = batch.pairs[k];
    double s;
    if (!pair_score(cfg.loss_kind, sp, zero_sp, p.anchor, p.context, s)) {
      ++out.skipped;
      continue;
    }
    double err = s + graph.bias[p.anchor] + graph.bias[p.context] - std::log(p.x);
    double fw = glove_weight(p.x, cfg.x_max, cfg.alpha);
    out.loss += p.coeff * fw * err * err;
    ++out.used;
    double g = 2.0 * p.coeff * fw * err;
    out.d_bias.emplace_back(p.anchor, g);
    out.d_bias.emplace_back(p.context, g);
    if (cfg.loss_kind == LossKind::distance) {
      for (uint32_t e : path_edges(sp, p.context)) out.d_weight.emplace_back(e, -g);
    } else {
      double di0 = zero_sp->dist[p.anchor], dj0 = zero_sp->dist[p.context];
      double dij = sp.dist[p.context];
      for (uint32_t e : path_edges(sp, p.context)) out.d_weight.emplace_back(e, -g * dij);
      for (uint32_t e : path_edges(*zero_sp, p.anchor)) out.d_weight.emplace_back(e, g * di0);
      for (uint32_t e : path_edges(*zero_sp, p.context)) out.d_weight.emplace_back(e, g * dj0);
    }
  }
  out.settled = std::move(sp.settled);
  return out;
}

}  // namespace detail

// Gradient estimate on one sampled mask. theta_w and bias gradients are
// pathwise through the recovered shortest paths; theta_p combines the analytic
// L0 term with a score-function term (loss - baseline) * dlog Pr[mask]/dtheta_p
// restricted to edges incident to any vertex settled by the batch's searches.
// Contributions are reduced in anchor order, so the result is identical for
// any worker count.
inline GradientSet estimate_gradients(const StochasticGraph& graph, const Batch& batch,
                                      const TrainConfig& cfg, const EdgeMask& mask,
                                      double baseline, bool has_baseline) {
  if (batch.pairs.empty()) throw std::invalid_argument("estimate_gradients: empty batch");
  if (mask.present.size() != graph.edges.size())
    throw std::invalid_argument("estimate_gradients: mask length mismatch");

  const size_t n_edges = graph.edges.size();
  Csr csr = csr_from(graph, mask);
  ShortestPaths zero_sp;
  if (cfg.loss_kind == LossKind::dot_product)
    zero_sp = dijkstra(csr, graph.zero_node(), detail::batch_words(batch, graph.n_vertices));

  const auto ranges = detail::anchor_ranges(batch);
  std::vector<detail::AnchorGrad> slots(ranges.size());
  const uint32_t workers = std::max(1u, cfg.workers);
  if (workers == 1 || ranges.size() <= 1) {
    for (size_t a = 0; a < ranges.size(); ++a)
      slots[a] = detail::anchor_gradients(graph, csr, batch, ranges[a], cfg, &zero_sp);
  } else {
    std::vector<std::thread> pool;
    for (uint32_t w = 0; w < std::min<size_t>(workers, ranges.size()); ++w) {
      pool.emplace_back([&, w]() {
        for (size_t a = w; a < ranges.size(); a += workers)
          slots[a] = detail::anchor_gradients(graph, csr, batch, ranges[a], cfg, &zero_sp);
      });
    }
    for (auto& th : pool) th.join();
  }

  GradientSet out;
  std::vector<double> acc_w(n_edges, 0.0), acc_b(graph.n_words(), 0.0);
  std::vector<uint8_t> touched_w(n_edges, 0), touched_b(graph.n_words(), 0),
      touched_edge(n_edges, 0);
  std::vector<uint32_t> w_ids, b_ids, edge_ids;

  auto touch_vertex = [&](uint32_t v) {
    for (uint32_t e : graph.adjacency[v]) {
      if (!touched_edge[e]) {
        touched_edge[e] = 1;
        edge_ids.push_back(e);
      }
    }
  };
  if (cfg.loss_kind == LossKind::dot_product)
    for (uint32_t v : zero_sp.settled) touch_vertex(v);

  for (const auto& slot : slots) {
    out.data_loss += slot.loss;
    out.used_pairs += slot.used;
    out.skipped_pairs += slot.skipped;
    for (const auto& [e, g] : slot.d_weight) {
      if (!touched_w[e]) {
        touched_w[e] = 1;
        w_ids.push_back(e);
      }
      acc_w[e] += g;
    }
    for (const auto& [i, g] : slot.d_bias) {
      if (!touched_b[i]) {
        touched_b[i] = 1;
        b_ids.push_back(i);
      }
      acc_b[i] += g;
    }
    for (uint32_t v : slot.settled) touch_vertex(v);
  }

  std::sort(w_ids.begin(), w_ids.end());
  std::sort(b_ids.begin(), b_ids.end());
  out.theta_w.reserve(w_ids.size());
  for (uint32_t e : w_ids)
    out.theta_w.emplace_back(e, acc_w[e] * softplus_grad(graph.edges[e].theta_w));
  out.bias.reserve(b_ids.size());
  for (uint32_t i : b_ids) out.bias.emplace_back(i, acc_b[i]);

  const double advantage = out.data_loss - (has_baseline ? baseline : out.data_loss);
  auto score_term = [&](uint32_t e) {
    double p = graph.prob(e);
    return advantage * (mask.present[e] ? (1.0 - p) : -p);
  };
  if (cfg.lambda > 0.0 && n_edges > 0) {
    const double l0_scale = cfg.lambda / static_cast<double>(n_edges);
    out.theta_p.reserve(n_edges);
    for (uint32_t e = 0; e < n_edges; ++e) {
      double p = graph.prob(e);
      double g = l0_scale * p * (1.0 - p);
      if (touched_edge[e]) g += score_term(e);
      out.theta_p.emplace_back(e, g);
    }
  } else {
    std::sort(edge_ids.begin(), edge_ids.end());
    out.theta_p.reserve(edge_ids.size());
    for (uint32_t e : edge_ids) out.theta_p.emplace_back(e, score_term(e));
  }
  return out;
}

// Convenience form sampling its own mask; no baseline history, so the
// score-function term is exactly zero and theta_p carries only the L0 part.
inline GradientSet estimate_gradients(const StochasticGraph& graph, const Batch& batch,
                                      const TrainConfig& cfg, uint64_t seed) {
  EdgeMask mask = sample_mask(graph, seed);
  return estimate_gradients(graph, batch, cfg, mask, 0.0, false);
}

struct TrainLogRow {
  uint64_t step = 0;
  double loss = 0.0;
  double mean_edge_prob = 0.0;
  uint64_t pruned_edge_count = 0;  // edges that would survive pruning now
  uint64_t skipped_pairs = 0;
};

inline const char* kTrainLogHeader = "step,loss,mean_edge_prob,pruned_edge_count,skipped_pairs";

struct TrainState {
  SparseAdam adam_w, adam_p, adam_b;
  double baseline = 0.0;
  bool has_baseline = false;
  uint64_t next_step = 0;

  void save(std::ostream& out) const {
    write_bytes(out, "ADMS1", 5);
    adam_w.save(out);
    adam_p.save(out);
    adam_b.save(out);
    write_f64(out, baseline);
    write_u64(out, has_baseline ? 1 : 0);
    write_u64(out, next_step);
  }

  void load(std::istream& in) {
    expect_magic(in, "ADMS1", "optimizer state");
    adam_w.load(in, "adam theta_w");
    adam_p.load(in, "adam theta_p");
    adam_b.load(in, "adam bias");
    baseline = read_f64(in, "baseline");
    has_baseline = read_u64(in, "baseline flag") != 0;
    next_step = read_u64(in, "step counter");
  }
};

struct TrainResult {
  StochasticGraph graph;
  std::vector<TrainLogRow> log;
};

// cfg.steps iterations of sample_batch -> sample_mask -> estimate_gradients ->
// Adam. Passing `state` resumes/continues a previous run (step numbering and
// optimizer moments carry over).
inline TrainResult train(const SparseCooccurrence& cooc, const StochasticGraph& init,
                         const TrainConfig& cfg, std::ostream* log_csv = nullptr,
                         TrainState* state = nullptr) {
  cfg.validate();
  if (cooc.n_words != init.n_words())
    throw std::invalid_argument("train: cooccurrence and graph vocabulary sizes differ");

  TrainResult result;
  result.graph = init;
  StochasticGraph& graph = result.graph;
  graph.validate();
  const size_t n_edges = graph.edges.size();
  const double n_words = graph.n_words();

  TrainState local;
  TrainState& st = state ? *state : local;
  if (st.adam_w.size() != n_edges || st.adam_p.size() != n_edges ||
      st.adam_b.size() != graph.n_words()) {
    if (st.next_step != 0) throw std::invalid_argument("train: optimizer state size mismatch");
    st.adam_w = SparseAdam(n_edges, cfg.lr, cfg.beta1, cfg.beta2, cfg.adam_eps);
    st.adam_p = SparseAdam(n_edges, cfg.lr, cfg.beta1, cfg.beta2, cfg.adam_eps);
    st.adam_b = SparseAdam(graph.n_words(), cfg.lr, cfg.beta1, cfg.beta2, cfg.adam_eps);
  }
  st.adam_w.configure(cfg.lr, cfg.beta1, cfg.beta2, cfg.adam_eps);
  st.adam_p.configure(cfg.lr, cfg.beta1, cfg.beta2, cfg.adam_eps);
  st.adam_b.configure(cfg.lr, cfg.beta1, cfg.beta2, cfg.adam_eps);

  if (log_csv && st.next_step == 0) *log_csv << kTrainLogHeader << '\n';

  const uint64_t first = st.next_step, last = st.next_step + cfg.steps;
  for (uint64_t step = first; step < last; ++step) {
    Batch batch = sample_batch(cooc, cfg, substream(cfg.seed, kTrainBatchTag, step));
    EdgeMask mask = sample_mask(graph, substream(cfg.seed, kTrainMaskTag, step));
    GradientSet grads =
        estimate_gradients(graph, batch, cfg, mask, st.baseline, st.has_baseline);
    if (!std::isfinite(grads.data_loss))
      throw numeric_error("train: loss diverged at step " + std::to_string(step));
    st.baseline = st.has_baseline
                      ? cfg.baseline_momentum * st.baseline +
                            (1.0 - cfg.baseline_momentum) * grads.data_loss
                      : grads.data_loss;
    st.has_baseline = true;

    for (const auto& [e, g] : grads.theta_w) st.adam_w.update(e, g, graph.edges[e].theta_w);
    for (const auto& [e, g] : grads.theta_p) st.adam_p.update(e, g, graph.edges[e].theta_p);
    for (const auto& [i, g] : grads.bias) st.adam_b.update(i, g, graph.bias[i]);

    for (const auto& [e, g] : grads.theta_w)
      if (!std::isfinite(graph.edges[e].theta_w))
        throw numeric_error("train: theta_w diverged at step " + std::to_string(step));
    for (const auto& [e, g] : grads.theta_p)
      if (!std::isfinite(graph.edges[e].theta_p))
        throw numeric_error("train: theta_p diverged at step " + std::to_string(step));
    for (const auto& [i, g] : grads.bias)
      if (!std::isfinite(graph.bias[i]))
        throw numeric_error("train: bias diverged at step " + std::to_string(step));

    double prob_sum = 0.0;
    uint64_t kept = 0;
    for (size_t e = 0; e < n_edges; ++e) {
      double p = graph.prob(e);
      prob_sum += p;
      if (p >= 0.5) ++kept;
    }
    TrainLogRow row{step, grads.data_loss,
                    n_edges ? prob_sum / static_cast<double>(n_edges) : 0.0, kept,
                    grads.skipped_pairs};
    result.log.push_back(row);
    if (log_csv)
      *log_csv << row.step << ',' << fmt_double(row.loss) << ','
               << fmt_double(row.mean_edge_prob) << ',' << row.pruned_edge_count << ','
               << row.skipped_pairs << '\n';

    st.next_step = step + 1;
    if (cfg.target_ppt > 0.0) {
      double ppt = (n_words + 2.0 * static_cast<double>(kept)) / n_words;
      if (ppt <= cfg.target_ppt) break;
    }
  }
  return result;
}

}  // namespace graphglove
