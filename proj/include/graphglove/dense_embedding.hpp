#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "graphglove/common.hpp"
#include "graphglove/cooccurrence.hpp"
#include "graphglove/sparse_adam.hpp"
#include "graphglove/vocabulary.hpp"

namespace graphglove {

// Euclidean GloVe vectors. The exported representation is combined = w + w_tilde;
// embeddings loaded from disk carry only combined (w holds it, w_tilde is zero).
struct DenseEmbedding {
  uint32_t dim = 0;
  std::vector<std::string> tokens;  // empty when trained without a vocabulary attached
  std::vector<double> w, w_tilde;   // n x dim, row-major
  std::vector<double> b, b_tilde;   // n
  std::vector<double> combined;     // n x dim, w + w_tilde

  size_t size() const { return b.size(); }

  const double* vec(size_t i) const { return combined.data() + i * dim; }

  void refresh_combined() {
    combined.resize(w.size());
    for (size_t k = 0; k < w.size(); ++k) combined[k] = w[k] + w_tilde[k];
  }

  void validate() const {
    auto all_finite = [](const std::vector<double>& xs) {
      for (double x : xs)
        if (!std::isfinite(x)) return false;
      return true;
    };
    if (!all_finite(w) || !all_finite(w_tilde) || !all_finite(b) || !all_finite(b_tilde) ||
        !all_finite(combined))
      throw numeric_error("embedding contains nonfinite values");
    for (size_t k = 0; k < combined.size(); ++k)
      if (combined[k] != w[k] + w_tilde[k])
        throw numeric_error("embedding: combined is stale");
  }
};

inline double glove_weight(double x, double x_max, double alpha) {
  if (x < 0.0) throw std::invalid_argument("glove_weight: x must be non-negative");
  if (x_max <= 0.0) throw std::invalid_argument("glove_weight: x_max must be positive");
  if (alpha <= 0.0 || alpha > 1.0) throw std::invalid_argument("glove_weight: alpha not in (0,1]");
  if (x >= x_max) return 1.0;
  return std::pow(x / x_max, alpha);
}

// One term of the GloVe objective, f(X)(w_i . w~_j + b_i + b~_j - log X)^2.
inline double glove_pair_loss(const DenseEmbedding& emb, uint32_t i, uint32_t j, double x,
                              double x_max, double alpha) {
  const double* wi = emb.w.data() + static_cast<size_t>(i) * emb.dim;
  const double* wj = emb.w_tilde.data() + static_cast<size_t>(j) * emb.dim;
  double dot = 0.0;
  for (uint32_t k = 0; k < emb.dim; ++k) dot += wi[k] * wj[k];
  double err = dot + emb.b[i] + emb.b_tilde[j] - std::log(x);
  return glove_weight(x, x_max, alpha) * err * err;
}

struct DensePairGrad {
  std::vector<double> d_wi, d_wtj;  // dim each
  double d_bi = 0.0, d_btj = 0.0;
};

inline DensePairGrad glove_pair_gradients(const DenseEmbedding& emb, uint32_t i, uint32_t j,
                                          double x, double x_max, double alpha) {
  const double* wi = emb.w.data() + static_cast<size_t>(i) * emb.dim;
  const double* wj = emb.w_tilde.data() + static_cast<size_t>(j) * emb.dim;
  double dot = 0.0;
  for (uint32_t k = 0; k < emb.dim; ++k) dot += wi[k] * wj[k];
  double err = dot + emb.b[i] + emb.b_tilde[j] - std::log(x);
  double g = 2.0 * glove_weight(x, x_max, alpha) * err;
  DensePairGrad out;
  out.d_wi.resize(emb.dim);
  out.d_wtj.resize(emb.dim);
  for (uint32_t k = 0; k < emb.dim; ++k) {
    out.d_wi[k] = g * wj[k];
    out.d_wtj[k] = g * wi[k];
  }
  out.d_bi = g;
  out.d_btj = g;
  return out;
}

inline constexpr uint64_t kDenseInitTag = 0x64656e7365696e69ULL;
inline constexpr uint64_t kDenseOrderTag = 0x64656e73656f7264ULL;

inline DenseEmbedding train_dense(const SparseCooccurrence& cooc, uint32_t dim, uint32_t epochs,
                                  double lr, uint64_t seed,
                                  std::vector<double>* epoch_losses = nullptr,
                                  double x_max = 100.0, double alpha = 0.75) {
  if (dim == 0) throw std::invalid_argument("train_dense: dim must be positive");
  if (epochs == 0) throw std::invalid_argument("train_dense: epochs must be positive");
  if (cooc.nnz_total == 0) throw data_error("train_dense: empty cooccurrence matrix");

  const size_t n = cooc.n_words;
  DenseEmbedding emb;
  emb.dim = dim;
  emb.w.resize(n * dim);
  emb.w_tilde.resize(n * dim);
  emb.b.resize(n);
  emb.b_tilde.resize(n);

  Rng init_rng(substream(seed, kDenseInitTag));
  const double span = 0.5 / dim;
  for (auto& p : emb.w) p = init_rng.uniform(-span, span);
  for (auto& p : emb.w_tilde) p = init_rng.uniform(-span, span);
  for (auto& p : emb.b) p = init_rng.uniform(-span, span);
  for (auto& p : emb.b_tilde) p = init_rng.uniform(-span, span);

  struct Cell {
    uint32_t i, j;
    double x, weight, logx;
  };
  std::vector<Cell> cells;
  cells.reserve(cooc.nnz_total);
  for (uint32_t i = 0; i < cooc.rows.size(); ++i)
    for (const auto& [j, x] : cooc.rows[i])
      cells.push_back({i, j, x, glove_weight(x, x_max, alpha), std::log(x)});

  SparseAdam adam_w(n * dim, lr, 0.9, 0.999, 1e-8);
  SparseAdam adam_wt(n * dim, lr, 0.9, 0.999, 1e-8);
  SparseAdam adam_b(n, lr, 0.9, 0.999, 1e-8);
  SparseAdam adam_bt(n, lr, 0.9, 0.999, 1e-8);

  std::vector<uint32_t> order(cells.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> grad_wi(dim), grad_wtj(dim);

  for (uint32_t epoch = 0; epoch < epochs; ++epoch) {
    Rng order_rng(substream(seed, kDenseOrderTag, epoch));
    order_rng.shuffle(order);
    double loss_sum = 0.0;
    for (uint32_t idx : order) {
      const Cell& c = cells[idx];
      double* wi = emb.w.data() + static_cast<size_t>(c.i) * dim;
      double* wj = emb.w_tilde.data() + static_cast<size_t>(c.j) * dim;
      double dot = 0.0;
      for (uint32_t k = 0; k < dim; ++k) dot += wi[k] * wj[k];
      double err = dot + emb.b[c.i] + emb.b_tilde[c.j] - c.logx;
      loss_sum += c.weight * err * err;
      double g = 2.0 * c.weight * err;
      for (uint32_t k = 0; k < dim; ++k) {
        grad_wi[k] = g * wj[k];
        grad_wtj[k] = g * wi[k];
      }
      size_t base_i = static_cast<size_t>(c.i) * dim, base_j = static_cast<size_t>(c.j) * dim;
      for (uint32_t k = 0; k < dim; ++k) adam_w.update(base_i + k, grad_wi[k], wi[k]);
      for (uint32_t k = 0; k < dim; ++k) adam_wt.update(base_j + k, grad_wtj[k], wj[k]);
      adam_b.update(c.i, g, emb.b[c.i]);
      adam_bt.update(c.j, g, emb.b_tilde[c.j]);
    }
    double mean_loss = loss_sum / static_cast<double>(cells.size());
    if (!std::isfinite(mean_loss))
      throw numeric_error("train_dense: loss diverged at epoch " + std::to_string(epoch));
    if (epoch_losses) epoch_losses->push_back(mean_loss);
  }

  emb.refresh_combined();
  emb.validate();
  return emb;
}

// Precomputed norms for repeated cosine queries over `combined`.
// Zero-norm vectors get similarity 0 against everything.
struct CosineIndex {
  const DenseEmbedding* emb;
  std::vector<double> norm;

  explicit CosineIndex(const DenseEmbedding& e) : emb(&e), norm(e.size()) {
    for (size_t i = 0; i < e.size(); ++i) {
      const double* v = e.vec(i);
      double s = 0.0;
      for (uint32_t k = 0; k < e.dim; ++k) s += v[k] * v[k];
      norm[i] = std::sqrt(s);
    }
  }

  bool has_zero_vector() const {
    for (double nv : norm)
      if (nv == 0.0) return true;
    return false;
  }

  double sim(uint32_t i, uint32_t j) const {
    if (norm[i] == 0.0 || norm[j] == 0.0) return 0.0;
    const double* a = emb->vec(i);
    const double* bvec = emb->vec(j);
    double dot = 0.0;
    for (uint32_t k = 0; k < emb->dim; ++k) dot += a[k] * bvec[k];
    return dot / (norm[i] * norm[j]);
  }

  double dist(uint32_t i, uint32_t j) const { return 1.0 - sim(i, j); }

  // k nearest ids to `word` by cosine distance, excluding `word`; ties by lower id.
  std::vector<uint32_t> nearest(uint32_t word, uint32_t k) const {
    const size_t n = emb->size();
    std::vector<std::pair<double, uint32_t>> cand;
    cand.reserve(n - 1);
    for (uint32_t j = 0; j < n; ++j)
      if (j != word) cand.emplace_back(dist(word, j), j);
    size_t take = std::min<size_t>(k, cand.size());
    std::partial_sort(cand.begin(), cand.begin() + take, cand.end());
    std::vector<uint32_t> out(take);
    for (size_t r = 0; r < take; ++r) out[r] = cand[r].second;
    return out;
  }
};

inline std::vector<uint32_t> knn(const DenseEmbedding& emb, uint32_t word, uint32_t k) {
  if (word >= emb.size()) throw std::invalid_argument("knn: word id out of range");
  if (k == 0) throw std::invalid_argument("knn: k must be positive");
  if (k >= emb.size()) throw std::invalid_argument("knn: k must be smaller than the vocabulary");
  return CosineIndex(emb).nearest(word, k);
}

// Text format: first line `|V| dim`, then `token v1 ... vdim` (combined vectors).
// Biases live in a binary sidecar at path + ".bias".
inline void save_embedding(const std::string& path, const DenseEmbedding& emb,
                           const Vocabulary& vocab) {
  if (vocab.size() != emb.size())
    throw std::invalid_argument("save_embedding: vocabulary size mismatch");
  auto out = open_output(path);
  out << emb.size() << ' ' << emb.dim << '\n';
  for (size_t i = 0; i < emb.size(); ++i) {
    out << vocab.tokens[i];
    const double* v = emb.vec(i);
    for (uint32_t k = 0; k < emb.dim; ++k) out << ' ' << fmt_double(v[k]);
    out << '\n';
  }
  if (!out) throw data_error("failed writing embedding: " + path);

  auto side = open_output(path + ".bias", std::ios::binary);
  write_bytes(side, "BIAS1", 5);
  write_u64(side, emb.size());
  for (double x : emb.b) write_f64(side, x);
  for (double x : emb.b_tilde) write_f64(side, x);
  if (!side) throw data_error("failed writing bias sidecar: " + path + ".bias");
}

inline DenseEmbedding load_embedding(const std::string& path) {
  auto in = open_input(path);
  std::string header;
  if (!std::getline(in, header)) throw data_error(path + ": empty embedding file");
  auto head = split_ws(header);
  if (head.size() != 2) throw data_error(path + ": expected `|V| dim` header");
  size_t n = 0;
  uint32_t dim = 0;
  try {
    n = std::stoull(head[0]);
    dim = static_cast<uint32_t>(std::stoul(head[1]));
  } catch (const std::exception&) {
    throw data_error(path + ": bad embedding header");
  }
  if (n == 0 || dim == 0) throw data_error(path + ": degenerate embedding header");

  DenseEmbedding emb;
  emb.dim = dim;
  emb.tokens.reserve(n);
  emb.w.resize(n * static_cast<size_t>(dim), 0.0);
  emb.w_tilde.assign(n * static_cast<size_t>(dim), 0.0);
  emb.b.assign(n, 0.0);
  emb.b_tilde.assign(n, 0.0);

  std::string line;
  for (size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw data_error(path + ": truncated embedding file");
    auto cols = split_ws(line);
    if (cols.size() != dim + 1)
      throw data_error(path + ":" + std::to_string(i + 2) + ": wrong column count");
    emb.tokens.push_back(cols[0]);
    for (uint32_t k = 0; k < dim; ++k) {
      try {
        emb.w[i * dim + k] = std::stod(cols[k + 1]);
      } catch (const std::exception&) {
        throw data_error(path + ":" + std::to_string(i + 2) + ": bad vector value");
      }
    }
  }

  std::ifstream side(path + ".bias", std::ios::binary);
  if (side) {
    expect_magic(side, "BIAS1", "bias sidecar");
    uint64_t m = read_u64(side, "bias sidecar");
    if (m != n) throw data_error(path + ".bias: size mismatch with embedding");
    for (auto& x : emb.b) x = read_f64(side, "bias sidecar");
    for (auto& x : emb.b_tilde) x = read_f64(side, "bias sidecar");
  }

  emb.refresh_combined();
  emb.validate();
  return emb;
}

}  // namespace graphglove
