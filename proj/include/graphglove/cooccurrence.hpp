#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "graphglove/common.hpp"
#include "graphglove/vocabulary.hpp"

namespace graphglove {

// Symmetric sparse co-occurrence matrix; both (i,j) and (j,i) are stored.
struct SparseCooccurrence {
  uint64_t n_words = 0;
  uint32_t window = 0;
  std::vector<std::vector<std::pair<uint32_t, double>>> rows;  // sorted by column
  uint64_t nnz_total = 0;

  double at(uint32_t i, uint32_t j) const {
    if (i >= rows.size()) return 0.0;
    const auto& row = rows[i];
    auto it = std::lower_bound(row.begin(), row.end(), j,
                               [](const auto& e, uint32_t col) { return e.first < col; });
    return (it != row.end() && it->first == j) ? it->second : 0.0;
  }

  void recount() {
    nnz_total = 0;
    for (const auto& row : rows) nnz_total += row.size();
  }

  void validate(double sym_tol = 1e-9) const {
    uint64_t nnz = 0;
    for (uint32_t i = 0; i < rows.size(); ++i) {
      uint32_t prev = 0;
      bool first = true;
      for (const auto& [j, x] : rows[i]) {
        if (j >= n_words) throw data_error("cooccurrence: column id out of range");
        if (!first && j <= prev) throw data_error("cooccurrence: row not strictly sorted");
        if (!(x > 0.0) || !std::isfinite(x))
          throw data_error("cooccurrence: nonpositive or nonfinite entry");
        if (std::fabs(at(j, i) - x) > sym_tol) throw data_error("cooccurrence: asymmetric entry");
        prev = j;
        first = false;
      }
      nnz += rows[i].size();
    }
    if (nnz != nnz_total) throw data_error("cooccurrence: nnz_total mismatch");
  }
};

// Accumulates window co-occurrences line by line; shards can accumulate
// independently and merge, summation makes the merge order-insensitive
// up to floating-point addition order.
class CoocAccumulator {
 public:
  CoocAccumulator(const Vocabulary& vocab, uint32_t window)
      : vocab_(vocab), window_(window), cells_(vocab.size()) {
    if (window == 0) throw std::invalid_argument("build_cooccurrence: window must be >= 1");
  }

  void add_line(const std::string& line) {
    ids_.clear();
    for (const auto& tok : split_ws(line)) ids_.push_back(vocab_.id_of(tok));
    const size_t len = ids_.size();
    for (size_t pos = 1; pos < len; ++pos) {
      const int64_t j = ids_[pos];
      if (j < 0) continue;  // OOV tokens still occupy positions
      const size_t lo = pos > window_ ? pos - window_ : 0;
      for (size_t prev = lo; prev < pos; ++prev) {
        const int64_t i = ids_[prev];
        if (i < 0) continue;
        const double add = 1.0 / static_cast<double>(pos - prev);
        cells_[static_cast<size_t>(i)][static_cast<uint32_t>(j)] += add;
        cells_[static_cast<size_t>(j)][static_cast<uint32_t>(i)] += add;
      }
    }
  }

  void merge(const CoocAccumulator& other) {
    for (size_t i = 0; i < cells_.size(); ++i)
      for (const auto& [j, x] : other.cells_[i]) cells_[i][j] += x;
  }

  SparseCooccurrence finalize() const {
    SparseCooccurrence cooc;
    cooc.n_words = vocab_.size();
    cooc.window = window_;
    cooc.rows.resize(vocab_.size());
    for (size_t i = 0; i < cells_.size(); ++i) {
      auto& row = cooc.rows[i];
      row.assign(cells_[i].begin(), cells_[i].end());
      std::sort(row.begin(), row.end());
      cooc.nnz_total += row.size();
    }
    return cooc;
  }

 private:
  const Vocabulary& vocab_;
  size_t window_;
  std::vector<std::unordered_map<uint32_t, double>> cells_;
  std::vector<int64_t> ids_;
};

inline SparseCooccurrence build_cooccurrence(std::istream& corpus, const Vocabulary& vocab,
                                             uint32_t window) {
  CoocAccumulator acc(vocab, window);
  std::string line;
  while (std::getline(corpus, line)) acc.add_line(line);
  return acc.finalize();
}

inline SparseCooccurrence build_cooccurrence_file(const std::string& path, const Vocabulary& vocab,
                                                  uint32_t window) {
  auto in = open_input(path);
  return build_cooccurrence(in, vocab, window);
}

// Round-robin line sharding; result matches the unsharded build within
// floating-point accumulation tolerance for any shard count.
inline SparseCooccurrence build_cooccurrence_sharded(std::istream& corpus, const Vocabulary& vocab,
                                                     uint32_t window, uint32_t n_shards) {
  if (n_shards == 0) throw std::invalid_argument("build_cooccurrence: n_shards must be >= 1");
  std::vector<CoocAccumulator> shards(n_shards, CoocAccumulator(vocab, window));
  std::string line;
  size_t lineno = 0;
  while (std::getline(corpus, line)) shards[lineno++ % n_shards].add_line(line);
  for (uint32_t s = 1; s < n_shards; ++s) shards[0].merge(shards[s]);
  return shards[0].finalize();
}

// Binary format: "COOC1", u64 |V|, u64 nnz_total, then (u32 i, u32 j, f64 x)
// records sorted by (i, j), both orientations present.
inline void save_cooccurrence(const std::string& path, const SparseCooccurrence& cooc) {
  auto out = open_output(path, std::ios::binary);
  write_bytes(out, "COOC1", 5);
  write_u64(out, cooc.n_words);
  write_u64(out, cooc.nnz_total);
  for (uint32_t i = 0; i < cooc.rows.size(); ++i) {
    for (const auto& [j, x] : cooc.rows[i]) {
      write_u32(out, i);
      write_u32(out, j);
      write_f64(out, x);
    }
  }
  if (!out) throw data_error("failed writing cooccurrence: " + path);
}

inline SparseCooccurrence load_cooccurrence(const std::string& path) {
  auto in = open_input(path, std::ios::binary);
  expect_magic(in, "COOC1", "cooccurrence file");
  SparseCooccurrence cooc;
  cooc.n_words = read_u64(in, "cooccurrence |V|");
  cooc.nnz_total = read_u64(in, "cooccurrence nnz");
  cooc.rows.resize(cooc.n_words);
  uint64_t prev_i = 0, prev_j = 0;
  for (uint64_t r = 0; r < cooc.nnz_total; ++r) {
    uint32_t i = read_u32(in, "cooccurrence record");
    uint32_t j = read_u32(in, "cooccurrence record");
    double x = read_f64(in, "cooccurrence record");
    if (i >= cooc.n_words || j >= cooc.n_words)
      throw data_error(path + ": cooccurrence id out of range");
    if (r > 0 && (i < prev_i || (i == prev_i && j <= prev_j)))
      throw data_error(path + ": cooccurrence records not sorted by (i, j)");
    if (!(x > 0.0) || !std::isfinite(x))
      throw data_error(path + ": nonpositive cooccurrence value");
    cooc.rows[i].emplace_back(j, x);
    prev_i = i;
    prev_j = j;
  }
  if (in.peek() != std::char_traits<char>::eof())
    throw data_error(path + ": trailing bytes after cooccurrence records");
  return cooc;
}

}  // namespace graphglove
