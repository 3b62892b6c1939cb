#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "graphglove/common.hpp"

namespace graphglove {

// Token <-> id mapping. Ids are assigned in decreasing frequency order,
// ties broken lexicographically, so id 0 is the most frequent token.
struct Vocabulary {
  std::vector<std::string> tokens;  // id -> token
  std::vector<uint64_t> freq;       // id -> occurrence count
  std::unordered_map<std::string, uint32_t> ids;
  uint64_t size_limit = 0;

  size_t size() const { return tokens.size(); }

  bool contains(const std::string& t) const { return ids.find(t) != ids.end(); }

  // -1 when the token is out of vocabulary.
  int64_t id_of(const std::string& t) const {
    auto it = ids.find(t);
    return it == ids.end() ? -1 : static_cast<int64_t>(it->second);
  }

  void rebuild_index() {
    ids.clear();
    ids.reserve(tokens.size() * 2);
    for (uint32_t i = 0; i < tokens.size(); ++i) {
      if (!ids.emplace(tokens[i], i).second)
        throw data_error("duplicate token in vocabulary: " + tokens[i]);
    }
  }
};

using TokenCounts = std::unordered_map<std::string, uint64_t>;

inline TokenCounts count_tokens(std::istream& corpus) {
  TokenCounts counts;
  std::string line;
  while (std::getline(corpus, line))
    for (auto& tok : split_ws(line)) ++counts[tok];
  return counts;
}

// Shard merge: plain summation, independent of shard order up to count arithmetic.
inline void merge_counts(TokenCounts& into, const TokenCounts& from) {
  for (const auto& [tok, c] : from) into[tok] += c;
}

inline Vocabulary vocabulary_from_counts(const TokenCounts& counts, uint64_t max_size,
                                         uint64_t min_count) {
  if (max_size == 0) throw std::invalid_argument("build_vocabulary: max_size must be positive");
  if (counts.empty()) throw data_error("build_vocabulary: empty corpus");

  std::vector<std::pair<std::string, uint64_t>> kept;
  kept.reserve(counts.size());
  for (const auto& [tok, c] : counts)
    if (c >= min_count) kept.emplace_back(tok, c);
  if (kept.empty())
    throw data_error("build_vocabulary: no token reaches min_count=" + std::to_string(min_count));

  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (kept.size() > max_size) kept.resize(max_size);

  Vocabulary vocab;
  vocab.size_limit = max_size;
  vocab.tokens.reserve(kept.size());
  vocab.freq.reserve(kept.size());
  for (auto& [tok, c] : kept) {
    vocab.tokens.push_back(std::move(tok));
    vocab.freq.push_back(c);
  }
  vocab.rebuild_index();
  return vocab;
}

inline Vocabulary build_vocabulary(std::istream& corpus, uint64_t max_size, uint64_t min_count) {
  return vocabulary_from_counts(count_tokens(corpus), max_size, min_count);
}

inline Vocabulary build_vocabulary_file(const std::string& path, uint64_t max_size,
                                        uint64_t min_count) {
  auto in = open_input(path);
  return build_vocabulary(in, max_size, min_count);
}

// TSV `token<TAB>count`, line order = id order.
inline void save_vocabulary(const std::string& path, const Vocabulary& vocab) {
  auto out = open_output(path);
  for (size_t i = 0; i < vocab.size(); ++i)
    out << vocab.tokens[i] << '\t' << vocab.freq[i] << '\n';
  if (!out) throw data_error("failed writing vocabulary: " + path);
}

inline Vocabulary load_vocabulary(const std::string& path) {
  auto in = open_input(path);
  Vocabulary vocab;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cols = split_char(line, '\t');
    if (cols.size() != 2)
      throw data_error(path + ":" + std::to_string(lineno) + ": expected token<TAB>count");
    uint64_t c = 0;
    try {
      c = std::stoull(cols[1]);
    } catch (const std::exception&) {
      throw data_error(path + ":" + std::to_string(lineno) + ": bad count \"" + cols[1] + "\"");
    }
    vocab.tokens.push_back(cols[0]);
    vocab.freq.push_back(c);
  }
  if (vocab.tokens.empty()) throw data_error(path + ": empty vocabulary file");
  vocab.size_limit = vocab.tokens.size();
  vocab.rebuild_index();
  return vocab;
}

}  // namespace graphglove
