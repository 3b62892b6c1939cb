#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "graphglove/common.hpp"
#include "graphglove/dense_embedding.hpp"
#include "graphglove/shortest_paths.hpp"
#include "graphglove/stochastic_graph.hpp"
#include "graphglove/vocabulary.hpp"

namespace graphglove {

// Fractional ranks in [1, n] with average-rank tie handling. Infinities are
// ranked like any other comparable value.
inline std::vector<double> fractional_ranks(const std::vector<double>& x) {
  for (double v : x)
    if (std::isnan(v)) throw std::invalid_argument("ranks: NaN input");
  std::vector<uint32_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    if (x[a] != x[b]) return x[a] < x[b];
    return a < b;
  });
  std::vector<double> ranks(x.size());
  size_t k = 0;
  while (k < order.size()) {
    size_t tie_end = k + 1;
    while (tie_end < order.size() && x[order[tie_end]] == x[order[k]]) ++tie_end;
    double avg = 0.5 * static_cast<double>(k + tie_end - 1) + 1.0;  // mean of 1-based positions
    for (size_t t = k; t < tie_end; ++t) ranks[order[t]] = avg;
    k = tie_end;
  }
  return ranks;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  if (x.size() < 2) throw std::invalid_argument("pearson: need at least two points");
  const double n = static_cast<double>(x.size());
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw numeric_error("pearson: constant input");
  return sxy / std::sqrt(sxx * syy);
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("spearman: length mismatch");
  if (x.size() < 2) throw std::invalid_argument("spearman: need at least two points");
  return pearson(fractional_ranks(x), fractional_ranks(y));
}

// ---------------------------------------------------------------------------
// Benchmarks

struct SimilarityBenchmark {
  std::string name;
  std::vector<std::tuple<std::string, std::string, double>> pairs;
};

// TSV `word1<TAB>word2<TAB>score` with an optional header line.
inline SimilarityBenchmark load_similarity_benchmark(const std::string& path) {
  auto in = open_input(path);
  SimilarityBenchmark bench;
  bench.name = std::filesystem::path(path).stem().string();
  std::unordered_set<std::string> seen;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cols = split_char(line, '\t');
    if (cols.size() == 1) cols = split_ws(line);  // tolerate space-separated files
    if (cols.size() != 3)
      throw data_error(path + ":" + std::to_string(lineno) + ": expected word1 word2 score");
    double score;
    try {
      score = std::stod(cols[2]);
    } catch (const std::exception&) {
      if (lineno == 1) continue;  // header
      throw data_error(path + ":" + std::to_string(lineno) + ": bad score \"" + cols[2] + "\"");
    }
    if (!std::isfinite(score))
      throw data_error(path + ":" + std::to_string(lineno) + ": nonfinite score");
    std::string w1 = lowercase(cols[0]), w2 = lowercase(cols[1]);
    if (!seen.insert(w1 + "\t" + w2).second)
      throw data_error(path + ":" + std::to_string(lineno) + ": duplicate pair " + w1 + "," + w2);
    bench.pairs.emplace_back(std::move(w1), std::move(w2), score);
  }
  if (bench.pairs.empty()) throw data_error(path + ": no similarity pairs");
  return bench;
}

struct AnalogyQuestion {
  std::string a, a_star, b;
  std::vector<std::string> b_star;  // accepted answers; first entry is canonical
  uint32_t category = 0;
};

struct AnalogyBenchmark {
  std::string name;
  std::vector<std::string> categories;
  std::vector<AnalogyQuestion> questions;
};

// Google analogy format: `: category` section headers, then four words per line.
inline AnalogyBenchmark load_google_analogies(const std::string& path) {
  auto in = open_input(path);
  AnalogyBenchmark bench;
  bench.name = std::filesystem::path(path).stem().string();
  std::string line;
  size_t lineno = 0;
  int64_t category = -1;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0] == ":") {
      if (toks.size() != 2)
        throw data_error(path + ":" + std::to_string(lineno) + ": bad category header");
      bench.categories.push_back(lowercase(toks[1]));
      category = static_cast<int64_t>(bench.categories.size()) - 1;
      continue;
    }
    if (toks.size() != 4)
      throw data_error(path + ":" + std::to_string(lineno) + ": expected four words");
    if (category < 0) {
      bench.categories.push_back("default");
      category = 0;
    }
    AnalogyQuestion q;
    q.a = lowercase(toks[0]);
    q.a_star = lowercase(toks[1]);
    q.b = lowercase(toks[2]);
    q.b_star = {lowercase(toks[3])};
    q.category = static_cast<uint32_t>(category);
    bench.questions.push_back(std::move(q));
  }
  if (bench.questions.empty()) throw data_error(path + ": no analogy questions");
  return bench;
}

// BATS directory: one file per relation, lines `word<TAB>answer1/answer2/...`,
// expanded into all ordered pairs of entries within the file.
inline AnalogyBenchmark load_bats_directory(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw data_error(dir + ": not a directory");
  AnalogyBenchmark bench;
  bench.name = fs::path(dir).filename().string();
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    auto in = open_input(file.string());
    std::vector<std::pair<std::string, std::vector<std::string>>> entries;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      auto cols = split_char(line, '\t');
      if (cols.size() == 1) cols = split_ws(line);
      if (cols.size() != 2)
        throw data_error(file.string() + ":" + std::to_string(lineno) +
                         ": expected word<TAB>answers");
      std::vector<std::string> answers;
      for (const auto& a : split_char(cols[1], '/'))
        if (!a.empty()) answers.push_back(lowercase(a));
      if (answers.empty())
        throw data_error(file.string() + ":" + std::to_string(lineno) + ": no answers");
      entries.emplace_back(lowercase(cols[0]), std::move(answers));
    }
    if (entries.size() < 2) throw data_error(file.string() + ": need at least two entries");
    bench.categories.push_back(file.stem().string());
    uint32_t category = static_cast<uint32_t>(bench.categories.size()) - 1;
    for (size_t i = 0; i < entries.size(); ++i) {
      for (size_t j = 0; j < entries.size(); ++j) {
        if (i == j) continue;
        AnalogyQuestion q;
        q.a = entries[i].first;
        q.a_star = entries[i].second[0];
        q.b = entries[j].first;
        q.b_star = entries[j].second;
        q.category = category;
        bench.questions.push_back(std::move(q));
      }
    }
  }
  if (bench.questions.empty()) throw data_error(dir + ": no analogy questions");
  return bench;
}

// ---------------------------------------------------------------------------
// Similarity evaluation

enum class OovPolicy { skip, infer };

struct SimilarityResult {
  double spearman = 0.0;
  uint64_t used = 0, skipped = 0;
};

namespace detail {

// Mean finite distance from the source to the other word nodes.
inline double mean_distance(const std::vector<double>& dist, uint32_t self, uint32_t n_words) {
  double sum = 0.0;
  uint64_t cnt = 0;
  for (uint32_t j = 0; j < n_words; ++j) {
    if (j == self || dist[j] == kInf) continue;
    sum += dist[j];
    ++cnt;
  }
  if (cnt == 0) throw numeric_error("similarity_eval: isolated word cannot infer distances");
  return sum / static_cast<double>(cnt);
}

}  // namespace detail

// Graph similarity: model score -d_G. `infer` replaces d(w, OOV) with the mean
// distance from w to the vocabulary and d(OOV, OOV) with +inf (ranked last).
inline SimilarityResult similarity_eval(const PrunedGraph& graph, const Vocabulary& vocab,
                                        const SimilarityBenchmark& bench, OovPolicy policy) {
  if (graph.n_vertices != vocab.size())
    throw std::invalid_argument("similarity_eval: graph must cover exactly the word nodes");
  Csr csr = csr_from(graph);
  const uint32_t n_words = graph.n_vertices;

  // One multi-target run per distinct first word; full runs only for `infer`.
  std::unordered_map<uint32_t, std::vector<uint32_t>> partner_ids;
  std::unordered_set<uint32_t> need_mean;
  for (const auto& [w1, w2, human] : bench.pairs) {
    int64_t i = vocab.id_of(w1), j = vocab.id_of(w2);
    if (i >= 0 && j >= 0) {
      partner_ids[static_cast<uint32_t>(i)].push_back(static_cast<uint32_t>(j));
    } else if (policy == OovPolicy::infer) {
      if (i >= 0) need_mean.insert(static_cast<uint32_t>(i));
      if (j >= 0) need_mean.insert(static_cast<uint32_t>(j));
    }
  }

  std::unordered_map<uint64_t, double> pair_dist;
  for (auto& [i, partners] : partner_ids) {
    auto sp = dijkstra(csr, i, partners);
    for (uint32_t j : partners)
      pair_dist[(static_cast<uint64_t>(i) << 32) | j] = sp.dist[j];
  }
  std::unordered_map<uint32_t, double> mean_dist;
  for (uint32_t i : need_mean) {
    auto sp = dijkstra(csr, i);
    mean_dist[i] = detail::mean_distance(sp.dist, i, n_words);
  }

  std::vector<double> model, human_scores;
  SimilarityResult result;
  for (const auto& [w1, w2, human] : bench.pairs) {
    int64_t i = vocab.id_of(w1), j = vocab.id_of(w2);
    double d;
    if (i >= 0 && j >= 0) {
      d = pair_dist[(static_cast<uint64_t>(i) << 32) | static_cast<uint64_t>(j)];
    } else if (policy == OovPolicy::skip) {
      ++result.skipped;
      continue;
    } else if (i >= 0 || j >= 0) {
      d = mean_dist[static_cast<uint32_t>(i >= 0 ? i : j)];
    } else {
      d = kInf;  // both OOV: infinitely distant, minimal similarity
    }
    model.push_back(-d);
    human_scores.push_back(human);
  }
  if (model.empty()) throw data_error("similarity_eval: no usable pairs in " + bench.name);
  result.used = model.size();
  result.spearman = spearman(model, human_scores);
  return result;
}

// Dense similarity: cosine over combined vectors; `infer` uses the mean cosine
// to the vocabulary, with both-OOV pairs at minimal similarity.
inline SimilarityResult similarity_eval(const DenseEmbedding& emb, const Vocabulary& vocab,
                                        const SimilarityBenchmark& bench, OovPolicy policy) {
  if (emb.size() != vocab.size())
    throw std::invalid_argument("similarity_eval: embedding and vocabulary sizes differ");
  CosineIndex index(emb);
  auto mean_sim = [&](uint32_t i) {
    double sum = 0.0;
    for (uint32_t j = 0; j < emb.size(); ++j)
      if (j != i) sum += index.sim(i, j);
    return sum / static_cast<double>(emb.size() - 1);
  };

  std::vector<double> model, human_scores;
  SimilarityResult result;
  for (const auto& [w1, w2, human] : bench.pairs) {
    int64_t i = vocab.id_of(w1), j = vocab.id_of(w2);
    double s;
    if (i >= 0 && j >= 0) {
      s = index.sim(static_cast<uint32_t>(i), static_cast<uint32_t>(j));
    } else if (policy == OovPolicy::skip) {
      ++result.skipped;
      continue;
    } else if (i >= 0 || j >= 0) {
      s = mean_sim(static_cast<uint32_t>(i >= 0 ? i : j));
    } else {
      s = -std::numeric_limits<double>::infinity();
    }
    model.push_back(s);
    human_scores.push_back(human);
  }
  if (model.empty()) throw data_error("similarity_eval: no usable pairs in " + bench.name);
  result.used = model.size();
  result.spearman = spearman(model, human_scores);
  return result;
}

// ---------------------------------------------------------------------------
// sim_G and analogies

// Distance vector from `source` over every vertex of the (word-only) graph,
// with unreachable entries replaced by max-finite + 1.
inline std::vector<double> distance_vector(const Csr& csr, uint32_t source) {
  auto sp = dijkstra(csr, source);
  std::vector<double> d(sp.dist.begin(), sp.dist.begin() + csr.n);
  double max_finite = 0.0;
  bool any_inf = false;
  for (double x : d) {
    if (x == kInf)
      any_inf = true;
    else
      max_finite = std::max(max_finite, x);
  }
  if (any_inf)
    for (double& x : d)
      if (x == kInf) x = max_finite + 1.0;
  return d;
}

// Correlation of full shortest-path distance vectors (the graph counterpart of
// cosine similarity). The graph must contain word nodes only.
inline double sim_g(const PrunedGraph& graph, uint32_t x, uint32_t y) {
  if (x >= graph.n_vertices || y >= graph.n_vertices)
    throw std::invalid_argument("sim_g: vertex out of range");
  Csr csr = csr_from(graph);
  return pearson(distance_vector(csr, x), distance_vector(csr, y));
}

struct CategoryAccuracy {
  std::string name;
  uint64_t correct = 0, attempted = 0, skipped = 0;
};

struct AnalogyResult {
  double accuracy = 0.0;
  uint64_t correct = 0, attempted = 0, skipped = 0;
  std::vector<CategoryAccuracy> per_category;
};

namespace detail {

struct AnalogyIds {
  uint32_t a, a_star, b;
  std::vector<uint32_t> answers;
};

// Resolves a question to vocabulary ids; false when it must be skipped.
inline bool resolve_question(const AnalogyQuestion& q, const Vocabulary& vocab, AnalogyIds& out) {
  int64_t a = vocab.id_of(q.a), as = vocab.id_of(q.a_star), b = vocab.id_of(q.b);
  if (a < 0 || as < 0 || b < 0) return false;
  out.a = static_cast<uint32_t>(a);
  out.a_star = static_cast<uint32_t>(as);
  out.b = static_cast<uint32_t>(b);
  out.answers.clear();
  for (const auto& ans : q.b_star) {
    int64_t id = vocab.id_of(ans);
    if (id >= 0) out.answers.push_back(static_cast<uint32_t>(id));
  }
  return !out.answers.empty();
}

inline AnalogyResult finalize_analogy(std::vector<CategoryAccuracy>&& cats) {
  AnalogyResult result;
  for (auto& c : cats) {
    result.correct += c.correct;
    result.attempted += c.attempted;
    result.skipped += c.skipped;
  }
  result.accuracy =
      result.attempted ? static_cast<double>(result.correct) / result.attempted : 0.0;
  result.per_category = std::move(cats);
  return result;
}

// argmax of score over candidates outside the exclusion set; ties keep the
// lower id. Returns -1 when every candidate is excluded or -inf.
template <class ScoreFn>
inline int64_t argmax_candidate(size_t n, const uint32_t (&excluded)[3], ScoreFn&& score) {
  int64_t best = -1;
  double best_score = -std::numeric_limits<double>::infinity();
  for (uint32_t c = 0; c < n; ++c) {
    if (c == excluded[0] || c == excluded[1] || c == excluded[2]) continue;
    double s = score(c);
    if (s > best_score) {
      best_score = s;
      best = c;
    }
  }
  return best;
}

}  // namespace detail

// 3CosAdd over unit-normalized combined vectors, argmax over V minus {a, a*, b}.
inline AnalogyResult analogy_eval(const DenseEmbedding& emb, const Vocabulary& vocab,
                                  const AnalogyBenchmark& bench) {
  if (emb.size() != vocab.size())
    throw std::invalid_argument("analogy_eval: embedding and vocabulary sizes differ");
  const size_t n = emb.size();
  const uint32_t dim = emb.dim;
  std::vector<double> unit(n * static_cast<size_t>(dim), 0.0);
  for (size_t i = 0; i < n; ++i) {
    const double* v = emb.vec(i);
    double s = 0.0;
    for (uint32_t k = 0; k < dim; ++k) s += v[k] * v[k];
    if (s > 0.0) {
      double inv = 1.0 / std::sqrt(s);
      for (uint32_t k = 0; k < dim; ++k) unit[i * dim + k] = v[k] * inv;
    }
  }

  std::vector<CategoryAccuracy> cats(bench.categories.size());
  for (size_t c = 0; c < cats.size(); ++c) cats[c].name = bench.categories[c];

  std::vector<double> query(dim);
  detail::AnalogyIds ids;
  for (const auto& q : bench.questions) {
    auto& cat = cats[q.category];
    if (!detail::resolve_question(q, vocab, ids)) {
      ++cat.skipped;
      continue;
    }
    for (uint32_t k = 0; k < dim; ++k)
      query[k] = unit[ids.a_star * static_cast<size_t>(dim) + k] -
                 unit[ids.a * static_cast<size_t>(dim) + k] +
                 unit[ids.b * static_cast<size_t>(dim) + k];
    const uint32_t excluded[3] = {ids.a, ids.a_star, ids.b};
    int64_t pred = detail::argmax_candidate(n, excluded, [&](uint32_t c) {
      const double* u = unit.data() + c * static_cast<size_t>(dim);
      double s = 0.0;
      for (uint32_t k = 0; k < dim; ++k) s += u[k] * query[k];
      return s;
    });
    ++cat.attempted;
    if (pred >= 0 &&
        std::find(ids.answers.begin(), ids.answers.end(), static_cast<uint32_t>(pred)) !=
            ids.answers.end())
      ++cat.correct;
  }
  return detail::finalize_analogy(std::move(cats));
}

// Graph 3CosAdd with sim_G. Precomputes the full distance matrix (one Dijkstra
// per word) and z-scores each row, so sim_G reduces to a dot product.
inline AnalogyResult analogy_eval(const PrunedGraph& graph, const Vocabulary& vocab,
                                  const AnalogyBenchmark& bench) {
  if (graph.n_vertices != vocab.size())
    throw std::invalid_argument("analogy_eval: graph must cover exactly the word nodes");
  const size_t n = graph.n_vertices;
  Csr csr = csr_from(graph);

  // z[i] has mean 0 and unit norm, or stays all-zero for degenerate rows.
  std::vector<float> z(n * n, 0.0f);
  std::vector<uint8_t> valid(n, 0);
  for (uint32_t i = 0; i < n; ++i) {
    auto d = distance_vector(csr, i);
    double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double x : d) ss += (x - mean) * (x - mean);
    if (ss == 0.0) continue;
    double inv = 1.0 / std::sqrt(ss);
    for (size_t k = 0; k < n; ++k) z[i * n + k] = static_cast<float>((d[k] - mean) * inv);
    valid[i] = 1;
  }

  std::vector<CategoryAccuracy> cats(bench.categories.size());
  for (size_t c = 0; c < cats.size(); ++c) cats[c].name = bench.categories[c];

  std::vector<double> query(n);
  detail::AnalogyIds ids;
  for (const auto& q : bench.questions) {
    auto& cat = cats[q.category];
    if (!detail::resolve_question(q, vocab, ids) || !valid[ids.a] || !valid[ids.a_star] ||
        !valid[ids.b]) {
      ++cat.skipped;
      continue;
    }
    for (size_t k = 0; k < n; ++k)
      query[k] = static_cast<double>(z[ids.a_star * n + k]) - z[ids.a * n + k] + z[ids.b * n + k];
    const uint32_t excluded[3] = {ids.a, ids.a_star, ids.b};
    int64_t pred = detail::argmax_candidate(n, excluded, [&](uint32_t c) {
      if (!valid[c]) return -std::numeric_limits<double>::infinity();
      const float* row = z.data() + static_cast<size_t>(c) * n;
      double s = 0.0;
      for (size_t k = 0; k < n; ++k) s += row[k] * query[k];
      return s;
    });
    ++cat.attempted;
    if (pred >= 0 &&
        std::find(ids.answers.begin(), ids.answers.end(), static_cast<uint32_t>(pred)) !=
            ids.answers.end())
      ++cat.correct;
  }
  return detail::finalize_analogy(std::move(cats));
}

}  // namespace graphglove
