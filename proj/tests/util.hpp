#pragma once

// Shared helpers for the test suites.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "graphglove/cooccurrence.hpp"
#include "graphglove/stochastic_graph.hpp"

namespace testutil {

inline std::string scratch(const std::string& name) {
  static const std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() / "graphglove_tests";
    std::filesystem::create_directories(d);
    return d;
  }();
  return (dir / name).string();
}

// Fresh subdirectory under the scratch root, recreated empty on each call so
// stale artifacts from earlier runs cannot mask failures.
inline std::string scratch_dir(const std::string& name) {
  std::filesystem::path d = scratch(name);
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d.string();
}

// Build a SparseCooccurrence from explicit (i, j, x) triples; both
// orientations are stored, pass each unordered pair once.
inline graphglove::SparseCooccurrence make_cooc(
    uint32_t n_words, const std::vector<std::tuple<uint32_t, uint32_t, double>>& entries) {
  graphglove::SparseCooccurrence c;
  c.n_words = n_words;
  c.window = 10;
  c.rows.resize(n_words);
  for (const auto& [i, j, x] : entries) {
    c.rows[i].emplace_back(j, x);
    if (i != j) c.rows[j].emplace_back(i, x);
  }
  for (auto& row : c.rows) std::sort(row.begin(), row.end());
  c.recount();
  return c;
}

// Pruned graph from (u, v, w) triples.
inline graphglove::PrunedGraph make_pruned(
    uint32_t n, const std::vector<std::tuple<uint32_t, uint32_t, double>>& edges) {
  graphglove::PrunedGraph g;
  g.n_vertices = n;
  for (const auto& [u, v, w] : edges)
    g.edges.push_back({std::min(u, v), std::max(u, v), w});
  g.canonicalize();
  g.validate();
  return g;
}

// Stochastic graph with explicit effective weights and probabilities.
inline graphglove::StochasticGraph make_stochastic(
    uint32_t n_vertices, const std::vector<std::tuple<uint32_t, uint32_t, double, double>>& ewp,
    std::vector<double> bias = {}) {
  graphglove::StochasticGraph g;
  g.n_vertices = n_vertices;
  if (bias.empty()) bias.assign(n_vertices - 1, 0.0);
  g.bias = std::move(bias);
  for (const auto& [u, v, w, p] : ewp)
    g.edges.push_back({std::min(u, v), std::max(u, v), graphglove::inv_softplus(w),
                       graphglove::logit(p)});
  g.canonicalize();
  g.validate();
  return g;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace testutil
