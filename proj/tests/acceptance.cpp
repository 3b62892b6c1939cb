// Acceptance gate: one [PASS]/[FAIL] line per criterion, exit 0 only when all
// pass. Usage: acceptance <cli-binary> <data-dir> <scratch-dir>.
//
// Thresholds are pinned in code next to each criterion. The expensive
// criteria (planted-metric recovery, the lambda sweep, seed variance, the
// small-corpus end-to-end run) use fixed seeds so a failure is reproducible.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../tools/corpus_gen.hpp"
#include "graphglove/graphglove.hpp"
#include "oracles.hpp"

using namespace graphglove;
using Clock = std::chrono::steady_clock;

namespace {

std::string g_cli, g_data, g_scratch;

std::string strf(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, ap);
  va_end(ap);
  return buf;
}

std::string at(const std::string& name) { return g_scratch + "/" + name; }

// CLI invocations append stdout/stderr to scratch/cli.log for post-mortems.
int run_cli(const std::string& args) {
  std::string cmd = g_cli + " " + args + " >> " + at("cli.log") + " 2>&1";
  int status = std::system(cmd.c_str());
  return status == -1 ? -1 : WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Outcome {
  bool ok = false;
  std::string detail;
};

struct Gate {
  int failed = 0, total = 0;

  void run(const char* name, const std::function<Outcome()>& fn) {
    ++total;
    auto t0 = Clock::now();
    Outcome out;
    try {
      out = fn();
    } catch (const std::exception& e) {
      out = {false, strf("exception: %s", e.what())};
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("[%s] %-28s %s (%.1fs)\n", out.ok ? "PASS" : "FAIL", name, out.detail.c_str(),
                secs);
    std::fflush(stdout);
    if (!out.ok) ++failed;
  }
};

Vocabulary synthetic_vocab(uint32_t n, const char* prefix) {
  Vocabulary v;
  for (uint32_t i = 0; i < n; ++i) {
    v.tokens.push_back(prefix + std::to_string(i));
    v.freq.push_back(n - i);
  }
  v.rebuild_index();
  return v;
}

// ---------------------------------------------------------------------------
// Oracle equivalence

Outcome check_dijkstra_vs_floyd_warshall() {
  Rng rng(substream(11, 0xd1));
  uint64_t graphs = 0, pairs = 0;
  auto t0 = Clock::now();
  for (int g = 0; g < 500; ++g) {
    uint32_t n = 2 + static_cast<uint32_t>(rng.below(59));
    auto graph = oracle::random_connected_graph(rng, n, static_cast<uint32_t>(rng.below(2 * n)));
    auto fw = oracle::floyd_warshall(graph);
    Csr csr = csr_from(graph);
    for (uint32_t i = 0; i < n; ++i) {
      auto sp = dijkstra(csr, i);
      for (uint32_t j = 0; j < n; ++j, ++pairs)
        if (sp.dist[j] != fw[i][j])
          return {false, strf("graph %d: dist(%u,%u) %.17g != %.17g", g, i, j, sp.dist[j],
                              fw[i][j])};
    }
    ++graphs;
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return {secs < 30.0,
          strf("%llu graphs <=60 nodes, %llu pairs bit-exact, %.1fs (budget 30s)",
               (unsigned long long)graphs, (unsigned long long)pairs, secs)};
}

Outcome check_kcore_oracle() {
  Rng rng(substream(12, 0xc0));
  for (int g = 0; g < 200; ++g) {
    uint32_t n = 1 + static_cast<uint32_t>(rng.below(30));
    PrunedGraph graph;
    graph.n_vertices = n;
    if (n >= 2) {
      uint64_t tries = rng.below(2 * n + 1);
      std::set<std::pair<uint32_t, uint32_t>> used;
      for (uint64_t t = 0; t < tries; ++t) {
        uint32_t u = static_cast<uint32_t>(rng.below(n));
        uint32_t v = static_cast<uint32_t>(rng.below(n));
        if (u == v) continue;
        if (u > v) std::swap(u, v);
        if (used.insert({u, v}).second) graph.edges.push_back({u, v, 1.0});
      }
    }
    graph.canonicalize();
    auto expect = oracle::kcore_exhaustive(graph);
    auto got = k_core(graph);
    for (uint32_t v = 0; v < n; ++v)
      if (got.core[v] != expect[v])
        return {false, strf("graph %d: core(%u) = %u, oracle %u", g, v, got.core[v], expect[v])};
  }
  return {true, "200 graphs <=30 nodes match exhaustive peeling exactly"};
}

Outcome check_gromov_trees() {
  Rng rng(substream(13, 0x9e));
  uint64_t quads = 0;
  for (int t = 0; t < 100; ++t) {
    uint32_t n = 4 + static_cast<uint32_t>(rng.below(197));  // mixes exhaustive and sampled
    auto tree = oracle::random_dyadic_tree(rng, n);
    auto res = gromov_delta(tree, 3000, 1000 + t);
    quads += res.quadruples;
    if (res.mean_delta != 0.0)
      return {false, strf("tree %d (%u nodes): mean delta %.17g != 0", t, n, res.mean_delta)};
  }

  PrunedGraph cycle;
  cycle.n_vertices = 4;
  cycle.edges = {{0, 1, 1.0}, {0, 3, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}};
  cycle.canonicalize();
  auto res = gromov_delta(cycle, 1, 0);
  if (std::abs(res.mean_delta - 1.0) > 1e-12 || std::abs(res.normalized_delta - 0.75) > 1e-12)
    return {false, strf("unit 4-cycle: delta %.17g, normalized %.17g", res.mean_delta,
                        res.normalized_delta)};
  return {true, strf("100 trees, %llu quadruples all exactly 0; 4-cycle delta 1, normalized 0.75",
                     (unsigned long long)quads)};
}

Outcome check_spearman_oracle() {
  Rng rng(substream(14, 0x5e));
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    uint32_t n = 3 + static_cast<uint32_t>(rng.below(58));
    std::vector<double> x(n), y(n);
    do {
      for (auto& v : x) v = static_cast<double>(rng.below(6));  // heavy ties
    } while (*std::min_element(x.begin(), x.end()) == *std::max_element(x.begin(), x.end()));
    do {
      for (auto& v : y) v = static_cast<double>(rng.below(6)) + 0.5 * rng.below(2);
    } while (*std::min_element(y.begin(), y.end()) == *std::max_element(y.begin(), y.end()));
    double diff = std::abs(spearman(x, y) - oracle::spearman_quadratic(x, y));
    worst = std::max(worst, diff);
    if (diff > 1e-12)
      return {false, strf("vector %d (n=%u): |spearman - oracle| = %.3g", t, n, diff)};
  }
  return {true, strf("1000 tied vectors, max |diff| = %.2g (tolerance 1e-12)", worst)};
}

// ---------------------------------------------------------------------------
// Gradients

struct FdInstance {
  StochasticGraph graph;
  Batch batch;
  TrainConfig cfg;
  EdgeMask mask;
};

FdInstance random_fd_instance(Rng& rng, LossKind kind) {
  FdInstance inst;
  uint32_t words = 4 + static_cast<uint32_t>(rng.below(26));  // n_vertices <= 30
  StochasticGraph& g = inst.graph;
  g.n_vertices = words + 1;
  auto push = [&](uint32_t a, uint32_t b, double w) {
    g.edges.push_back({std::min(a, b), std::max(a, b), inv_softplus(w),
                       logit(rng.uniform(0.55, 0.95))});
  };
  for (uint32_t i = 1; i < words; ++i)
    push(static_cast<uint32_t>(rng.below(i)), i, rng.uniform(0.4, 1.8));
  for (uint32_t c = 0; c < words / 2; ++c) {
    uint32_t u = static_cast<uint32_t>(rng.below(words));
    uint32_t v = static_cast<uint32_t>(rng.below(words));
    bool dup = u == v;
    for (const auto& e : g.edges)
      dup = dup || (e.u == std::min(u, v) && e.v == std::max(u, v));
    if (!dup) push(u, v, rng.uniform(0.4, 1.8));
  }
  if (kind == LossKind::dot_product)
    for (uint32_t i = 0; i < words; ++i) push(i, words, rng.uniform(0.8, 1.5));
  g.bias.resize(words);
  for (auto& b : g.bias) b = rng.normal(0.0, 0.3);
  g.canonicalize();

  std::vector<uint32_t> anchors(words);
  std::iota(anchors.begin(), anchors.end(), 0);
  rng.partial_shuffle(anchors, 3);
  anchors.resize(3);
  std::sort(anchors.begin(), anchors.end());
  for (uint32_t a : anchors) {
    inst.batch.anchors.push_back(a);
    for (int c = 0; c < 3; ++c) {
      uint32_t j;
      do {
        j = static_cast<uint32_t>(rng.below(words));
      } while (j == a);
      inst.batch.pairs.push_back({a, j, rng.uniform(1.5, 80.0), 1.0, 1.0 / 9.0});
    }
  }

  inst.cfg.loss_kind = kind;
  inst.cfg.lambda = 0.0;
  inst.mask = sample_mask(g, rng.next_u64());
  return inst;
}

// Relative error with an absolute floor: parameters whose true gradient is
// near zero are roundoff-limited in the finite difference, so they are held
// to |analytic - fd| < 1e-3 * 1e-4 instead of a pure ratio.
double rel_err(double an, double fd) {
  return std::abs(an - fd) / std::max({1e-3, std::abs(an), std::abs(fd)});
}

Outcome check_pathwise_gradients() {
  const double h = 1e-5;
  double worst = 0.0;
  for (LossKind kind : {LossKind::distance, LossKind::dot_product}) {
    Rng rng(substream(15, kind == LossKind::distance ? 0xd1 : 0xd2));
    for (int t = 0; t < 100; ++t) {
      FdInstance inst = random_fd_instance(rng, kind);
      auto grads = estimate_gradients(inst.graph, inst.batch, inst.cfg, inst.mask, 0.0, false);
      auto loss_at = [&]() {
        return glove_graph_loss(inst.graph, inst.mask, inst.batch, inst.cfg).loss;
      };
      for (const auto& [e, an] : grads.theta_w) {
        double save = inst.graph.edges[e].theta_w;
        inst.graph.edges[e].theta_w = save + h;
        double up = loss_at();
        inst.graph.edges[e].theta_w = save - h;
        double dn = loss_at();
        inst.graph.edges[e].theta_w = save;
        worst = std::max(worst, rel_err(an, (up - dn) / (2 * h)));
      }
      for (const auto& [i, an] : grads.bias) {
        double save = inst.graph.bias[i];
        inst.graph.bias[i] = save + h;
        double up = loss_at();
        inst.graph.bias[i] = save - h;
        double dn = loss_at();
        inst.graph.bias[i] = save;
        worst = std::max(worst, rel_err(an, (up - dn) / (2 * h)));
      }
      if (worst >= 1e-4)
        return {false, strf("%s instance %d: max relative error %.3g",
                            kind == LossKind::distance ? "distance" : "dot", t, worst)};
    }
  }
  return {true, strf("2x100 instances, theta_w + biases, max relative error %.2g (gate 1e-4)",
                     worst)};
}

Outcome check_l0_gradient() {
  Rng rng(substream(16, 0x10));
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    FdInstance inst = random_fd_instance(rng, LossKind::distance);
    inst.cfg.lambda = rng.uniform(0.05, 2.0);
    auto grads = estimate_gradients(inst.graph, inst.batch, inst.cfg, inst.mask, 0.0, false);
    // no baseline history => score term is exactly zero, leaving only L0
    if (grads.theta_p.size() != inst.graph.edges.size())
      return {false, "lambda > 0 must produce a gradient for every edge"};
    const double scale = inst.cfg.lambda / static_cast<double>(inst.graph.edges.size());
    for (const auto& [e, an] : grads.theta_p) {
      double p = inst.graph.prob(e);
      worst = std::max(worst, std::abs(an - scale * p * (1.0 - p)));
    }
    // independent probe: the same component is the finite difference of the
    // regularizer lambda * mean edge probability
    uint32_t e0 = static_cast<uint32_t>(rng.below(inst.graph.edges.size()));
    const double h = 1e-5;
    auto reg = [&](double th) {
      StochasticGraph g = inst.graph;
      g.edges[e0].theta_p = th;
      return inst.cfg.lambda * g.mean_edge_prob();
    };
    double fd = (reg(inst.graph.edges[e0].theta_p + h) - reg(inst.graph.edges[e0].theta_p - h)) /
                (2 * h);
    if (std::abs(grads.theta_p[e0].second - fd) > 1e-8)
      return {false, strf("instance %d: L0 component %.3g vs regularizer fd %.3g", t,
                          grads.theta_p[e0].second, fd)};
  }
  return {worst <= 1e-10,
          strf("20 graphs, max |component - lambda/|E| p(1-p)| = %.2g (gate 1e-10)", worst)};
}

// ---------------------------------------------------------------------------
// Planted-metric task (shared by recovery, sweep, variance)

struct Planted {
  PrunedGraph tree;
  std::vector<std::vector<double>> d_tree;
  SparseCooccurrence cooc;
  DenseEmbedding emb;
};

Planted make_planted(uint32_t n, uint64_t seed) {
  Planted p;
  Rng rng(substream(seed, 0x706c616e74ULL));
  p.tree.n_vertices = n;
  for (uint32_t i = 1; i < n; ++i)
    p.tree.edges.push_back({static_cast<uint32_t>(rng.below(i)), i, rng.uniform(0.5, 1.5)});
  p.tree.canonicalize();

  Csr csr = csr_from(p.tree);
  double dmax = 0.0;
  p.d_tree.resize(n);
  for (uint32_t i = 0; i < n; ++i) {
    p.d_tree[i] = dijkstra(csr, i).dist;
    for (double d : p.d_tree[i]) dmax = std::max(dmax, d);
  }
  // log X_ij = C - d_tree(i,j) with C = max distance, so all X >= 1
  p.cooc.n_words = n;
  p.cooc.window = 1;
  p.cooc.rows.resize(n);
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j = 0; j < n; ++j)
      if (j != i) p.cooc.rows[i].emplace_back(j, std::exp(dmax - p.d_tree[i][j]));
  p.cooc.recount();
  p.emb = train_dense(p.cooc, 16, 40, 0.05, 99);
  return p;
}

TrainConfig planted_config(double lambda, double lr, uint64_t steps, uint64_t seed) {
  TrainConfig cfg;
  cfg.loss_kind = LossKind::distance;
  cfg.lambda = lambda;
  cfg.K = 8;
  cfg.M = 4;
  cfg.R = 0;
  cfg.b_anchors = 32;
  cfg.n_per_anchor = 99;
  cfg.lr = lr;
  cfg.steps = steps;
  cfg.seed = seed;
  return cfg;
}

double planted_spearman(const Planted& p, const PrunedGraph& g) {
  Csr csr = csr_from(g);
  std::vector<double> dg, dt;
  for (uint32_t i = 0; i < g.n_vertices; ++i) {
    auto sp = dijkstra(csr, i);
    for (uint32_t j = i + 1; j < g.n_vertices; ++j) {
      dg.push_back(sp.dist[j]);
      dt.push_back(p.d_tree[i][j]);
    }
  }
  return spearman(dg, dt);
}

Planted g_planted;  // built by the recovery criterion, reused afterwards

Outcome check_planted_recovery() {
  auto t0 = Clock::now();
  g_planted = make_planted(100, 4242);
  TrainConfig cfg = planted_config(0.0, 0.02, 15000, 99);
  auto trained = train(g_planted.cooc, init_graph(g_planted.emb, cfg), cfg);
  double rho = planted_spearman(g_planted, drop_last_vertex(prune(trained.graph)));
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  bool ok = rho >= 0.90 && secs < 600.0;
  return {ok, strf("spearman(d_G, d_tree) = %.4f over 4950 pairs (gate 0.90), %.0fs (budget "
                   "600s)",
                   rho, secs)};
}

Outcome check_sparsification() {
  // Higher lr than the recovery run so the L0 pressure is expressed within
  // 8000 steps; identical init and seed across the three lambdas.
  std::vector<double> mean_p;
  std::vector<uint64_t> kept;
  for (double lambda : {0.0, 0.1, 1.0}) {
    TrainConfig cfg = planted_config(lambda, 0.3, 8000, 99);
    auto trained = train(g_planted.cooc, init_graph(g_planted.emb, cfg), cfg);
    mean_p.push_back(trained.graph.mean_edge_prob());
    kept.push_back(trained.graph.kept_edge_count());
  }
  bool ok = mean_p[0] >= mean_p[1] && mean_p[1] >= mean_p[2] && kept[0] >= kept[1] &&
            kept[1] >= kept[2] && kept[0] > kept[2];
  return {ok, strf("lambda 0/0.1/1.0: mean p %.4f/%.4f/%.4f, kept %llu/%llu/%llu (strict "
                   "0 -> 1.0)",
                   mean_p[0], mean_p[1], mean_p[2], (unsigned long long)kept[0],
                   (unsigned long long)kept[1], (unsigned long long)kept[2])};
}

// ---------------------------------------------------------------------------
// End-to-end pipeline through the CLI

std::string e2e_dir;

Outcome check_small_corpus_e2e() {
  e2e_dir = at("e2e");
  std::filesystem::create_directories(e2e_dir);
  auto p = [&](const std::string& n) { return e2e_dir + "/" + n; };

  {
    corpusgen::CorpusSpec spec;  // seed 2024, ~10 MB
    std::ofstream out(p("corpus.txt"), std::ios::binary);
    corpusgen::generate_corpus(out, spec);
    if (!out) return {false, "failed writing the corpus"};
  }
  struct Step {
    const char* what;
    std::string args;
  };
  std::vector<Step> steps = {
      {"build-vocab", "build-vocab --corpus " + p("corpus.txt") + " --out " + p("vocab.tsv") +
                          " --max-size 5000 --min-count 5"},
      {"build-cooc", "build-cooc --corpus " + p("corpus.txt") + " --vocab " + p("vocab.tsv") +
                         " --out " + p("cooc.bin") + " --window 8 --workers 1"},
      {"train-dense", "train-dense --cooc " + p("cooc.bin") + " --vocab " + p("vocab.tsv") +
                          " --out " + p("emb.txt") + " --dim 64 --epochs 25 --lr 0.01 --seed 7"},
      {"init-graph", "init-graph --embedding " + p("emb.txt") + " --out " + p("init.gglv") +
                         " -K 10 -M 2 -R 0 --seed 7"},
      {"train-graph", "train-graph --cooc " + p("cooc.bin") + " --graph " + p("init.gglv") +
                          " --out " + p("trained.gglv") +
                          " --lambda 0.05 --lr 0.02 --b-anchors 64 --steps 1500 --seed 7"
                          " --log " + p("train.csv") + " --workers 1"},
      {"evaluate", "evaluate --rep graph --model " + p("trained.gglv") + " --vocab " +
                       p("vocab.tsv") + " --similarity " + g_data + "/ws353.tsv --oov skip"
                       " --out " + p("report.csv")},
      {"evaluate-dense", "evaluate --rep dense --model " + p("emb.txt") + " --vocab " +
                             p("vocab.tsv") + " --similarity " + g_data +
                             "/ws353.tsv --oov skip --out " + p("report_dense.csv")},
  };
  for (const auto& s : steps) {
    int rc = run_cli(s.args);
    if (rc != 0) return {false, strf("%s exited %d (see e2e cli.log)", s.what, rc)};
  }

  // smoothed loss: mean of the first vs last 50 log rows
  std::ifstream log(p("train.csv"));
  std::string line;
  std::getline(log, line);
  std::vector<double> losses;
  while (std::getline(log, line)) {
    auto c1 = line.find(','), c2 = line.find(',', line.find(',') + 1);
    losses.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
  }
  if (losses.size() < 100) return {false, "train log shorter than 100 rows"};
  double first = 0, last = 0;
  for (size_t i = 0; i < 50; ++i) {
    first += losses[i];
    last += losses[losses.size() - 50 + i];
  }
  double ratio = last / first;

  auto parse_spearman = [](const std::string& path, double& value, uint64_t& attempted,
                           uint64_t& skipped) {
    std::ifstream in(path);
    std::string row;
    std::getline(in, row);  // header
    while (std::getline(in, row)) {
      std::stringstream ss(row);
      std::string bench, metric, val, att, skp;
      std::getline(ss, bench, ',');
      std::getline(ss, metric, ',');
      std::getline(ss, val, ',');
      std::getline(ss, att, ',');
      std::getline(ss, skp, ',');
      if (bench == "ws353" && metric == "spearman") {
        value = std::stod(val);
        attempted = std::stoull(att);
        skipped = std::stoull(skp);
        return true;
      }
    }
    return false;
  };
  double graph_rho = 0, dense_rho = 0;
  uint64_t att = 0, skp = 0, datt = 0, dskp = 0;
  if (!parse_spearman(p("report.csv"), graph_rho, att, skp))
    return {false, "ws353 row missing from the graph report"};
  parse_spearman(p("report_dense.csv"), dense_rho, datt, dskp);

  auto vocab = load_vocabulary(p("vocab.tsv"));
  double ppt = parameters_per_token(drop_last_vertex(prune(load_graph(p("trained.gglv")))),
                                    vocab.size());

  bool ok = graph_rho > 0.20 && ratio < 0.5 && ppt <= 20.0;
  return {ok, strf("ws353 graph %.3f dense %.3f (gate >0.20, %llu pairs, %llu skipped); "
                   "smoothed loss x%.3f (gate <0.5); %.1f params/token (budget 20)",
                   graph_rho, dense_rho, (unsigned long long)att, (unsigned long long)skp, ratio,
                   ppt)};
}

// ---------------------------------------------------------------------------
// Estimator, reproducibility, variance

Outcome check_estimator_unbiasedness() {
  Rng rng(substream(17, 0xe5));
  const uint32_t n = 60;
  SparseCooccurrence cooc;
  cooc.n_words = n;
  cooc.window = 1;
  cooc.rows.resize(n);
  for (uint32_t i = 0; i < n; ++i) {
    uint32_t fan = 2 + static_cast<uint32_t>(rng.below(9));  // uneven rows
    for (uint32_t c = 0; c < fan; ++c) {
      uint32_t j = static_cast<uint32_t>(rng.below(n));
      if (j == i) continue;
      bool dup = false;
      for (const auto& [k, x] : cooc.rows[i]) dup = dup || k == j;
      if (dup) continue;
      double x = rng.uniform(1.0, 60.0);
      cooc.rows[i].emplace_back(j, x);
      cooc.rows[j].emplace_back(i, x);
    }
  }
  for (auto& row : cooc.rows) std::sort(row.begin(), row.end());
  cooc.recount();
  for (const auto& row : cooc.rows)
    if (row.empty()) return {false, "fixture must give every word a nonempty row"};

  // deterministic connected graph, every edge present
  StochasticGraph g;
  g.n_vertices = n + 1;
  for (uint32_t i = 1; i < n; ++i)
    g.edges.push_back({static_cast<uint32_t>(rng.below(i)), i,
                       inv_softplus(rng.uniform(0.4, 1.6)), logit(0.99)});
  for (uint32_t c = 0; c < n; ++c) {
    uint32_t u = static_cast<uint32_t>(rng.below(n)), v = static_cast<uint32_t>(rng.below(n));
    bool dup = u == v;
    for (const auto& e : g.edges)
      dup = dup || (e.u == std::min(u, v) && e.v == std::max(u, v));
    if (!dup)
      g.edges.push_back({std::min(u, v), std::max(u, v), inv_softplus(rng.uniform(0.4, 1.6)),
                         logit(0.99)});
  }
  g.bias.resize(n);
  for (auto& b : g.bias) b = rng.normal(0.0, 0.2);
  g.canonicalize();

  EdgeMask all_present;
  all_present.present.assign(g.edges.size(), 1);

  TrainConfig cfg;
  cfg.loss_kind = LossKind::distance;
  cfg.b_anchors = 8;
  cfg.n_per_anchor = 3;

  // exact full sum over every stored (i, j, x) cell
  Csr csr = csr_from(g, all_present);
  double full = 0.0;
  for (uint32_t i = 0; i < n; ++i) {
    auto sp = dijkstra(csr, i);
    for (const auto& [j, x] : cooc.rows[i]) {
      double err = -sp.dist[j] + g.bias[i] + g.bias[j] - std::log(x);
      full += glove_weight(x, cfg.x_max, cfg.alpha) * err * err;
    }
  }

  const uint64_t batches = 100000;
  double mean_est = 0.0;
  for (uint64_t b = 0; b < batches; ++b) {
    Batch batch = sample_batch(cooc, cfg, substream(4096, 0xba7c, b));
    mean_est += glove_graph_loss(g, all_present, batch, cfg).loss;
  }
  mean_est /= static_cast<double>(batches);
  double est_full = mean_est * static_cast<double>(cooc.nnz_total);
  double rel = std::abs(est_full - full) / full;
  return {rel <= 0.02, strf("1e5 batches: estimate %.4f vs full sum %.4f, relative error %.4f "
                            "(gate 0.02)",
                            est_full, full, rel)};
}

Outcome check_reproducibility() {
  if (e2e_dir.empty()) return {false, "end-to-end artifacts unavailable"};
  auto p = [&](const std::string& n) { return e2e_dir + "/" + n; };
  for (const char* tag : {"ra", "rb"}) {
    int rc = run_cli("train-graph --cooc " + p("cooc.bin") + " --graph " + p("init.gglv") +
                     " --out " + p(std::string(tag) + ".gglv") +
                     " --lambda 0.05 --lr 0.02 --b-anchors 64 --steps 150 --seed 31"
                     " --workers 1");
    if (rc != 0) return {false, strf("train-graph (%s) exited %d", tag, rc)};
  }
  bool graphs_equal = slurp(p("ra.gglv")) == slurp(p("rb.gglv"));
  bool states_equal = slurp(p("ra.gglv.state")) == slurp(p("rb.gglv.state"));
  if (!graphs_equal || !states_equal)
    return {false, strf("checkpoint bytes differ (graph %s, state %s)",
                        graphs_equal ? "equal" : "DIFFER", states_equal ? "equal" : "DIFFER")};
  return {true, "two seed-31 runs: checkpoint and optimizer state byte-identical"};
}

Outcome check_seed_variance() {
  // planted task driven through the CLI variance subcommand
  auto dir = at("variance");
  std::filesystem::create_directories(dir);
  auto p = [&](const std::string& n) { return dir + "/" + n; };

  auto vocab = synthetic_vocab(100, "w");
  save_vocabulary(p("vocab.tsv"), vocab);
  save_cooccurrence(p("cooc.bin"), g_planted.cooc);
  save_embedding(p("emb.txt"), g_planted.emb, vocab);
  {
    std::ofstream bench(p("tree.tsv"));
    bench << "word1\tword2\tscore\n";
    for (uint32_t i = 0; i < 100; ++i)
      for (uint32_t j = i + 1; j < 100; ++j)
        bench << "w" << i << "\tw" << j << '\t' << fmt_double(-g_planted.d_tree[i][j]) << '\n';
  }
  int rc = run_cli("variance --cooc " + p("cooc.bin") + " --embedding " + p("emb.txt") +
                   " --vocab " + p("vocab.tsv") + " --similarity " + p("tree.tsv") +
                   " --seeds 201,202,203,204,205 --steps 10000 --lr 0.02 -K 8 -M 4 -R 0"
                   " --b-anchors 32 --n-per-anchor 99 --out " + p("var.csv") + " --workers 1");
  if (rc != 0) return {false, strf("variance exited %d", rc)};

  std::ifstream in(p("var.csv"));
  std::string line;
  double mean = 0, std_dev = -1;
  while (std::getline(in, line)) {
    if (line.rfind("mean,", 0) == 0) mean = std::stod(line.substr(line.rfind(',') + 1));
    if (line.rfind("std,", 0) == 0) std_dev = std::stod(line.substr(line.rfind(',') + 1));
  }
  if (std_dev < 0) return {false, "std row missing from the variance report"};
  return {std_dev < 0.05, strf("5 seeds: spearman(d_G, d_tree) mean %.4f, std %.4f (gate "
                               "<0.05)",
                               mean, std_dev)};
}

// ---------------------------------------------------------------------------
// Analysis self-consistency

Outcome check_hierarchy_self_consistency() {
  Rng rng(substream(18, 0x8a));
  auto tree = oracle::random_dyadic_tree(rng, 40);
  auto vocab = synthetic_vocab(40, "n");
  Taxonomy tax;
  tax.root = "n0";
  for (const auto& e : tree.edges) {
    tax.edges.emplace_back("n" + std::to_string(e.v), "n" + std::to_string(e.u));
    tax.children["n" + std::to_string(e.u)].push_back("n" + std::to_string(e.v));
  }
  auto levels = extract_hierarchy(tree, vocab, tax);
  auto corr = hierarchy_correlations(levels.ours, levels.theirs);
  bool ok = corr.word_correlation == 1.0 && corr.level_correlation == 1.0;
  return {ok, strf("taxonomy as its own graph: word %.17g, level %.17g (both exactly 1)",
                   corr.word_correlation, corr.level_correlation)};
}

Outcome check_thr_knn_density() {
  Rng rng(substream(19, 0x7d));
  DenseEmbedding emb;
  emb.dim = 8;
  const uint32_t n = 200;
  emb.w.resize(n * emb.dim);
  emb.w_tilde.resize(n * emb.dim);
  emb.b.assign(n, 0.0);
  emb.b_tilde.assign(n, 0.0);
  for (auto& x : emb.w) x = rng.normal(0.0, 1.0);
  for (auto& x : emb.w_tilde) x = rng.normal(0.0, 1.0);
  emb.refresh_combined();

  InducedGraphSpec knn_spec;
  knn_spec.mode = InducedGraphSpec::Mode::knn;
  knn_spec.k = 6;
  size_t knn_edges = induce_graph(emb, knn_spec).edges.size();

  InducedGraphSpec thr_spec;
  thr_spec.mode = InducedGraphSpec::Mode::thr;
  thr_spec.tau = calibrate_tau(emb, 6);
  size_t thr_edges = induce_graph(emb, thr_spec).edges.size();

  double gap = std::abs(static_cast<double>(thr_edges) - static_cast<double>(knn_edges)) /
               static_cast<double>(knn_edges);
  return {gap <= 0.10, strf("knn(6) %zu edges vs thr(tau=%.4f) %zu edges: density gap %.1f%% "
                            "(gate 10%%)",
                            knn_edges, thr_spec.tau, thr_edges, gap * 100.0)};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 4) {
    std::fprintf(stderr, "usage: acceptance <cli-binary> <data-dir> <scratch-dir>\n");
    return 1;
  }
  g_cli = argv[1];
  g_data = argv[2];
  g_scratch = argv[3];
  std::filesystem::remove_all(g_scratch);
  std::filesystem::create_directories(g_scratch);

  Gate gate;
  gate.run("dijkstra-vs-floyd-warshall", check_dijkstra_vs_floyd_warshall);
  gate.run("kcore-oracle", check_kcore_oracle);
  gate.run("gromov-tree-delta", check_gromov_trees);
  gate.run("spearman-oracle", check_spearman_oracle);
  gate.run("pathwise-gradients", check_pathwise_gradients);
  gate.run("l0-gradient", check_l0_gradient);
  gate.run("planted-metric-recovery", check_planted_recovery);
  gate.run("sparsification-sweep", check_sparsification);
  gate.run("small-corpus-e2e", check_small_corpus_e2e);
  gate.run("estimator-unbiasedness", check_estimator_unbiasedness);
  gate.run("reproducibility", check_reproducibility);
  gate.run("seed-variance", check_seed_variance);
  gate.run("hierarchy-self-consistency", check_hierarchy_self_consistency);
  gate.run("thr-knn-density", check_thr_knn_density);

  std::printf("acceptance: %d/%d criteria passed\n", gate.total - gate.failed, gate.total);
  return gate.failed == 0 ? 0 : 1;
}
