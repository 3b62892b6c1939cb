// Pipeline driver: corpus -> vocabulary -> co-occurrence -> dense vectors ->
// graph init -> graph training -> evaluation / analysis / exports.
//
// Exit codes: 0 success, 1 usage error, 2 data-format error, 3 numerical
// failure. Every artifact-producing subcommand writes a manifest
// (`<output>.manifest.json`) carrying config, seed, and input digests.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "graphglove/graphglove.hpp"

namespace gg = graphglove;
namespace fs = std::filesystem;

namespace {

std::string joined_command(int argc, char** argv) {
  std::string cmd;
  for (int i = 0; i < argc; ++i) {
    if (i) cmd.push_back(' ');
    cmd += argv[i];
  }
  return cmd;
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

// Loads a trained graph and reduces it to word nodes for evaluation/analysis:
// pruning drops low-probability edges, and the auxiliary zero vertex (present
// when the graph was initialized with a dot-product fan-out slot) is removed.
gg::PrunedGraph word_graph(const std::string& path, size_t vocab_size) {
  auto pruned = gg::prune(gg::load_graph(path));
  if (pruned.n_vertices == vocab_size + 1) pruned = gg::drop_last_vertex(pruned);
  if (pruned.n_vertices != vocab_size)
    throw std::invalid_argument("graph at " + path + " does not match the vocabulary size");
  return pruned;
}

struct EvalRow {
  std::string benchmark, metric;
  double value;
  uint64_t attempted, skipped;
};

void write_eval_report(const std::string& path, const std::vector<EvalRow>& rows) {
  auto out = gg::open_output(path);
  out << "benchmark,metric,value,attempted,skipped\n";
  for (const auto& r : rows)
    out << r.benchmark << ',' << r.metric << ',' << gg::fmt_double(r.value) << ',' << r.attempted
        << ',' << r.skipped << '\n';
}

void append_analogy_rows(std::vector<EvalRow>& rows, const std::string& name,
                         const gg::AnalogyResult& res) {
  rows.push_back({name, "accuracy", res.accuracy, res.attempted, res.skipped});
  for (const auto& cat : res.per_category) {
    double acc = cat.attempted ? static_cast<double>(cat.correct) / cat.attempted : 0.0;
    rows.push_back({name + ":" + cat.name, "accuracy", acc, cat.attempted, cat.skipped});
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph word representations: training and analysis pipeline"};
  app.require_subcommand(1);
  app.fallthrough();  // lets global flags (--workers) appear after the subcommand
  app.set_config("--config", "", "read defaults from a TOML/INI file (flags override)");

  uint32_t workers = std::max(1u, std::thread::hardware_concurrency());
  app.add_option("--workers", workers, "worker threads (1 = bitwise-reproducible)")
      ->capture_default_str();

  const std::string command_line = joined_command(argc, argv);

  // ---------------------------------------------------------------- build-vocab
  struct VocabOpts {
    std::string corpus, out;
    uint64_t max_size = 400000, min_count = 5;
  };
  auto vo = std::make_shared<VocabOpts>();
  {
    auto* sc = app.add_subcommand("build-vocab", "count tokens and keep the most frequent");
    sc->add_option("--corpus", vo->corpus, "tokenized text, one sentence per line")->required();
    sc->add_option("--out", vo->out, "vocabulary TSV")->required();
    sc->add_option("--max-size", vo->max_size)->capture_default_str();
    sc->add_option("--min-count", vo->min_count)->capture_default_str();
    sc->callback([=] {
      auto vocab = gg::build_vocabulary_file(vo->corpus, vo->max_size, vo->min_count);
      gg::save_vocabulary(vo->out, vocab);
      gg::write_manifest(vo->out, command_line,
                         {{"max_size", std::to_string(vo->max_size)},
                          {"min_count", std::to_string(vo->min_count)}},
                         0, {vo->corpus}, {vo->out});
      std::printf("vocabulary: %zu tokens\n", vocab.size());
    });
  }

  // ----------------------------------------------------------------- build-cooc
  struct CoocOpts {
    std::string corpus, vocab, out;
    uint32_t window = 8;
  };
  auto co = std::make_shared<CoocOpts>();
  {
    auto* sc = app.add_subcommand("build-cooc", "windowed co-occurrence counts");
    sc->add_option("--corpus", co->corpus)->required();
    sc->add_option("--vocab", co->vocab)->required();
    sc->add_option("--out", co->out, "binary co-occurrence matrix")->required();
    sc->add_option("--window", co->window, "symmetric window, 1/d weighting")
        ->capture_default_str();
    sc->callback([=, &workers] {
      auto vocab = gg::load_vocabulary(co->vocab);
      auto in = gg::open_input(co->corpus);
      auto cooc = gg::build_cooccurrence_sharded(in, vocab, co->window, workers);
      gg::save_cooccurrence(co->out, cooc);
      gg::write_manifest(co->out, command_line,
                         {{"window", std::to_string(co->window)},
                          {"workers", std::to_string(workers)}},
                         0, {co->corpus, co->vocab}, {co->out});
      std::printf("cooccurrence: %llu nonzero cells\n",
                  static_cast<unsigned long long>(cooc.nnz_total));
    });
  }

  // ---------------------------------------------------------------- train-dense
  struct DenseOpts {
    std::string cooc, vocab, out, log;
    uint32_t dim = 64, epochs = 25;
    double lr = 0.01, x_max = 100.0, alpha = 0.75;
    uint64_t seed = 1;
  };
  auto dn = std::make_shared<DenseOpts>();
  {
    auto* sc = app.add_subcommand("train-dense", "dense GloVe baseline vectors");
    sc->add_option("--cooc", dn->cooc)->required();
    sc->add_option("--vocab", dn->vocab)->required();
    sc->add_option("--out", dn->out, "embedding text file (+ .bias sidecar)")->required();
    sc->add_option("--dim", dn->dim)->capture_default_str();
    sc->add_option("--epochs", dn->epochs)->capture_default_str();
    sc->add_option("--lr", dn->lr)->capture_default_str();
    sc->add_option("--x-max", dn->x_max)->capture_default_str();
    sc->add_option("--alpha", dn->alpha)->capture_default_str();
    sc->add_option("--seed", dn->seed)->capture_default_str();
    sc->add_option("--log", dn->log, "epoch loss CSV");
    sc->callback([=] {
      auto vocab = gg::load_vocabulary(dn->vocab);
      auto cooc = gg::load_cooccurrence(dn->cooc);
      std::vector<double> losses;
      auto emb = gg::train_dense(cooc, dn->dim, dn->epochs, dn->lr, dn->seed, &losses, dn->x_max,
                                 dn->alpha);
      gg::save_embedding(dn->out, emb, vocab);
      std::vector<std::string> outputs{dn->out, dn->out + ".bias"};
      if (!dn->log.empty()) {
        auto log = gg::open_output(dn->log);
        log << "epoch,loss\n";
        for (size_t e = 0; e < losses.size(); ++e)
          log << e << ',' << gg::fmt_double(losses[e]) << '\n';
        outputs.push_back(dn->log);
      }
      gg::write_manifest(dn->out, command_line,
                         {{"dim", std::to_string(dn->dim)},
                          {"epochs", std::to_string(dn->epochs)},
                          {"lr", gg::fmt_double(dn->lr)},
                          {"x_max", gg::fmt_double(dn->x_max)},
                          {"alpha", gg::fmt_double(dn->alpha)}},
                         dn->seed, {dn->cooc, dn->vocab}, outputs);
      std::printf("dense training: epoch loss %s -> %s\n", gg::fmt_double(losses.front()).c_str(),
                  gg::fmt_double(losses.back()).c_str());
    });
  }

  // ----------------------------------------------------------------- init-graph
  struct InitOpts {
    std::string embedding, out;
    gg::TrainConfig cfg;
  };
  auto io = std::make_shared<InitOpts>();
  {
    auto* sc = app.add_subcommand("init-graph", "nearest-neighbor graph from dense vectors");
    sc->add_option("--embedding", io->embedding)->required();
    sc->add_option("--out", io->out, "stochastic graph file")->required();
    sc->add_option("-K,--knn", io->cfg.K, "nearest-neighbor edges per word")
        ->capture_default_str();
    sc->add_option("-M,--random-edges", io->cfg.M, "random edges per word")->capture_default_str();
    sc->add_option("-R,--zero-fanout", io->cfg.R, "zero-node edges (dot-product anchor)")
        ->capture_default_str();
    sc->add_option("--init-p", io->cfg.init_p, "initial edge probability")->capture_default_str();
    sc->add_option("--zero-edge-weight", io->cfg.zero_edge_weight)->capture_default_str();
    sc->add_option("--weight-lo", io->cfg.init_weight_lo)->capture_default_str();
    sc->add_option("--weight-hi", io->cfg.init_weight_hi)->capture_default_str();
    sc->add_option("--seed", io->cfg.seed)->capture_default_str();
    sc->callback([=] {
      auto emb = gg::load_embedding(io->embedding);
      auto graph = gg::init_graph(emb, io->cfg);
      gg::save_graph(io->out, graph);
      gg::write_manifest(io->out, command_line,
                         {{"K", std::to_string(io->cfg.K)},
                          {"M", std::to_string(io->cfg.M)},
                          {"R", std::to_string(io->cfg.R)},
                          {"init_p", gg::fmt_double(io->cfg.init_p)},
                          {"weight_lo", gg::fmt_double(io->cfg.init_weight_lo)},
                          {"weight_hi", gg::fmt_double(io->cfg.init_weight_hi)}},
                         io->cfg.seed, {io->embedding}, {io->out});
      std::printf("graph: %zu vertices, %zu edges, %s params/token\n",
                  static_cast<size_t>(graph.n_vertices), graph.edges.size(),
                  gg::fmt_double(gg::parameters_per_token(gg::prune(graph), emb.size())).c_str());
    });
  }

  // ---------------------------------------------------------------- train-graph
  struct TrainOpts {
    std::string cooc, graph, out, log, state, resume;
    gg::TrainConfig cfg;
  };
  auto tr = std::make_shared<TrainOpts>();
  {
    auto* sc = app.add_subcommand("train-graph", "stochastic-graph training");
    sc->add_option("--cooc", tr->cooc)->required();
    sc->add_option("--graph", tr->graph, "initial graph")->required();
    sc->add_option("--out", tr->out, "trained graph")->required();
    sc->add_option("--loss", tr->cfg.loss_kind, "objective")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, gg::LossKind>{{"distance", gg::LossKind::distance},
                                                {"dot", gg::LossKind::dot_product}}))
        ->default_str("distance");
    sc->add_option("--lambda", tr->cfg.lambda, "edge-probability penalty")->capture_default_str();
    sc->add_option("--steps", tr->cfg.steps, "total step horizon (resume continues toward it)")
        ->capture_default_str();
    sc->add_option("--b-anchors", tr->cfg.b_anchors)->capture_default_str();
    sc->add_option("--n-per-anchor", tr->cfg.n_per_anchor)->capture_default_str();
    sc->add_option("--lr", tr->cfg.lr)->capture_default_str();
    sc->add_option("--beta1", tr->cfg.beta1)->capture_default_str();
    sc->add_option("--beta2", tr->cfg.beta2)->capture_default_str();
    sc->add_option("--adam-eps", tr->cfg.adam_eps)->capture_default_str();
    sc->add_option("--x-max", tr->cfg.x_max)->capture_default_str();
    sc->add_option("--alpha", tr->cfg.alpha)->capture_default_str();
    sc->add_option("--seed", tr->cfg.seed)->capture_default_str();
    sc->add_option("--target-ppt", tr->cfg.target_ppt, "stop once params/token prunes this low")
        ->capture_default_str();
    sc->add_option("--baseline-momentum", tr->cfg.baseline_momentum)->capture_default_str();
    sc->add_option("--log", tr->log, "per-step training log CSV");
    sc->add_option("--state", tr->state, "optimizer state output (default <out>.state)");
    sc->add_option("--resume-state", tr->resume, "optimizer state to resume from");
    sc->callback([=, &workers] {
      auto cooc = gg::load_cooccurrence(tr->cooc);
      auto init = gg::load_graph(tr->graph);
      gg::TrainConfig cfg = tr->cfg;
      cfg.workers = workers;

      gg::TrainState state;
      if (!tr->resume.empty()) {
        auto in = gg::open_input(tr->resume, std::ios::binary);
        state.load(in);
      }
      std::unique_ptr<std::ofstream> log;
      if (!tr->log.empty())
        log = std::make_unique<std::ofstream>(gg::open_output(tr->log));

      auto result = gg::train(cooc, init, cfg, log.get(), &state);
      gg::save_graph(tr->out, result.graph);
      std::string state_path = tr->state.empty() ? tr->out + ".state" : tr->state;
      {
        auto out = gg::open_output(state_path, std::ios::binary);
        state.save(out);
      }

      std::vector<std::string> inputs{tr->cooc, tr->graph};
      if (!tr->resume.empty()) inputs.push_back(tr->resume);
      std::vector<std::string> outputs{tr->out, state_path};
      if (!tr->log.empty()) outputs.push_back(tr->log);
      gg::write_manifest(tr->out, command_line,
                         {{"loss", tr->cfg.loss_kind == gg::LossKind::distance ? "distance"
                                                                               : "dot"},
                          {"lambda", gg::fmt_double(cfg.lambda)},
                          {"steps", std::to_string(cfg.steps)},
                          {"b_anchors", std::to_string(cfg.b_anchors)},
                          {"n_per_anchor", std::to_string(cfg.n_per_anchor)},
                          {"lr", gg::fmt_double(cfg.lr)},
                          {"target_ppt", gg::fmt_double(cfg.target_ppt)},
                          {"workers", std::to_string(workers)}},
                         cfg.seed, inputs, outputs);

      const auto& last = result.log.back();
      std::printf("trained to step %llu: loss %s, mean edge prob %s, kept edges %llu\n",
                  static_cast<unsigned long long>(state.next_step),
                  gg::fmt_double(last.loss).c_str(), gg::fmt_double(last.mean_edge_prob).c_str(),
                  static_cast<unsigned long long>(last.pruned_edge_count));
    });
  }

  // ------------------------------------------------------------------- evaluate
  struct EvalOpts {
    std::string rep, model, vocab, bats, out;
    std::vector<std::string> similarity, analogy;
    gg::OovPolicy oov = gg::OovPolicy::skip;
  };
  auto ev = std::make_shared<EvalOpts>();
  {
    auto* sc = app.add_subcommand("evaluate", "similarity and analogy benchmarks");
    sc->add_option("--rep", ev->rep, "representation")
        ->required()
        ->check(CLI::IsMember({"graph", "dense"}));
    sc->add_option("--model", ev->model, "graph file or embedding file")->required();
    sc->add_option("--vocab", ev->vocab)->required();
    sc->add_option("--similarity", ev->similarity, "similarity TSV (repeatable)");
    sc->add_option("--analogy", ev->analogy, "Google-format analogy file (repeatable)");
    sc->add_option("--bats", ev->bats, "BATS directory");
    sc->add_option("--oov", ev->oov, "out-of-vocabulary policy")
        ->transform(CLI::CheckedTransformer(std::map<std::string, gg::OovPolicy>{
            {"skip", gg::OovPolicy::skip}, {"infer", gg::OovPolicy::infer}}))
        ->default_str("skip");
    sc->add_option("--out", ev->out, "report CSV")->required();
    sc->callback([=] {
      auto vocab = gg::load_vocabulary(ev->vocab);
      if (ev->similarity.empty() && ev->analogy.empty() && ev->bats.empty())
        throw std::invalid_argument("evaluate: no benchmarks given");

      std::vector<EvalRow> rows;
      std::vector<std::string> inputs{ev->model, ev->vocab};

      auto eval_all = [&](auto&& rep) {
        for (const auto& path : ev->similarity) {
          auto bench = gg::load_similarity_benchmark(path);
          auto res = gg::similarity_eval(rep, vocab, bench, ev->oov);
          rows.push_back({stem_of(path), "spearman", res.spearman, res.used, res.skipped});
          inputs.push_back(path);
        }
        for (const auto& path : ev->analogy) {
          auto bench = gg::load_google_analogies(path);
          append_analogy_rows(rows, stem_of(path), gg::analogy_eval(rep, vocab, bench));
          inputs.push_back(path);
        }
        if (!ev->bats.empty()) {
          auto bench = gg::load_bats_directory(ev->bats);
          append_analogy_rows(rows, "bats", gg::analogy_eval(rep, vocab, bench));
        }
      };

      if (ev->rep == "graph") {
        eval_all(word_graph(ev->model, vocab.size()));
      } else {
        auto emb = gg::load_embedding(ev->model);
        if (emb.size() != vocab.size())
          throw std::invalid_argument("evaluate: embedding does not match vocabulary size");
        eval_all(emb);
      }

      write_eval_report(ev->out, rows);
      gg::write_manifest(ev->out, command_line,
                         {{"rep", ev->rep},
                          {"oov", ev->oov == gg::OovPolicy::skip ? "skip" : "infer"}},
                         0, inputs, {ev->out});
      for (const auto& r : rows)
        std::printf("%s %s = %s (attempted %llu, skipped %llu)\n", r.benchmark.c_str(),
                    r.metric.c_str(), gg::fmt_double(r.value).c_str(),
                    static_cast<unsigned long long>(r.attempted),
                    static_cast<unsigned long long>(r.skipped));
    });
  }

  // -------------------------------------------------------------------- analyze
  struct AnalyzeOpts {
    std::string graph, embedding, vocab, taxonomy, out_dir;
    std::string induce = "knn";
    double tau = 0.0;
    uint32_t k = 20;
    uint32_t top = 25;
    uint32_t cw_iterations = 50;
    double affinity_beta = 1.0;
    double eigen_tol = 1e-10;
    uint32_t eigen_max_iter = 100000;
    uint64_t gromov_samples = 100000;
    uint64_t seed = 1;
  };
  auto an = std::make_shared<AnalyzeOpts>();
  {
    auto* sc = app.add_subcommand("analyze", "structure reports on a word graph");
    auto* g = sc->add_option("--graph", an->graph, "trained graph file");
    auto* e = sc->add_option("--embedding", an->embedding, "dense vectors to induce a graph from");
    g->excludes(e);
    sc->add_option("--vocab", an->vocab)->required();
    sc->add_option("--out-dir", an->out_dir)->required();
    sc->add_option("--induce", an->induce, "induction mode for --embedding")
        ->check(CLI::IsMember({"thr", "knn"}));
    sc->add_option("--tau", an->tau, "cosine-distance threshold for thr induction");
    sc->add_option("-k,--induce-k", an->k, "neighbors for knn induction")->capture_default_str();
    sc->add_option("--top", an->top, "rows in centrality reports")->capture_default_str();
    sc->add_option("--taxonomy", an->taxonomy, "taxonomy TSV enabling hierarchy report");
    sc->add_option("--cw-iterations", an->cw_iterations)->capture_default_str();
    sc->add_option("--affinity-beta", an->affinity_beta)->capture_default_str();
    sc->add_option("--gromov-samples", an->gromov_samples)->capture_default_str();
    sc->add_option("--seed", an->seed)->capture_default_str();
    sc->callback([=] {
      if (an->graph.empty() == an->embedding.empty())
        throw std::invalid_argument("analyze: exactly one of --graph/--embedding is required");
      auto vocab = gg::load_vocabulary(an->vocab);

      gg::PrunedGraph graph;
      std::vector<std::string> inputs{an->vocab};
      if (!an->graph.empty()) {
        graph = word_graph(an->graph, vocab.size());
        inputs.push_back(an->graph);
      } else {
        auto emb = gg::load_embedding(an->embedding);
        if (emb.size() != vocab.size())
          throw std::invalid_argument("analyze: embedding does not match vocabulary size");
        gg::InducedGraphSpec spec;
        if (an->induce == "knn") {
          spec.mode = gg::InducedGraphSpec::Mode::knn;
          spec.k = an->k;
        } else {
          spec.mode = gg::InducedGraphSpec::Mode::thr;
          spec.tau = an->tau;
        }
        graph = gg::induce_graph(emb, spec);
        inputs.push_back(an->embedding);
      }

      fs::create_directories(an->out_dir);
      auto out_path = [&](const char* name) { return (fs::path(an->out_dir) / name).string(); };
      std::vector<std::string> outputs;

      uint32_t top = std::min<uint32_t>(an->top, graph.n_vertices);
      {
        auto rows = gg::degree_centrality_top(graph, vocab, top);
        auto out = gg::open_output(out_path("centrality_degree.csv"));
        out << "rank,word,score,freq_percentile\n";
        for (const auto& r : rows)
          out << r.rank << ',' << vocab.tokens[r.word] << ',' << gg::fmt_double(r.score) << ','
              << gg::fmt_double(r.freq_percentile) << '\n';
        outputs.push_back(out_path("centrality_degree.csv"));
      }
      {
        auto scores = gg::eigenvector_centrality(graph, an->eigen_tol, an->eigen_max_iter);
        std::vector<uint32_t> order(scores.size());
        std::iota(order.begin(), order.end(), 0u);
        std::stable_sort(order.begin(), order.end(),
                         [&](uint32_t a, uint32_t b) { return scores[a] > scores[b]; });
        auto pct = gg::frequency_percentiles(vocab);
        auto out = gg::open_output(out_path("centrality_eigen.csv"));
        out << "rank,word,score,freq_percentile\n";
        for (uint32_t r = 0; r < top; ++r) {
          uint32_t w = order[r];
          out << (r + 1) << ',' << vocab.tokens[w] << ',' << gg::fmt_double(scores[w]) << ','
              << gg::fmt_double(pct[w]) << '\n';
        }
        outputs.push_back(out_path("centrality_eigen.csv"));
      }
      {
        auto cores = gg::k_core(graph);
        auto out = gg::open_output(out_path("kcore.csv"));
        out << "k_max,size\n"
            << cores.k_max << ',' << cores.main_core.size() << '\n';
        outputs.push_back(out_path("kcore.csv"));
      }
      auto clusters = gg::chinese_whispers(graph, an->cw_iterations, an->seed, an->affinity_beta);
      {
        auto out = gg::open_output(out_path("clusters.tsv"));
        for (uint32_t v = 0; v < graph.n_vertices; ++v)
          out << vocab.tokens[v] << '\t' << clusters.assignment[v] << '\n';
        outputs.push_back(out_path("clusters.tsv"));
      }
      {
        auto out = gg::open_output(out_path("hyperbolicity.csv"));
        out << "cluster_id,size,mean_delta,normalized_delta\n";
        for (uint32_t c = 0; c < clusters.clusters.size(); ++c) {
          const auto& members = clusters.clusters[c];
          if (members.size() < 10) continue;  // too small for a stable estimate
          auto sub = gg::induced_subgraph(graph, members);
          try {
            auto gd = gg::gromov_delta(sub, an->gromov_samples, an->seed);
            out << c << ',' << members.size() << ',' << gg::fmt_double(gd.mean_delta) << ','
                << gg::fmt_double(gd.normalized_delta) << '\n';
          } catch (const std::invalid_argument&) {
            // cluster's largest component has fewer than 4 nodes; nothing to report
          }
        }
        outputs.push_back(out_path("hyperbolicity.csv"));
      }
      if (!an->taxonomy.empty()) {
        auto tax = gg::load_taxonomy(an->taxonomy);
        auto levels = gg::extract_hierarchy(graph, vocab, tax);
        auto corr = gg::hierarchy_correlations(levels.ours, levels.theirs);
        auto out = gg::open_output(out_path("hierarchy.csv"));
        out << "word_corr,level_corr\n"
            << gg::fmt_double(corr.word_correlation) << ','
            << gg::fmt_double(corr.level_correlation) << '\n';
        outputs.push_back(out_path("hierarchy.csv"));
        inputs.push_back(an->taxonomy);
      }

      gg::write_manifest((fs::path(an->out_dir) / "analysis").string(), command_line,
                         {{"top", std::to_string(an->top)},
                          {"cw_iterations", std::to_string(an->cw_iterations)},
                          {"affinity_beta", gg::fmt_double(an->affinity_beta)},
                          {"gromov_samples", std::to_string(an->gromov_samples)},
                          {"induce", an->graph.empty() ? an->induce : "none"}},
                         an->seed, inputs, outputs);
      std::printf("analysis reports in %s (%zu clusters)\n", an->out_dir.c_str(),
                  clusters.clusters.size());
    });
  }

  // --------------------------------------------------------------- export-edges
  struct ExportOpts {
    std::string graph, out;
  };
  auto ex = std::make_shared<ExportOpts>();
  {
    auto* sc = app.add_subcommand("export-edges", "pruned edge list as TSV");
    sc->add_option("--graph", ex->graph)->required();
    sc->add_option("--out", ex->out)->required();
    sc->callback([=] {
      auto pruned = gg::prune(gg::load_graph(ex->graph));
      gg::export_pruned_tsv(ex->out, pruned);
      gg::write_manifest(ex->out, command_line, {}, 0, {ex->graph}, {ex->out});
      std::printf("exported %zu edges\n", pruned.edges.size());
    });
  }

  // ------------------------------------------------------------------- variance
  struct VarianceOpts {
    std::string cooc, embedding, vocab, out;
    std::vector<std::string> similarity;
    std::vector<uint64_t> seeds;
    gg::TrainConfig cfg;
    gg::OovPolicy oov = gg::OovPolicy::skip;
  };
  auto va = std::make_shared<VarianceOpts>();
  {
    auto* sc = app.add_subcommand("variance", "re-init + train + evaluate across seeds");
    sc->add_option("--cooc", va->cooc)->required();
    sc->add_option("--embedding", va->embedding, "dense vectors used to re-init per seed")
        ->required();
    sc->add_option("--vocab", va->vocab)->required();
    sc->add_option("--similarity", va->similarity, "similarity TSV (repeatable)")->required();
    sc->add_option("--seeds", va->seeds, "comma-separated seed list")
        ->required()
        ->delimiter(',');
    sc->add_option("--out", va->out, "report CSV")->required();
    sc->add_option("--loss", va->cfg.loss_kind)
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, gg::LossKind>{{"distance", gg::LossKind::distance},
                                                {"dot", gg::LossKind::dot_product}}))
        ->default_str("distance");
    sc->add_option("--lambda", va->cfg.lambda)->capture_default_str();
    sc->add_option("--steps", va->cfg.steps)->capture_default_str();
    sc->add_option("-K,--knn", va->cfg.K)->capture_default_str();
    sc->add_option("-M,--random-edges", va->cfg.M)->capture_default_str();
    sc->add_option("-R,--zero-fanout", va->cfg.R)->capture_default_str();
    sc->add_option("--b-anchors", va->cfg.b_anchors)->capture_default_str();
    sc->add_option("--n-per-anchor", va->cfg.n_per_anchor)->capture_default_str();
    sc->add_option("--lr", va->cfg.lr)->capture_default_str();
    sc->add_option("--target-ppt", va->cfg.target_ppt)->capture_default_str();
    sc->add_option("--oov", va->oov)
        ->transform(CLI::CheckedTransformer(std::map<std::string, gg::OovPolicy>{
            {"skip", gg::OovPolicy::skip}, {"infer", gg::OovPolicy::infer}}))
        ->default_str("skip");
    sc->callback([=, &workers] {
      if (va->seeds.empty()) throw std::invalid_argument("variance: seed list is empty");
      auto vocab = gg::load_vocabulary(va->vocab);
      auto cooc = gg::load_cooccurrence(va->cooc);
      auto emb = gg::load_embedding(va->embedding);

      std::vector<gg::SimilarityBenchmark> benches;
      for (const auto& path : va->similarity)
        benches.push_back(gg::load_similarity_benchmark(path));

      auto out = gg::open_output(va->out);
      out << "seed,benchmark,metric,value\n";
      std::map<std::string, std::vector<double>> per_bench;
      for (uint64_t seed : va->seeds) {
        gg::TrainConfig cfg = va->cfg;
        cfg.seed = seed;
        cfg.workers = workers;
        auto trained = gg::train(cooc, gg::init_graph(emb, cfg), cfg);
        auto pruned = gg::prune(trained.graph);
        if (pruned.n_vertices == vocab.size() + 1) pruned = gg::drop_last_vertex(pruned);
        for (size_t b = 0; b < benches.size(); ++b) {
          auto res = gg::similarity_eval(pruned, vocab, benches[b], va->oov);
          std::string name = stem_of(va->similarity[b]);
          out << seed << ',' << name << ",spearman," << gg::fmt_double(res.spearman) << '\n';
          per_bench[name].push_back(res.spearman);
        }
      }
      for (const auto& [name, values] : per_bench) {
        out << "mean," << name << ",spearman," << gg::fmt_double(gg::mean_of(values)) << '\n';
        out << "std," << name << ",spearman," << gg::fmt_double(gg::unbiased_std(values)) << '\n';
      }
      out.flush();

      std::vector<std::string> inputs{va->cooc, va->embedding, va->vocab};
      inputs.insert(inputs.end(), va->similarity.begin(), va->similarity.end());
      gg::write_manifest(va->out, command_line,
                         {{"steps", std::to_string(va->cfg.steps)},
                          {"lambda", gg::fmt_double(va->cfg.lambda)},
                          {"n_seeds", std::to_string(va->seeds.size())}},
                         va->seeds.front(), inputs, {va->out});
      for (const auto& [name, values] : per_bench)
        std::printf("%s: mean %s, std %s over %zu seeds\n", name.c_str(),
                    gg::fmt_double(gg::mean_of(values)).c_str(),
                    gg::fmt_double(gg::unbiased_std(values)).c_str(), values.size());
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const gg::numeric_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const gg::data_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
