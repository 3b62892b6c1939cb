// Writes the bundled synthetic corpus to a file. The default settings
// reproduce the corpus used by the end-to-end checks byte for byte.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>

#include "corpus_gen.hpp"

int main(int argc, char** argv) {
  CLI::App app{"deterministic topic-corpus generator"};
  std::string out_path;
  corpusgen::CorpusSpec spec;
  double megabytes = 10.0;
  app.add_option("-o,--out", out_path, "output text file")->required();
  app.add_option("--seed", spec.seed, "generator seed");
  app.add_option("--mb", megabytes, "approximate size in MB")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  spec.target_bytes = static_cast<uint64_t>(megabytes * 1000 * 1000);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::fprintf(stderr, "make_corpus: cannot open %s\n", out_path.c_str());
    return 2;
  }
  try {
    uint64_t n = corpusgen::generate_corpus(out, spec);
    std::printf("wrote %llu bytes to %s\n", static_cast<unsigned long long>(n), out_path.c_str());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "make_corpus: %s\n", e.what());
    return 2;
  }
  return 0;
}
