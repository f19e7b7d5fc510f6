// bqhash: infer binary codes for a data set and evaluate them.
//
//   bqhash run --train x.csv --labels y.csv --bits 8 --backend al --out-dir out
//   bqhash synth --n 200 --dims 16 --out-dir data
//
// Exit codes: 0 ok, 1 unexpected, 2 usage/config, 3 io, 4 bad input
// (dimension/precondition), 5 numerical failure.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "bqhash/experiment.hpp"
#include "bqhash/io.hpp"

namespace {

using namespace bqhash;

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Config: return 2;
    case ErrorCategory::Io: return 3;
    case ErrorCategory::Dimension:
    case ErrorCategory::Precondition: return 4;
    case ErrorCategory::Numerical: return 5;
  }
  return 1;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RunFlags {
  std::optional<std::string> config, mode, backend, train, labels, query, query_labels, out_dir;
  std::optional<std::size_t> bits, sweeps, al_T, sdr_trials;
  std::optional<std::uint64_t> seed;
  std::optional<double> al_mu0, al_alpha, al_eps, sdr_tol;
  bool normalize = false;
};

ExperimentConfig resolve(const RunFlags& f) {
  ExperimentConfig c;
  if (f.config) c = merge_json(c, read_file(*f.config));
  if (f.mode) c.mode = *f.mode == "supervised" ? SimilarityMode::Supervised
                                               : SimilarityMode::Unsupervised;
  if (f.backend) c.inference.backend = *f.backend == "sdr" ? Backend::SDR : Backend::AL;
  if (f.train) c.train = *f.train;
  if (f.labels) c.labels = *f.labels;
  if (f.query) c.query = *f.query;
  if (f.query_labels) c.query_labels = *f.query_labels;
  if (f.out_dir) c.out_dir = *f.out_dir;
  if (f.bits) c.inference.code_length = *f.bits;
  if (f.sweeps) c.inference.max_iter = *f.sweeps;
  if (f.seed) c.inference.seed = *f.seed;
  if (f.normalize) c.normalize = true;
  if (f.al_T) c.inference.al.T = *f.al_T;
  if (f.al_mu0) c.inference.al.mu0 = *f.al_mu0;
  if (f.al_alpha) c.inference.al.alpha = *f.al_alpha;
  if (f.al_eps) c.inference.al.epsilon = *f.al_eps;
  if (f.sdr_trials) c.inference.sdr.trials = *f.sdr_trials;
  if (f.sdr_tol) c.inference.sdr.sdp.tol = *f.sdr_tol;
  return c;
}

void print_metrics(const char* name, const std::optional<MetricsReport>& m) {
  if (!m) return;
  std::printf("%-8s mAP %.4f  P@r2 %.4f", name, m->map, m->precision_at_r2);
  if (m->knn_accuracy) std::printf("  kNN %.4f", *m->knn_accuracy);
  std::printf("\n");
}

int cmd_run(const RunFlags& flags) {
  const ExperimentConfig config = resolve(flags);
  const ExperimentResult r = run_experiment(config);
  const double final_obj =
      r.trace.updates.empty() ? r.trace.initial_objective : r.trace.updates.back().objective;
  std::printf("objective %.6g -> %.6g  (%zu updates, %.2fs)\n", r.trace.initial_objective,
              final_obj, r.trace.updates.size(), r.wall_time);
  print_metrics("initial", r.initial_metrics);
  print_metrics("train", r.train_metrics);
  print_metrics("query", r.query_metrics);
  std::printf("artifacts in %s\n", config.out_dir.string().c_str());
  return 0;
}

struct SynthFlags {
  std::size_t n = 200;
  std::size_t query_n = 0;
  std::size_t dims = 16;
  double spread = 0.3;
  std::uint64_t seed = 0;
  std::string out_dir = "bqhash_data";
};

int cmd_synth(const SynthFlags& f) {
  const SyntheticData d = make_two_cluster_data(f.n + f.query_n, f.dims, f.spread, f.seed);
  std::filesystem::create_directories(f.out_dir);
  const std::filesystem::path dir = f.out_dir;
  auto split = [&](std::size_t begin, std::size_t count, const char* data, const char* labels) {
    std::vector<double> v(f.dims * count);
    for (std::size_t r = 0; r < f.dims; ++r)
      for (std::size_t j = 0; j < count; ++j) v[r * count + j] = d.x(r, begin + j);
    save_matrix_csv(dir / data, DenseMatrix(f.dims, count, std::move(v)));
    save_labels(dir / labels, std::vector<int>(d.labels.begin() + static_cast<long>(begin),
                                               d.labels.begin() + static_cast<long>(begin + count)));
  };
  split(0, f.n, "train.csv", "train_labels.csv");
  if (f.query_n) split(f.n, f.query_n, "query.csv", "query_labels.csv");
  std::printf("wrote %zu train%s samples to %s\n", f.n, f.query_n ? " + query" : "",
              f.out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-step binary hashing: code inference by per-bit BQP (SDR or AL)"};
  app.require_subcommand(1);

  RunFlags rf;
  CLI::App* run = app.add_subcommand("run", "infer codes, evaluate, write artifacts");
  run->add_option("--config", rf.config, "JSON config; flags override its values")
      ->check(CLI::ExistingFile);
  run->add_option("--mode", rf.mode)->check(CLI::IsMember({"supervised", "unsupervised"}));
  run->add_option("--backend", rf.backend)->check(CLI::IsMember({"al", "sdr"}));
  run->add_option("--bits", rf.bits, "code length L");
  run->add_option("--sweeps", rf.sweeps, "coordinate-descent sweeps (max_iter)");
  run->add_option("--seed", rf.seed);
  run->add_flag("--normalize", rf.normalize, "scale samples to unit l2 norm");
  run->add_option("--train", rf.train, "training matrix (.csv or raw f32)");
  run->add_option("--labels", rf.labels, "training labels, one per line");
  run->add_option("--query", rf.query, "query matrix, hashed by the fitted linear encoder");
  run->add_option("--query-labels", rf.query_labels);
  run->add_option("--out-dir", rf.out_dir);
  run->add_option("--al-T", rf.al_T, "outer iteration cap (default 10)");
  run->add_option("--al-mu0", rf.al_mu0, "initial penalty (default 0.1)");
  run->add_option("--al-alpha", rf.al_alpha, "penalty growth (default 10)");
  run->add_option("--al-eps", rf.al_eps, "early-stop threshold (default 1e-6)");
  run->add_option("--sdr-trials", rf.sdr_trials, "rounding trials (default 100)");
  run->add_option("--sdr-tol", rf.sdr_tol, "ADMM tolerance (default 1e-6)");

  SynthFlags sf;
  CLI::App* synth = app.add_subcommand("synth", "write a two-cluster unit-norm data set");
  synth->add_option("--n", sf.n, "training samples")->capture_default_str();
  synth->add_option("--query-n", sf.query_n, "extra query samples")->capture_default_str();
  synth->add_option("--dims", sf.dims)->capture_default_str();
  synth->add_option("--spread", sf.spread, "per-coordinate noise")->capture_default_str();
  synth->add_option("--seed", sf.seed)->capture_default_str();
  synth->add_option("--out-dir", sf.out_dir)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*run) return cmd_run(rf);
    return cmd_synth(sf);
  } catch (const Error& e) {
    std::fprintf(stderr, "bqhash: %s error: %s\n", category_name(e.category()), e.what());
    return exit_code(e.category());
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "bqhash: io error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "bqhash: error: %s\n", e.what());
    return 1;
  }
}
