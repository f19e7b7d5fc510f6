#include "bqhash/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <string>

#include "bqhash/encoder.hpp"
#include "bqhash/io.hpp"
#include "bqhash/random.hpp"

namespace bqhash {

namespace {

using nlohmann::json;

json metrics_json(const MetricsReport& m) {
  json j{{"map", m.map}, {"precision_at_r2", m.precision_at_r2}};
  if (m.knn_accuracy) j["knn_accuracy"] = *m.knn_accuracy;
  return j;
}

std::optional<std::filesystem::path> opt_path(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return std::filesystem::path(j.at(key).get<std::string>());
}

json path_or_null(const std::optional<std::filesystem::path>& p) {
  return p ? json(p->string()) : json(nullptr);
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown config key '" + where + key + "'");
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

DenseMatrix load_any(const std::filesystem::path& p) {
  return load_matrix({p, format_from_path(p), std::nullopt, std::nullopt});
}

}  // namespace

void ExperimentConfig::validate() const {
  if (train.empty()) throw ConfigError("no training data given (--train)");
  if (mode == SimilarityMode::Supervised && !labels) {
    throw ConfigError("supervised mode needs training labels (--labels)");
  }
  if (query_labels && !query) throw ConfigError("--query-labels given without --query");
  if (!(encoder_ridge >= 0.0)) throw ConfigError("encoder_ridge must be >= 0");
  if (knn_k < 1) throw ConfigError("knn_k must be >= 1");
  try {
    inference.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

std::string to_json(const ExperimentConfig& c) {
  const InferenceConfig& inf = c.inference;
  json j{
      {"train", c.train.string()},
      {"labels", path_or_null(c.labels)},
      {"query", path_or_null(c.query)},
      {"query_labels", path_or_null(c.query_labels)},
      {"out_dir", c.out_dir.string()},
      {"mode", mode_name(c.mode)},
      {"normalize", c.normalize},
      {"bits", inf.code_length},
      {"sweeps", inf.max_iter},
      {"backend", backend_name(inf.backend)},
      {"seed", inf.seed},
      {"al",
       {{"T", inf.al.T},
        {"mu0", inf.al.mu0},
        {"alpha", inf.al.alpha},
        {"eps", inf.al.epsilon},
        {"lbfgs_memory", inf.al.lbfgs_memory},
        {"lbfgs_max_iter", inf.al.lbfgs_max_iter},
        {"grad_tol", inf.al.grad_tol},
        {"escape_step", inf.al.escape_step}}},
      {"sdr",
       {{"trials", inf.sdr.trials}, {"tol", inf.sdr.sdp.tol}, {"max_iter", inf.sdr.sdp.max_iter}}},
      {"encoder_ridge", c.encoder_ridge},
      {"knn_k", c.knn_k},
  };
  return j.dump(2) + "\n";
}

ExperimentConfig merge_json(ExperimentConfig c, const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"train", "labels", "query", "query_labels", "out_dir", "mode", "normalize",
                  "bits", "sweeps", "backend", "seed", "al", "sdr", "encoder_ridge", "knn_k"},
                 "");
  try {
    InferenceConfig& inf = c.inference;
    if (j.contains("train")) c.train = j["train"].get<std::string>();
    if (j.contains("labels")) c.labels = opt_path(j, "labels");
    if (j.contains("query")) c.query = opt_path(j, "query");
    if (j.contains("query_labels")) c.query_labels = opt_path(j, "query_labels");
    if (j.contains("out_dir")) c.out_dir = j["out_dir"].get<std::string>();
    if (j.contains("mode")) {
      const auto m = j["mode"].get<std::string>();
      if (m == "supervised") c.mode = SimilarityMode::Supervised;
      else if (m == "unsupervised") c.mode = SimilarityMode::Unsupervised;
      else throw ConfigError("mode must be 'supervised' or 'unsupervised', got '" + m + "'");
    }
    if (j.contains("normalize")) c.normalize = j["normalize"].get<bool>();
    if (j.contains("bits")) inf.code_length = j["bits"].get<std::size_t>();
    if (j.contains("sweeps")) inf.max_iter = j["sweeps"].get<std::size_t>();
    if (j.contains("backend")) {
      const auto b = j["backend"].get<std::string>();
      if (b == "al") inf.backend = Backend::AL;
      else if (b == "sdr") inf.backend = Backend::SDR;
      else throw ConfigError("backend must be 'al' or 'sdr', got '" + b + "'");
    }
    if (j.contains("seed")) inf.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("al")) {
      const json& a = j["al"];
      reject_unknown(a, {"T", "mu0", "alpha", "eps", "lbfgs_memory", "lbfgs_max_iter", "grad_tol",
                         "escape_step"},
                     "al.");
      if (a.contains("T")) inf.al.T = a["T"].get<std::size_t>();
      if (a.contains("mu0")) inf.al.mu0 = a["mu0"].get<double>();
      if (a.contains("alpha")) inf.al.alpha = a["alpha"].get<double>();
      if (a.contains("eps")) inf.al.epsilon = a["eps"].get<double>();
      if (a.contains("lbfgs_memory")) inf.al.lbfgs_memory = a["lbfgs_memory"].get<std::size_t>();
      if (a.contains("lbfgs_max_iter")) inf.al.lbfgs_max_iter = a["lbfgs_max_iter"].get<std::size_t>();
      if (a.contains("grad_tol")) inf.al.grad_tol = a["grad_tol"].get<double>();
      if (a.contains("escape_step")) inf.al.escape_step = a["escape_step"].get<double>();
    }
    if (j.contains("sdr")) {
      const json& s = j["sdr"];
      reject_unknown(s, {"trials", "tol", "max_iter"}, "sdr.");
      if (s.contains("trials")) inf.sdr.trials = s["trials"].get<std::size_t>();
      if (s.contains("tol")) inf.sdr.sdp.tol = s["tol"].get<double>();
      if (s.contains("max_iter")) inf.sdr.sdp.max_iter = s["max_iter"].get<std::size_t>();
    }
    if (j.contains("encoder_ridge")) c.encoder_ridge = j["encoder_ridge"].get<double>();
    if (j.contains("knn_k")) c.knn_k = j["knn_k"].get<std::size_t>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return c;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  DenseMatrix x = load_any(config.train);
  if (config.normalize) x = normalize_columns(x);
  const std::size_t n = x.cols();

  std::optional<std::vector<int>> labels;
  if (config.labels) {
    labels = load_labels(*config.labels);
    if (labels->size() != n) {
      throw DimensionError("training labels: " + std::to_string(labels->size()) +
                           " labels for " + std::to_string(n) + " samples");
    }
  }

  const SimilarityMatrix sim =
      config.mode == SimilarityMode::Supervised ? build_supervised(*labels) : build_unsupervised(x);
  const TargetMatrix target = derive_target(sim, config.inference.code_length);

  ExperimentResult result;
  result.initial_codes = init_codes(x, config.inference.code_length);
  InferenceResult inferred = infer_codes(result.initial_codes, target, config.inference);
  result.codes = std::move(inferred.codes);
  result.trace = std::move(inferred.trace);

  if (labels) {
    const RetrievalGroundTruth truth{*labels, *labels};
    result.train_metrics = evaluate(result.codes, result.codes, truth);
    result.initial_metrics = evaluate(result.initial_codes, result.initial_codes, truth);
  }

  std::optional<CodeMatrix> query_codes;
  if (config.query) {
    DenseMatrix q = load_any(*config.query);
    if (config.normalize) q = normalize_columns(q);
    const LinearEncoder encoder = fit_linear_encoder(x, result.codes, config.encoder_ridge);
    query_codes = encoder.encode(q);
    if (config.query_labels && labels) {
      const std::vector<int> ql = load_labels(*config.query_labels);
      if (ql.size() != q.cols()) throw DimensionError("query labels do not match query samples");
      const std::size_t k = std::min(config.knn_k, n);
      result.query_metrics = evaluate(*query_codes, result.codes, {ql, *labels}, k);
    }
  }
  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  // Artifacts.
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + config.out_dir.string() + "'");

  save_codes_csv(config.out_dir / "codes.csv", result.codes);
  if (query_codes) save_codes_csv(config.out_dir / "query_codes.csv", *query_codes);

  std::string trace;
  trace += json{{"sweep", nullptr}, {"bit", nullptr}, {"objective", result.trace.initial_objective}}
               .dump() + "\n";
  for (const BitUpdate& u : result.trace.updates) {
    trace += json{{"sweep", u.sweep},
                  {"bit", u.bit},
                  {"objective", u.objective},
                  {"accepted", u.accepted},
                  {"bqp_before", u.bqp_before},
                  {"bqp_candidate", u.bqp_candidate},
                  {"iterations", u.report.iterations},
                  {"feasibility_violation", u.report.feasibility_violation},
                  {"converged", u.report.converged}}
                 .dump() +
             "\n";
  }
  write_text(config.out_dir / "trace.jsonl", trace);

  json metrics{{"initial_objective", result.trace.initial_objective},
               {"final_objective", result.trace.updates.empty()
                                       ? result.trace.initial_objective
                                       : result.trace.updates.back().objective},
               {"inference_wall_time", result.trace.wall_time},
               {"total_wall_time", result.wall_time}};
  if (result.train_metrics) metrics["train"] = metrics_json(*result.train_metrics);
  if (result.initial_metrics) metrics["initial"] = metrics_json(*result.initial_metrics);
  if (result.query_metrics) metrics["query"] = metrics_json(*result.query_metrics);
  write_text(config.out_dir / "metrics.json", metrics.dump(2) + "\n");
  write_text(config.out_dir / "config.json", to_json(config));
  return result;
}

SyntheticData make_two_cluster_data(std::size_t n, std::size_t dims, double spread,
                                    std::uint64_t seed) {
  if (n < 2 || dims < 1) throw PreconditionError("make_two_cluster_data: need n >= 2, dims >= 1");
  Rng rng(seed);
  std::vector<std::vector<double>> centers(2, std::vector<double>(dims));
  for (auto& c : centers) {
    double sq = 0.0;
    for (double& v : c) {
      v = rng.normal();
      sq += v * v;
    }
    for (double& v : c) v /= std::sqrt(sq);
  }
  SyntheticData out{DenseMatrix(), std::vector<int>(n)};
  std::vector<double> data(dims * n);
  for (std::size_t j = 0; j < n; ++j) {
    const int label = static_cast<int>(j % 2);
    out.labels[j] = label;
    std::vector<double> p(dims);
    double sq = 0.0;
    for (std::size_t d = 0; d < dims; ++d) {
      p[d] = centers[label][d] + spread * rng.normal();
      sq += p[d] * p[d];
    }
    const double inv = 1.0 / std::sqrt(sq);
    for (std::size_t d = 0; d < dims; ++d) data[d * n + j] = p[d] * inv;
  }
  out.x = DenseMatrix(dims, n, std::move(data));
  return out;
}

}  // namespace bqhash
