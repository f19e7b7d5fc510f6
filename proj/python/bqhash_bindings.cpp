#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "bqhash/al.hpp"
#include "bqhash/bqp.hpp"
#include "bqhash/driver.hpp"
#include "bqhash/encoder.hpp"
#include "bqhash/eval.hpp"
#include "bqhash/io.hpp"
#include "bqhash/sdr.hpp"
#include "bqhash/similarity.hpp"

namespace py = pybind11;
using namespace bqhash;

namespace {

template <typename T>
using CArray = py::array_t<T, py::array::c_style | py::array::forcecast>;

DenseMatrix to_dense(const CArray<double>& a) {
  if (a.ndim() != 2) throw DimensionError("expected a 2-d array");
  const auto r = static_cast<std::size_t>(a.shape(0));
  const auto c = static_cast<std::size_t>(a.shape(1));
  return DenseMatrix(r, c, std::vector<double>(a.data(), a.data() + r * c));
}

SymmetricMatrix to_sym(const CArray<double>& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw DimensionError("expected a square array");
  const auto n = static_cast<std::size_t>(a.shape(0));
  return SymmetricMatrix(n, std::vector<double>(a.data(), a.data() + n * n));
}

CodeMatrix to_codes(const CArray<std::int8_t>& a) {
  if (a.ndim() != 2) throw DimensionError("expected a 2-d code array (bits x samples)");
  const auto l = static_cast<std::size_t>(a.shape(0));
  const auto n = static_cast<std::size_t>(a.shape(1));
  return CodeMatrix(l, n, std::vector<std::int8_t>(a.data(), a.data() + l * n));
}

std::vector<double> to_vec(const CArray<double>& a) {
  if (a.ndim() != 1) throw DimensionError("expected a 1-d array");
  return {a.data(), a.data() + a.shape(0)};
}

template <typename T>
py::array_t<T> array2d(std::size_t r, std::size_t c, std::span<const T> data) {
  py::array_t<T> out({static_cast<py::ssize_t>(r), static_cast<py::ssize_t>(c)});
  std::copy(data.begin(), data.end(), out.mutable_data());
  return out;
}

py::array_t<double> from(const DenseMatrix& m) { return array2d<double>(m.rows(), m.cols(), m.data()); }
py::array_t<double> from(const SymmetricMatrix& m) { return array2d<double>(m.n(), m.n(), m.data()); }
py::array_t<std::int8_t> from(const CodeMatrix& z) {
  return array2d<std::int8_t>(z.bits(), z.samples(), z.data());
}
py::array_t<double> from(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

SimilarityMode parse_mode(const std::string& s) {
  if (s == "supervised") return SimilarityMode::Supervised;
  if (s == "unsupervised") return SimilarityMode::Unsupervised;
  throw ConfigError("mode must be 'supervised' or 'unsupervised'");
}

Backend parse_backend(const std::string& s) {
  if (s == "al") return Backend::AL;
  if (s == "sdr") return Backend::SDR;
  throw ConfigError("backend must be 'al' or 'sdr'");
}

TargetMatrix as_target(const CArray<double>& y, std::size_t bits) { return {to_sym(y), bits}; }

py::dict report_dict(const SolverReport& r) {
  py::dict d;
  d["objective"] = r.objective;
  d["iterations"] = r.iterations;
  d["feasibility_violation"] = r.feasibility_violation;
  d["wall_time"] = r.wall_time;
  d["converged"] = r.converged;
  return d;
}

py::dict metrics_dict(const MetricsReport& m) {
  py::dict d;
  d["map"] = m.map;
  d["precision_at_r2"] = m.precision_at_r2;
  d["per_query_ap"] = from(m.per_query_ap);
  d["knn_accuracy"] = m.knn_accuracy ? py::cast(*m.knn_accuracy) : py::none();
  return d;
}

}  // namespace

PYBIND11_MODULE(_bqhash, m) {
  m.doc() = "Binary code inference by per-bit BQP (SDR and augmented Lagrangian backends)";

  auto base = py::register_exception<Error>(m, "BqhashError", PyExc_RuntimeError);
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  m.def("build_unsupervised", [](const CArray<double>& x) { return from(build_unsupervised(to_dense(x)).s); },
        py::arg("x"), "Squared distances of unit-norm columns of x (D x n).");
  m.def("build_supervised",
        [](const std::vector<int>& labels) { return from(build_supervised(labels).s); },
        py::arg("labels"), "0 for same label, 1 otherwise.");
  m.def(
      "derive_target",
      [](const CArray<double>& s, const std::string& mode, std::size_t bits) {
        const SimilarityMode md = parse_mode(mode);
        const SimilarityMatrix sim{to_sym(s), md, md == SimilarityMode::Supervised ? 1.0 : 4.0};
        return from(derive_target(sim, bits).y);
      },
      py::arg("s"), py::arg("mode"), py::arg("bits"));
  m.def("hamming_from_codes", [](const CArray<std::int8_t>& z) { return from(hamming_from_codes(to_codes(z))); },
        py::arg("codes"));

  m.def(
      "assemble_bit_instance",
      [](const CArray<std::int8_t>& z, const CArray<double>& y, std::size_t k) {
        const CodeMatrix codes = to_codes(z);
        return from(assemble_bit_instance(codes, as_target(y, codes.bits()), k).a);
      },
      py::arg("codes"), py::arg("y"), py::arg("bit"));
  m.def(
      "shift_instance",
      [](const CArray<double>& a) {
        const ShiftedBQP s = shift_instance({to_sym(a)});
        return py::make_tuple(from(s.b), s.lambda1);
      },
      py::arg("a"), "Returns (B, lambda1) with B = A - lambda1 I.");
  m.def(
      "brute_force",
      [](const CArray<double>& a) {
        const BruteForceResult r = brute_force(to_sym(a));
        return py::make_tuple(from(r.x), r.objective);
      },
      py::arg("a"), "Exact minimizer of x^T A x over {-1,1}^n for n <= 20.");

  m.def(
      "solve_sdr",
      [](const CArray<double>& a, std::size_t trials, std::uint64_t seed, double tol,
         std::size_t max_iter) {
        const BQPInstance inst{to_sym(a)};
        const ShiftedBQP b = shift_instance(inst);
        SdpOptions opt;
        opt.tol = tol;
        opt.max_iter = max_iter;
        const SDPState st = solve_sdp(b, opt);
        const RoundingResult r = randomized_round(st, b, trials, seed);
        py::dict d;
        d["x"] = from(r.best_x);
        d["objective"] = inst.objective(r.best_x);
        d["shifted_objective"] = r.best_objective;
        d["f_sdr"] = r.f_sdr;
        d["lambda1"] = b.lambda1;
        d["X"] = from(st.x_var);
        d["iterations"] = st.iterations;
        d["converged"] = st.converged;
        d["tight"] = st.tight;
        d["sample_objectives"] = from(r.sample_objectives);
        return d;
      },
      py::arg("a"), py::arg("trials") = 100, py::arg("seed") = 0, py::arg("tol") = 1e-6,
      py::arg("max_iter") = 2000);

  m.def("spectral_init", [](const CArray<double>& a) { return from(spectral_init({to_sym(a)})); },
        py::arg("a"));
  m.def(
      "solve_al",
      [](const CArray<double>& a, std::size_t T, double mu0, double alpha, double epsilon,
         std::optional<CArray<double>> x0) {
        ALConfig cfg;
        cfg.T = T;
        cfg.mu0 = mu0;
        cfg.alpha = alpha;
        cfg.epsilon = epsilon;
        std::optional<std::vector<double>> start;
        if (x0) start = to_vec(*x0);
        const ALResult r = solve_al({to_sym(a)}, cfg, start);
        py::dict d = report_dict(r.report);
        d["x"] = from(r.x);
        d["init_objective"] = r.init_objective;
        d["inner_iterations"] = r.inner_iterations;
        d["saddle_escapes"] = r.saddle_escapes;
        return d;
      },
      py::arg("a"), py::arg("T") = 10, py::arg("mu0") = 0.1, py::arg("alpha") = 10.0,
      py::arg("epsilon") = 1e-6, py::arg("x0") = py::none());

  m.def("init_codes", [](const CArray<double>& x, std::size_t bits) { return from(init_codes(to_dense(x), bits)); },
        py::arg("x"), py::arg("bits"), "PCA + mean-threshold codes (bits x n).");
  m.def(
      "global_objective",
      [](const CArray<std::int8_t>& z, const CArray<double>& y) {
        const CodeMatrix codes = to_codes(z);
        return global_objective(codes, as_target(y, codes.bits()));
      },
      py::arg("codes"), py::arg("y"));
  m.def(
      "infer_codes",
      [](const CArray<double>& y, std::size_t bits, std::optional<CArray<double>> x,
         std::optional<CArray<std::int8_t>> initial, const std::string& backend,
         std::size_t sweeps, std::uint64_t seed, std::size_t sdr_trials) {
        InferenceConfig cfg;
        cfg.code_length = bits;
        cfg.max_iter = sweeps;
        cfg.backend = parse_backend(backend);
        cfg.seed = seed;
        cfg.sdr.trials = sdr_trials;
        const TargetMatrix t = as_target(y, bits);
        InferenceResult r;
        {
          py::gil_scoped_release release;
          if (initial) r = infer_codes(to_codes(*initial), t, cfg);
          else if (x) r = infer_codes(to_dense(*x), t, cfg);
          else throw ConfigError("infer_codes needs either x or initial codes");
        }
        py::dict d;
        d["codes"] = from(r.codes);
        d["initial_objective"] = r.trace.initial_objective;
        d["objectives"] = from(r.trace.objectives());
        std::vector<bool> accepted;
        for (const BitUpdate& u : r.trace.updates) accepted.push_back(u.accepted);
        d["accepted"] = accepted;
        d["wall_time"] = r.trace.wall_time;
        return d;
      },
      py::arg("y"), py::arg("bits"), py::arg("x") = py::none(), py::arg("initial") = py::none(),
      py::arg("backend") = "al", py::arg("sweeps") = 3, py::arg("seed") = 0,
      py::arg("sdr_trials") = 100);

  m.def(
      "hamming_distances",
      [](const CArray<std::int8_t>& q, const CArray<std::int8_t>& db) {
        const auto d = hamming_distances(to_codes(q), to_codes(db));
        py::array_t<std::uint32_t> out(
            {static_cast<py::ssize_t>(d.size()), static_cast<py::ssize_t>(d.empty() ? 0 : d[0].size())});
        auto w = out.mutable_unchecked<2>();
        for (std::size_t i = 0; i < d.size(); ++i)
          for (std::size_t j = 0; j < d[i].size(); ++j) w(i, j) = d[i][j];
        return out;
      },
      py::arg("queries"), py::arg("database"));
  m.def(
      "evaluate",
      [](const CArray<std::int8_t>& q, const CArray<std::int8_t>& db, std::vector<int> query_labels,
         std::vector<int> database_labels, std::optional<std::size_t> knn_k) {
        return metrics_dict(evaluate(to_codes(q), to_codes(db),
                                     {std::move(query_labels), std::move(database_labels)}, knn_k));
      },
      py::arg("queries"), py::arg("database"), py::arg("query_labels"),
      py::arg("database_labels"), py::arg("knn_k") = py::none());

  m.def(
      "fit_linear_encoder",
      [](const CArray<double>& x, const CArray<std::int8_t>& z, double ridge) {
        return from(fit_linear_encoder(to_dense(x), to_codes(z), ridge).weights);
      },
      py::arg("x"), py::arg("codes"), py::arg("ridge") = 1e-3,
      "Weights (bits x (D + 1)); the last column is the bias.");
  m.def(
      "encode",
      [](const CArray<double>& weights, const CArray<double>& x) {
        return from(LinearEncoder{to_dense(weights)}.encode(to_dense(x)));
      },
      py::arg("weights"), py::arg("x"));

  m.def(
      "load_matrix",
      [](const std::string& path) {
        return from(load_matrix({path, format_from_path(path), std::nullopt, std::nullopt}));
      },
      py::arg("path"), "D x n matrix from .csv (one sample per line) or raw f32.");
}
