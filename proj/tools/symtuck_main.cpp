// symtuck: streaming symmetric Tucker decomposition of sample moment
// tensors. Subcommands cover synthetic data generation, the two-phase
// streaming solver, streaming HOEVD, core estimation, an implicit-vs-
// explicit gradient benchmark, and the synthetic anomaly-scoring demo.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "symtuck/alloc_audit.hpp"
#include "symtuck/anomaly.hpp"
#include "symtuck/io.hpp"
#include "symtuck/manifold.hpp"
#include "symtuck/moments.hpp"
#include "symtuck/streaming_solver.hpp"

namespace {

using namespace symtuck;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& rows) {
  const Index r = static_cast<Index>(rows.size());
  const Index c = static_cast<Index>(rows.at(0).size());
  Matrix m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j)
      m(i, j) = rows.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(j)).get<double>();
  return m;
}

void require_readable(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    std::cerr << "symtuck: input file not found: " << path << "\n";
    std::exit(2);
  }
}

struct SynthOptions {
  Index dim = 50;
  Index rank_true = 3;
  double snr_inv = 0.1;
  Index samples = 25000;
  std::uint64_t seed = 0;
  double nig_alpha = 2.0;
  double nig_beta = 1.0;
  std::string output;
};

int run_synth(const SynthOptions& o) {
  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix loadings(o.dim, o.rank_true);
  for (Index j = 0; j < o.rank_true; ++j)
    for (Index i = 0; i < o.dim; ++i) loadings(i, j) = normal(rng);

  FactorModel model;
  model.loadings = loadings;
  model.sigma = o.snr_inv * loadings.operatorNorm() / std::sqrt(static_cast<double>(o.dim));
  model.nig = NigParams{o.nig_alpha, o.nig_beta};
  model.seed = o.seed + 1;  // keep loading draws and sample draws independent

  Matrix samples = sample_factor_model(model, o.samples);
  save_samples(o.output, samples);

  StiefelBasis q_star = qr_retract(loadings);
  json meta;
  meta["n"] = o.dim;
  meta["r_true"] = o.rank_true;
  meta["sigma"] = model.sigma;
  meta["snr_inv"] = o.snr_inv;
  meta["seed"] = o.seed;
  meta["nig_alpha"] = o.nig_alpha;
  meta["nig_beta"] = o.nig_beta;
  meta["q_star"] = matrix_to_json(q_star.matrix());
  std::ofstream metaout(o.output + ".meta.json");
  if (!metaout) throw IoError("cannot write sidecar metadata");
  metaout << meta.dump(2) << "\n";

  json summary;
  summary["samples"] = o.samples;
  summary["dim"] = o.dim;
  summary["output"] = o.output;
  std::cout << summary.dump() << "\n";
  return 0;
}

struct DecomposeOptions {
  std::string input;
  std::string output;
  std::string trace_path;
  std::string core_path;
  std::string eval_path;
  std::string reference_path;
  int order = 3;
  Index rank = 3;
  int iters1 = 100;
  int iters2 = 200;
  Index batch1 = 50;
  Index batch2 = 50;
  double c1 = 1.0;
  double c2 = 1.0;
  std::uint64_t seed = 0;
  double tol = 1e-10;
  bool explicit_path = false;
  Index core_samples = 1000;
  bool hoevd_only = false;
  std::string certify_path;
};

std::optional<StiefelBasis> load_reference(const DecomposeOptions& o) {
  std::string path = o.reference_path;
  if (path.empty()) {
    const std::string sidecar = o.input + ".meta.json";
    if (std::filesystem::exists(sidecar)) path = sidecar;
  }
  if (path.empty()) return std::nullopt;
  std::ifstream in(path);
  if (!in) throw IoError("cannot open reference: " + path);
  json meta = json::parse(in);
  return StiefelBasis(matrix_from_json(meta.at("q_star")));
}

bool is_binary_path(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".bin") == 0;
}

int run_decompose(const DecomposeOptions& o) {
  if (!o.certify_path.empty() && !o.explicit_path) {
    std::cerr << "symtuck: --certify needs the dense tensor, pass --explicit as well\n";
    return 2;
  }
  require_readable(o.input);
  std::optional<StiefelBasis> reference = load_reference(o);

  std::optional<Matrix> eval_pool;
  if (!o.eval_path.empty()) {
    require_readable(o.eval_path);
    eval_pool = load_samples(o.eval_path);
  }

  json summary;
  summary["rank"] = o.rank;
  summary["order"] = o.order;

  StiefelBasis q = [&] {
    if (o.explicit_path) {
      Matrix pool = load_samples(o.input);
      SymTensor moment = build_moment(pool, o.order);
      StiefelBasis q0 = hoevd_explicit(moment, o.rank);
      StiefelBasis qf = q0;
      if (!o.hoevd_only) {
        PgdOptions popts;
        popts.max_iters = o.iters2;
        popts.tol = o.tol;
        auto [solved, trace] = pgd_explicit(moment, q0, popts);
        qf = solved;
        if (!o.trace_path.empty()) save_trace(o.trace_path, trace);
      }
      summary["relative_gradient"] = relative_gradient(moment, qf);
      if (!o.certify_path.empty()) {
        CriticalityReport report = certify_criticality(moment, projector(qf), o.tol);
        std::ofstream out(o.certify_path);
        if (!out) throw IoError("cannot write criticality report: " + o.certify_path);
        out << criticality_report_json(report) << "\n";
        summary["first_order"] = report.first_order;
      }
      return qf;
    }

    // Streaming path: binary files are consumed batch by batch without ever
    // loading the pool; CSV input is loaded once and streamed from memory.
    std::unique_ptr<SampleStream> stream;
    std::optional<Matrix> pool;
    Index available = 0;
    if (is_binary_path(o.input)) {
      auto file_stream = std::make_unique<BinaryFileStream>(o.input);
      available = file_stream->total_samples();
      stream = std::move(file_stream);
    } else {
      pool = load_samples(o.input);
      available = pool->cols();
      stream = std::make_unique<PoolStream>(*pool, o.batch1);
    }

    const Index budget = o.hoevd_only
                             ? static_cast<Index>(o.iters1) * o.batch1
                             : static_cast<Index>(o.iters1) * o.batch1 +
                                   static_cast<Index>(o.iters2 - o.iters1) * o.batch2;
    if (budget > available)
      throw StreamUnderrunError("sample file holds " + std::to_string(available) +
                                " observations but the stream needs " + std::to_string(budget));

    StreamTraceOptions topts;
    topts.eval_every = 10;
    if (eval_pool) topts.eval_pool = &*eval_pool;
    if (reference) topts.reference = &*reference;

    StiefelBasis qf = [&] {
      if (o.hoevd_only) {
        ShoevdConfig cfg{o.iters1, o.batch1, o.c1, o.rank, o.seed};
        auto [solved, trace] = s_hoevd(*stream, cfg, o.order, topts);
        if (!o.trace_path.empty()) save_trace(o.trace_path, trace);
        return solved;
      }
      TwoPhaseConfig cfg{o.iters1, o.iters2, o.batch1, o.batch2, o.c1, o.c2, o.rank, o.seed};
      auto [solved, trace] = scalable_pgd(*stream, cfg, o.order, topts);
      if (!o.trace_path.empty()) save_trace(o.trace_path, trace);
      return solved;
    }();

    if (!o.core_path.empty()) {
      if (available - budget < o.core_samples)
        throw StreamUnderrunError("core estimation needs " + std::to_string(o.core_samples) +
                                  " fresh observations beyond the stream budget");
      SymTensor core = estimate_core(qf, stream->next(o.core_samples).data, o.order);
      save_matrix_csv(o.core_path, core.entries());
    }

    if (eval_pool)
      summary["objective"] = batch_objective(*eval_pool, qf, o.order);
    else if (pool)
      summary["objective"] = batch_objective(*pool, qf, o.order);
    return qf;
  }();

  if (!o.output.empty()) save_matrix_csv(o.output, q.matrix());
  if (reference) summary["subspace_error"] = subspace_error(q, *reference);
  std::cout << summary.dump() << "\n";
  return 0;
}

struct BenchOptions {
  Index dim = 30;
  int order = 4;
  Index samples = 500;
  Index rank = 3;
  int iters = 10;
  std::uint64_t seed = 0;
  std::string output;
};

int run_bench(const BenchOptions& o) {
  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix loadings(o.dim, o.rank);
  for (Index j = 0; j < o.rank; ++j)
    for (Index i = 0; i < o.dim; ++i) loadings(i, j) = normal(rng);
  FactorModel model{loadings, 0.1, NigParams{}, o.seed + 1};
  Matrix pool = sample_factor_model(model, o.samples);

  const auto t_build = Clock::now();
  SymTensor moment = build_moment(pool, o.order);  // refused if over budget
  const double overhead_s = seconds_since(t_build);
  const std::size_t tensor_bytes = sizeof(double) * static_cast<std::size_t>(moment.size());

  StiefelBasis q = hoevd_explicit(moment, o.rank);
  AdaGradState state = AdaGradState::init(o.rank, 1.0);

  std::ofstream out;
  std::ostream* sink = &std::cout;
  if (!o.output.empty()) {
    out.open(o.output);
    if (!out) throw IoError("cannot write bench output: " + o.output);
    sink = &out;
  }
  *sink << "iter,implicit_s,explicit_s,implicit_max_alloc_bytes,explicit_max_alloc_bytes\n";

  double implicit_total = 0.0, explicit_total = 0.0;
  std::size_t implicit_alloc_peak = 0;
  for (int t = 1; t <= o.iters; ++t) {
    audit::begin();
    const auto ti = Clock::now();
    Matrix g_impl = implicit_gradient(pool, q, o.order);
    const double impl_s = seconds_since(ti);
    const auto impl_stats = audit::end();

    audit::begin();
    const auto te = Clock::now();
    Matrix g_expl = euclidean_gradient_explicit(moment, q);
    const double expl_s = seconds_since(te);
    const auto expl_stats = audit::end();

    implicit_total += impl_s;
    explicit_total += expl_s;
    implicit_alloc_peak = std::max(implicit_alloc_peak, impl_stats.max_bytes);

    char line[160];
    std::snprintf(line, sizeof(line), "%d,%.9f,%.9f,%zu,%zu\n", t, impl_s, expl_s,
                  impl_stats.max_bytes, expl_stats.max_bytes);
    *sink << line;

    std::tie(state, q) = adagrad_step(state, g_impl, q);
    (void)g_expl;
  }

  json summary;
  summary["moment_build_s"] = overhead_s;
  summary["tensor_bytes"] = tensor_bytes;
  summary["implicit_mean_s"] = implicit_total / o.iters;
  summary["explicit_mean_s"] = explicit_total / o.iters;
  summary["implicit_alloc_peak_bytes"] = implicit_alloc_peak;
  summary["implicit_allocates_tensor"] = implicit_alloc_peak >= tensor_bytes;
  std::cout << summary.dump() << "\n";
  return 0;
}

struct AnomalyOptions {
  AnomalyDemoConfig cfg;
  std::string output;
};

int run_anomaly(const AnomalyOptions& o) {
  AnomalyDemoResult result = run_anomaly_demo(o.cfg);
  if (!o.output.empty()) {
    std::ofstream out(o.output);
    if (!out) throw IoError("cannot write scores: " + o.output);
    out << "score_tucker,score_pca,label\n";
    for (std::size_t i = 0; i < result.labels.size(); ++i)
      out << result.scores_tucker[i] << ',' << result.scores_pca[i] << ',' << result.labels[i]
          << "\n";
  }
  json summary;
  summary["auc_tucker"] = result.auc_tucker;
  summary["auc_hoevd"] = result.auc_hoevd;
  summary["auc_pca"] = result.auc_pca;
  std::cout << summary.dump() << "\n";
  return 0;
}

struct CoreOptions {
  std::string input;
  std::string basis;
  std::string output;
  int order = 3;
};

int run_core(const CoreOptions& o) {
  require_readable(o.input);
  require_readable(o.basis);
  Matrix fresh = load_samples(o.input);
  StiefelBasis q(load_matrix_csv(o.basis));
  SymTensor core = estimate_core(q, fresh, o.order);
  save_matrix_csv(o.output, core.entries());
  json summary;
  summary["core_dim"] = core.dim();
  summary["core_order"] = core.order();
  summary["core_norm"] = norm(core);
  std::cout << summary.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"streaming symmetric Tucker decomposition of sample moment tensors"};
  app.require_subcommand(1);

  SynthOptions synth;
  auto* cmd_synth = app.add_subcommand("synth", "generate linear factor model samples");
  cmd_synth->add_option("--dim", synth.dim, "ambient dimension n")->required();
  cmd_synth->add_option("--rank-true", synth.rank_true, "latent factor count");
  cmd_synth->add_option("--snr-inv", synth.snr_inv, "inverse signal-to-noise ratio");
  cmd_synth->add_option("--samples", synth.samples, "number of observations");
  cmd_synth->add_option("--seed", synth.seed, "RNG seed");
  cmd_synth->add_option("--nig-alpha", synth.nig_alpha, "NIG tail parameter");
  cmd_synth->add_option("--nig-beta", synth.nig_beta, "NIG skew parameter");
  cmd_synth->add_option("--output", synth.output, "sample file (.csv or .bin)")->required();

  DecomposeOptions dec;
  auto* cmd_dec = app.add_subcommand("decompose", "two-phase streaming decomposition");
  auto add_decompose_flags = [](CLI::App* cmd, DecomposeOptions& d) {
    cmd->add_option("--input", d.input, "sample file")->required();
    cmd->add_option("--order", d.order, "moment order d");
    cmd->add_option("--rank", d.rank, "target rank r");
    cmd->add_option("--iters1", d.iters1, "Phase I iterations T1");
    cmd->add_option("--iters2", d.iters2, "total iterations T2");
    cmd->add_option("--batch1", d.batch1, "Phase I batch size");
    cmd->add_option("--batch2", d.batch2, "Phase II batch size");
    cmd->add_option("--c1", d.c1, "Phase I step constant");
    cmd->add_option("--c2", d.c2, "Phase II step constant");
    cmd->add_option("--seed", d.seed, "RNG seed");
    cmd->add_option("--tol", d.tol, "relative-gradient stop tolerance (explicit path)");
    cmd->add_option("--output", d.output, "basis CSV output");
    cmd->add_option("--trace", d.trace_path, "JSON-lines trace output");
    cmd->add_option("--eval", d.eval_path, "held-out samples for objective tracking");
    cmd->add_option("--reference", d.reference_path, "sidecar metadata with the true basis");
    cmd->add_flag("--explicit", d.explicit_path, "build the dense moment and run the explicit path");
  };
  add_decompose_flags(cmd_dec, dec);
  cmd_dec->add_option("--core", dec.core_path, "estimate the core from fresh samples");
  cmd_dec->add_option("--core-samples", dec.core_samples, "fresh observations for the core");
  cmd_dec->add_option("--certify", dec.certify_path,
                      "write a JSON criticality report (with --explicit)");

  DecomposeOptions hoevd;
  hoevd.hoevd_only = true;
  auto* cmd_hoevd = app.add_subcommand("hoevd", "streaming HOEVD approximation");
  add_decompose_flags(cmd_hoevd, hoevd);

  CoreOptions core;
  auto* cmd_core = app.add_subcommand("core", "estimate the core tensor from fresh samples");
  cmd_core->add_option("--input", core.input, "fresh sample file")->required();
  cmd_core->add_option("--basis", core.basis, "basis CSV")->required();
  cmd_core->add_option("--order", core.order, "moment order d");
  cmd_core->add_option("--output", core.output, "core entries CSV")->required();

  BenchOptions bench;
  auto* cmd_bench = app.add_subcommand("bench", "implicit vs explicit gradient timing");
  cmd_bench->add_option("--dim", bench.dim, "ambient dimension n");
  cmd_bench->add_option("--order", bench.order, "moment order d");
  cmd_bench->add_option("--samples", bench.samples, "pool size");
  cmd_bench->add_option("--rank", bench.rank, "target rank");
  cmd_bench->add_option("--iters", bench.iters, "timed iterations");
  cmd_bench->add_option("--seed", bench.seed, "RNG seed");
  cmd_bench->add_option("--output", bench.output, "timing table CSV");

  AnomalyOptions anomaly;
  auto* cmd_anom = app.add_subcommand("anomaly", "synthetic anomaly-scoring demo");
  cmd_anom->add_option("--dim", anomaly.cfg.dim, "ambient dimension n");
  cmd_anom->add_option("--rank-true", anomaly.cfg.factor_rank, "latent factor count");
  cmd_anom->add_option("--rank", anomaly.cfg.rank, "detection subspace rank");
  cmd_anom->add_option("--snr-inv", anomaly.cfg.snr_inv, "inverse signal-to-noise ratio");
  cmd_anom->add_option("--samples", anomaly.cfg.samples, "number of observations");
  cmd_anom->add_option("--outlier-frac", anomaly.cfg.outlier_fraction, "planted outlier fraction");
  cmd_anom->add_option("--outlier-scale", anomaly.cfg.outlier_scale, "outlier factor scale");
  cmd_anom->add_option("--batch1", anomaly.cfg.batch, "stream batch size");
  cmd_anom->add_option("--iters1", anomaly.cfg.iters1, "Phase I iterations");
  cmd_anom->add_option("--iters2", anomaly.cfg.iters2, "total iterations");
  cmd_anom->add_option("--c1", anomaly.cfg.c1, "Phase I step constant");
  cmd_anom->add_option("--c2", anomaly.cfg.c2, "Phase II step constant");
  cmd_anom->add_option("--seed", anomaly.cfg.seed, "RNG seed");
  cmd_anom->add_option("--output", anomaly.output, "per-sample scores CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (cmd_synth->parsed()) return run_synth(synth);
    if (cmd_dec->parsed()) return run_decompose(dec);
    if (cmd_hoevd->parsed()) return run_decompose(hoevd);
    if (cmd_core->parsed()) return run_core(core);
    if (cmd_bench->parsed()) return run_bench(bench);
    if (cmd_anom->parsed()) return run_anomaly(anomaly);
  } catch (const std::exception& e) {
    std::cerr << "symtuck: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
