#include "gfrft/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>

#include "gfrft/rng.hpp"

namespace gfrft {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr const char* kVersion = "0.1.0";

// Substream tags for rng::derive so every random draw has a stable address.
constexpr uint64_t kGraphStream = 1;
constexpr uint64_t kStrategyStream = 2;
constexpr uint64_t kNoiseStream = 3;
constexpr uint64_t kSignalStream = 4;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool file_exists(const std::string& p) { return std::ifstream(p).good(); }

const std::vector<std::string> kColumns = {
    "strategy", "alpha", "n", "sample_size", "trial",
    "mse",      "snr_db", "select_seconds", "reconstruct_seconds"};

std::vector<std::string> make_row(const std::string& strategy, double alpha, Index n,
                                  Index sample_size, Index trial, double mse,
                                  double snr_db, double select_s, double reconstruct_s) {
  return {strategy,
          format_double(alpha),
          std::to_string(n),
          std::to_string(sample_size),
          std::to_string(trial),
          format_double(mse),
          format_double(snr_db),
          format_double(select_s),
          format_double(reconstruct_s)};
}

// +1 on the first ceil(n/2) vertices, -1 on the rest.
CVector pm_one(Index n) {
  CVector v(n);
  const Index head = (n + 1) / 2;
  for (Index i = 0; i < n; ++i) v(i) = Complex(i < head ? 1.0 : -1.0, 0.0);
  return v;
}

// B^alpha v computed in the spectral domain (no projector matrix).
CVector bandlimit(const GfrftOperator& op, const IndexSet& band, const CVector& v) {
  const CVector hat = op.forward * v;
  CVector kept = CVector::Zero(op.n());
  for (Index k = 0; k < band.size(); ++k) kept(band[k]) = hat(band[k]);
  return op.forward.adjoint() * kept;
}

// F^{-alpha} xi with xi real i.i.d. N(0, variance) across all frequencies.
CVector spectral_noise(const GfrftOperator& op, double variance, rng::SplitMix64& g) {
  const double sd = std::sqrt(variance);
  CVector xi(op.n());
  for (Index i = 0; i < op.n(); ++i) xi(i) = Complex(sd * g.gaussian(), 0.0);
  return op.forward.adjoint() * xi;
}

StrategyConfig resolve_strategy(const StrategySpec& s, const IndexSet& band,
                                uint64_t master, std::initializer_list<uint64_t> path) {
  StrategyConfig c;
  c.kind = s.kind;
  c.cut_order = s.cut_order;
  c.fast_updates = s.fast_updates;
  if (s.kind == StrategyKind::MaxCov) {
    if (s.kernel == "ideal") {
      c.kernel = Kernel(IdealKernel{band});
    } else if (s.kernel == "poly") {
      c.kernel = Kernel(PolyLowpassKernel{s.poly_degree});
    } else {
      throw ConfigError("unknown MaxCov kernel: " + s.kernel);
    }
  }
  if (s.kind == StrategyKind::Random) c.seed = rng::derive(master, path);
  return c;
}

double total_seconds(const SamplingResult& r, Index prefix) {
  double s = 0.0;
  for (Index i = 0; i < prefix && i < static_cast<Index>(r.elapsed_seconds.size()); ++i) {
    s += r.elapsed_seconds[static_cast<size_t>(i)];
  }
  return s;
}

json strategy_meta(const StrategySpec& s) {
  json m;
  m["kind"] = to_string(s.kind);
  m["k"] = s.cut_order;
  if (s.kind == StrategyKind::MaxCov) {
    m["kernel"] = s.kernel;
    if (s.kernel == "poly") m["poly_degree"] = s.poly_degree;
  }
  m["fast_updates"] = s.fast_updates;
  return m;
}

json base_metadata(const ExperimentConfig& cfg) {
  json m;
  m["version"] = kVersion;
  m["experiment"] = to_string(cfg.experiment);
  m["prng"] = rng::kSchemeId;
  m["seed"] = cfg.seed;
  m["shift"] = cfg.shift == ShiftKind::Laplacian ? "laplacian" : "adjacency";
  m["alpha"] = cfg.alpha;
  m["alpha_star"] = cfg.alpha_star;
  m["bandwidth"] = cfg.bandwidth;
  m["sample_sizes"] = cfg.sample_sizes;
  m["graph_sizes"] = cfg.graph_sizes;
  m["trials"] = cfg.trials;
  m["signal_file"] = cfg.signal_file;
  m["output"] = cfg.output;
  json g;
  if (!cfg.graph.file.empty()) {
    g["file"] = cfg.graph.file;
  } else {
    g["model"] = cfg.graph.model;
    g["n"] = cfg.graph.n;
    if (cfg.graph.model == "sensor") g["k"] = cfg.graph.k;
    if (cfg.graph.model == "erdos_renyi") g["p"] = cfg.graph.p;
    if (cfg.graph.model == "community") {
      g["communities"] = cfg.graph.communities;
      g["p_in"] = cfg.graph.p_in;
      g["p_out"] = cfg.graph.p_out;
    }
    if (cfg.graph.model == "gaussian_kernel") {
      g["sigma"] = cfg.graph.sigma;
      g["density"] = cfg.graph.density;
    }
  }
  m["graph"] = g;
  m["noise"] = {{"kind", cfg.noise.spectral_variance > 0.0 ? "spectral" : "none"},
                {"variance", cfg.noise.spectral_variance}};
  json strats = json::array();
  for (const auto& s : cfg.strategies) strats.push_back(strategy_meta(s));
  m["strategies"] = strats;
  return m;
}

void record_error(json& metadata, const std::string& strategy, Index trial,
                  const std::string& what) {
  metadata["errors"].push_back(
      {{"strategy", strategy}, {"trial", trial}, {"message", what}});
}

std::vector<Index> sorted_sizes(const ExperimentConfig& cfg, Index n) {
  if (cfg.sample_sizes.empty()) {
    throw ConfigError("sample_sizes is required for this experiment");
  }
  std::vector<Index> sizes = cfg.sample_sizes;
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  if (sizes.front() < 1 || sizes.back() > n) {
    throw ConfigError("sample_sizes must lie in [1, n]");
  }
  return sizes;
}

RVector real_signal_from_file(const std::string& path, Index expected_n) {
  const CVector x = read_signal_csv(path);
  if (expected_n > 0 && x.size() != expected_n) {
    throw ConfigError(path + ": signal length " + std::to_string(x.size()) +
                      " does not match graph size " + std::to_string(expected_n));
  }
  return x.real();
}

struct Stage {
  Graph graph;
  GfrftPlan plan;
};

Stage make_stage(const ExperimentConfig& cfg, const GraphSpec& spec, uint64_t graph_seed,
                 const RVector* signal = nullptr) {
  Stage st;
  st.graph = spec.build(graph_seed, signal);
  st.plan = gfrft_plan(gft_basis(make_shift(st.graph, cfg.shift)));
  return st;
}

}  // namespace

const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::SweepSize: return "sweep-size";
    case ExperimentKind::SweepAlpha: return "sweep-alpha";
    case ExperimentKind::Runtime: return "runtime";
    case ExperimentKind::CdfCompare: return "cdf";
    case ExperimentKind::SingleRun: return "single";
  }
  throw InvalidArgument("to_string: unknown experiment");
}

ExperimentKind experiment_from_string(const std::string& s) {
  if (s == "sweep-size") return ExperimentKind::SweepSize;
  if (s == "sweep-alpha") return ExperimentKind::SweepAlpha;
  if (s == "runtime") return ExperimentKind::Runtime;
  if (s == "cdf") return ExperimentKind::CdfCompare;
  if (s == "single") return ExperimentKind::SingleRun;
  throw ConfigError("unknown experiment: " + s);
}

Graph GraphSpec::build(uint64_t seed, const RVector* signal) const {
  if (!file.empty()) return read_graph_json(file);
  if (model == "sensor") return random_sensor(n, k, seed);
  if (model == "erdos_renyi") return erdos_renyi(n, p, seed);
  if (model == "community") return community_graph(n, communities, p_in, p_out, seed);
  if (model == "gaussian_kernel") {
    if (signal == nullptr) {
      throw ConfigError("gaussian_kernel graph model needs a signal");
    }
    return gaussian_kernel_graph(*signal, sigma, density, seed);
  }
  throw ConfigError("unknown graph model: " + model);
}

Graph build_trial_graph(const ExperimentConfig& cfg, Index trial, const RVector* signal) {
  return cfg.graph.build(rng::derive(cfg.seed, {kGraphStream, (uint64_t)trial}), signal);
}

StrategyConfig resolve_strategy_spec(const StrategySpec& spec, const IndexSet& band,
                                     uint64_t master_seed, Index trial,
                                     size_t strategy_index) {
  return resolve_strategy(spec, band, master_seed,
                          {kStrategyStream, (uint64_t)trial, (uint64_t)strategy_index});
}

ExperimentOutput run_sweep_size(const ExperimentConfig& cfg) {
  ExperimentOutput out;
  out.table.columns = kColumns;
  out.metadata = base_metadata(cfg);
  const double alpha = cfg.alpha.front();

  for (Index trial = 0; trial < cfg.trials; ++trial) {
    const Stage st = make_stage(cfg, cfg.graph, rng::derive(cfg.seed, {kGraphStream, (uint64_t)trial}));
    const Index n = st.graph.n;
    const std::vector<Index> sizes = sorted_sizes(cfg, n);
    const GfrftOperator op = gfrft_operator(st.plan, alpha);
    const IndexSet band = IndexSet::first(cfg.bandwidth, n);
    const CVector truth = bandlimit(op, band, pm_one(n));
    CVector observed = truth;
    if (cfg.noise.spectral_variance > 0.0) {
      rng::SplitMix64 g(rng::derive(cfg.seed, {kNoiseStream, (uint64_t)trial}));
      observed += spectral_noise(op, cfg.noise.spectral_variance, g);
    }

    for (size_t si = 0; si < cfg.strategies.size(); ++si) {
      const StrategySpec& spec = cfg.strategies[si];
      try {
        const StrategyConfig scfg = resolve_strategy(
            spec, band, cfg.seed, {kStrategyStream, (uint64_t)trial, (uint64_t)si});
        const SamplingResult res = greedy_select(op, band, sizes.back(), scfg);
        for (Index m : sizes) {
          std::vector<Index> prefix(res.selected.begin(), res.selected.begin() + m);
          const IndexSet sset(std::move(prefix), n);
          const auto t0 = Clock::now();
          const Reconstructor rec = build_reconstructor(op, band, sset);
          const CVector est = reconstruct(rec, sample(observed, sset));
          const double rec_seconds = seconds_since(t0);
          const ErrorMetrics em = error_metrics(truth, est);
          out.table.add_row(make_row(to_string(spec.kind), alpha, n, m, trial, em.mse,
                                     em.snr_db, total_seconds(res, m), rec_seconds));
        }
      } catch (const Error& e) {
        record_error(out.metadata, to_string(spec.kind), trial, e.what());
      }
    }
  }
  return out;
}

ExperimentOutput run_sweep_alpha(const ExperimentConfig& cfg) {
  ExperimentOutput out;
  out.table.columns = kColumns;
  out.metadata = base_metadata(cfg);
  bool in_grid = false;
  for (double a : cfg.alpha) in_grid = in_grid || std::abs(a - cfg.alpha_star) < 1e-12;
  if (!in_grid) throw ConfigError("alpha_star must be one of the alpha grid values");

  for (Index trial = 0; trial < cfg.trials; ++trial) {
    const Stage st = make_stage(cfg, cfg.graph, rng::derive(cfg.seed, {kGraphStream, (uint64_t)trial}));
    const Index n = st.graph.n;
    const Index m = cfg.sample_sizes.empty() ? cfg.bandwidth : cfg.sample_sizes.front();
    if (m < 1 || m > n) throw ConfigError("sample size must lie in [1, n]");
    const IndexSet band = IndexSet::first(cfg.bandwidth, n);
    const GfrftOperator op_star = gfrft_operator(st.plan, cfg.alpha_star);
    const CVector truth = bandlimit(op_star, band, pm_one(n));
    if (trial == 0 && std::abs(cfg.alpha_star - 1.0) < 1e-12) {
      out.metadata["alpha_star_gft_defect"] =
          (op_star.forward - st.plan.basis.gft_matrix()).norm();
    }

    for (size_t ai = 0; ai < cfg.alpha.size(); ++ai) {
      const double alpha = cfg.alpha[ai];
      const GfrftOperator op = gfrft_operator(st.plan, alpha);
      CVector observed = truth;
      if (cfg.noise.spectral_variance > 0.0) {
        rng::SplitMix64 g(rng::derive(cfg.seed, {kNoiseStream, (uint64_t)trial, (uint64_t)ai}));
        observed += spectral_noise(op, cfg.noise.spectral_variance, g);
      }
      for (size_t si = 0; si < cfg.strategies.size(); ++si) {
        const StrategySpec& spec = cfg.strategies[si];
        try {
          const StrategyConfig scfg = resolve_strategy(
              spec, band, cfg.seed,
              {kStrategyStream, (uint64_t)trial, (uint64_t)si, (uint64_t)ai});
          const SamplingResult res = greedy_select(op, band, m, scfg);
          const auto t0 = Clock::now();
          const Reconstructor rec = build_reconstructor(op, band, res.index_set(n));
          const CVector est = reconstruct(rec, sample(observed, res.index_set(n)));
          const double rec_seconds = seconds_since(t0);
          const ErrorMetrics em = error_metrics(truth, est);
          out.table.add_row(make_row(to_string(spec.kind), alpha, n, m, trial, em.mse,
                                     em.snr_db, total_seconds(res, m), rec_seconds));
        } catch (const Error& e) {
          record_error(out.metadata, to_string(spec.kind), trial, e.what());
        }
      }
    }
  }
  return out;
}

ExperimentOutput run_runtime(const ExperimentConfig& cfg) {
  ExperimentOutput out;
  out.table.columns = kColumns;
  out.metadata = base_metadata(cfg);
  if (cfg.graph_sizes.empty()) {
    throw ConfigError("graph_sizes is required for the runtime experiment");
  }
  const double alpha = cfg.alpha.front();

  for (size_t ni = 0; ni < cfg.graph_sizes.size(); ++ni) {
    GraphSpec spec = cfg.graph;
    spec.n = cfg.graph_sizes[ni];
    for (Index trial = 0; trial < cfg.trials; ++trial) {
      const Stage st = make_stage(
          cfg, spec, rng::derive(cfg.seed, {kGraphStream, (uint64_t)trial, (uint64_t)ni}));
      const Index n = st.graph.n;
      const Index m = cfg.sample_sizes.empty() ? std::max<Index>(Index{1}, n / 10)
                                               : cfg.sample_sizes.front();
      if (m > n) throw ConfigError("sample size exceeds graph size");
      const IndexSet band = IndexSet::first(cfg.bandwidth, n);
      const GfrftOperator op = gfrft_operator(st.plan, alpha);

      // f = F^{-alpha}(z_F + xi): band entries N(0, 0.1) plus broadband
      // N(0, 0.01); identical for every strategy at this (n, trial).
      rng::SplitMix64 g(rng::derive(cfg.seed, {kSignalStream, (uint64_t)trial, (uint64_t)ni}));
      CVector hat = CVector::Zero(n);
      for (Index k = 0; k < band.size(); ++k) {
        hat(band[k]) = Complex(std::sqrt(0.1) * g.gaussian(), 0.0);
      }
      for (Index i = 0; i < n; ++i) {
        hat(i) += Complex(std::sqrt(0.01) * g.gaussian(), 0.0);
      }
      const CVector f = op.forward.adjoint() * hat;

      for (size_t si = 0; si < cfg.strategies.size(); ++si) {
        const StrategySpec& sspec = cfg.strategies[si];
        try {
          const StrategyConfig scfg = resolve_strategy(
              sspec, band, cfg.seed,
              {kStrategyStream, (uint64_t)trial, (uint64_t)si, (uint64_t)ni});
          const SamplingResult res = greedy_select(op, band, m, scfg);
          const auto t0 = Clock::now();
          const Reconstructor rec = build_reconstructor(op, band, res.index_set(n));
          const CVector est = reconstruct(rec, sample(f, res.index_set(n)));
          const double rec_seconds = seconds_since(t0);
          const ErrorMetrics em = error_metrics(f, est);
          out.table.add_row(make_row(to_string(sspec.kind), alpha, n, m, trial, em.mse,
                                     em.snr_db, total_seconds(res, m), rec_seconds));
        } catch (const Error& e) {
          record_error(out.metadata, to_string(sspec.kind), trial, e.what());
        }
      }
    }
  }
  return out;
}

ExperimentOutput run_single(const ExperimentConfig& cfg) {
  ExperimentOutput out;
  out.table.columns = kColumns;
  out.metadata = base_metadata(cfg);
  const double alpha = cfg.alpha.front();
  out.metadata["runs"] = json::array();

  for (Index trial = 0; trial < cfg.trials; ++trial) {
    const Stage st = make_stage(cfg, cfg.graph, rng::derive(cfg.seed, {kGraphStream, (uint64_t)trial}));
    const Index n = st.graph.n;
    const std::vector<Index> sizes = sorted_sizes(cfg, n);
    const Index m = sizes.front();
    const IndexSet band = IndexSet::first(cfg.bandwidth, n);
    const GfrftOperator op = gfrft_operator(st.plan, alpha);

    CVector x0(n);
    if (!cfg.signal_file.empty()) {
      x0 = read_signal_csv(cfg.signal_file);
      if (x0.size() != n) {
        throw ConfigError("signal length does not match graph size");
      }
    } else {
      rng::SplitMix64 g(rng::derive(cfg.seed, {kSignalStream, (uint64_t)trial}));
      for (Index i = 0; i < n; ++i) x0(i) = Complex(g.gaussian(), 0.0);
    }
    const CVector truth = bandlimit(op, band, x0);
    CVector observed = truth;
    if (cfg.noise.spectral_variance > 0.0) {
      rng::SplitMix64 g(rng::derive(cfg.seed, {kNoiseStream, (uint64_t)trial}));
      observed += spectral_noise(op, cfg.noise.spectral_variance, g);
    }
    const CMatrix bproj = band_projector(op, band);
    if (trial == 0) out.signal_sidecars.emplace_back("truth.csv", truth);

    for (size_t si = 0; si < cfg.strategies.size(); ++si) {
      const StrategySpec& spec = cfg.strategies[si];
      try {
        const StrategyConfig scfg = resolve_strategy(
            spec, band, cfg.seed, {kStrategyStream, (uint64_t)trial, (uint64_t)si});
        const SamplingResult res = greedy_select(op, band, m, scfg);
        const IndexSet sset = res.index_set(n);
        const auto t0 = Clock::now();
        const Reconstructor rec = build_reconstructor(op, band, sset);
        const CVector est = reconstruct(rec, sample(observed, sset));
        const double rec_seconds = seconds_since(t0);
        const ErrorMetrics em = error_metrics(truth, est);
        out.table.add_row(make_row(to_string(spec.kind), alpha, n, m, trial, em.mse,
                                   em.snr_db, total_seconds(res, m), rec_seconds));

        json run;
        run["strategy"] = to_string(spec.kind);
        run["trial"] = trial;
        run["selected"] = res.selected;
        run["margin"] = recoverability_margin(vertex_projector(sset), bproj);
        run["cond"] = rec.cond;
        run["ill_conditioned"] = rec.ill_conditioned;
        run["pinv_fallbacks"] = res.pinv_fallbacks;
        out.metadata["runs"].push_back(run);
        if (trial == 0) {
          out.signal_sidecars.emplace_back(
              std::string("reconstructed_") + to_string(spec.kind) + ".csv", est);
        }
      } catch (const Error& e) {
        record_error(out.metadata, to_string(spec.kind), trial, e.what());
      }
    }
  }
  return out;
}

ExperimentOutput run_cdf_compare(const ExperimentConfig& cfg) {
  ExperimentOutput out;
  out.table.columns = kColumns;
  out.table.columns.push_back("ks_distance");
  out.metadata = base_metadata(cfg);
  out.metadata["best"] = json::array();
  if (cfg.alpha.empty()) throw ConfigError("alpha grid must be nonempty");

  for (Index trial = 0; trial < cfg.trials; ++trial) {
    // The gaussian_kernel model derives the graph from the signal, so the
    // signal must exist first; every other model fixes n, so a surrogate is
    // sized after the graph is built.
    RVector signal;
    const bool kernel_model =
        cfg.graph.file.empty() && cfg.graph.model == "gaussian_kernel";
    if (!cfg.signal_file.empty()) {
      signal = real_signal_from_file(cfg.signal_file, 0);
    } else if (kernel_model) {
      signal = ar1_surrogate(cfg.graph.n, 0.9,
                             rng::derive(cfg.seed, {kSignalStream, (uint64_t)trial}));
    }
    const Stage st = make_stage(cfg, cfg.graph,
                                rng::derive(cfg.seed, {kGraphStream, (uint64_t)trial}),
                                signal.size() > 0 ? &signal : nullptr);
    const Index n = st.graph.n;
    if (signal.size() == 0) {
      signal = ar1_surrogate(n, 0.9, rng::derive(cfg.seed, {kSignalStream, (uint64_t)trial}));
    }
    if (signal.size() != n) throw ConfigError("signal length does not match graph size");
    const Index m = cfg.sample_sizes.empty() ? std::min<Index>(n, 50) : cfg.sample_sizes.front();
    const IndexSet band = IndexSet::first(cfg.bandwidth, n);
    const CVector truth = signal.cast<Complex>();
    const RVector truth_mag = truth.cwiseAbs();

    if (trial == 0) {
      ResultTable cdf;
      cdf.columns = {"magnitude", "cdf"};
      RVector sortedm = truth_mag;
      std::sort(sortedm.begin(), sortedm.end());
      for (Index i = 0; i < n; ++i) {
        cdf.add_row({format_double(sortedm(i)),
                     format_double(static_cast<double>(i + 1) / static_cast<double>(n))});
      }
      out.table_sidecars.emplace_back("cdf_original.csv", cdf);
    }

    for (size_t si = 0; si < cfg.strategies.size(); ++si) {
      const StrategySpec& spec = cfg.strategies[si];
      struct Best {
        double alpha = 0.0, mse = 0.0, snr = -std::numeric_limits<double>::infinity();
        double select_s = 0.0, rec_s = 0.0, ks = 0.0;
        CVector est;
      } best;
      try {
        const auto evaluate = [&](double alpha) {
          const GfrftOperator op = gfrft_operator(st.plan, alpha);
          const StrategyConfig scfg = resolve_strategy(
              spec, band, cfg.seed, {kStrategyStream, (uint64_t)trial, (uint64_t)si});
          const SamplingResult res = greedy_select(op, band, m, scfg);
          const auto t0 = Clock::now();
          const Reconstructor rec = build_reconstructor(op, band, res.index_set(n));
          const CVector est = reconstruct(rec, sample(truth, res.index_set(n)));
          const double rec_seconds = seconds_since(t0);
          const ErrorMetrics em = error_metrics(truth, est);
          if (em.snr_db > best.snr) {
            best = {alpha, em.mse, em.snr_db, total_seconds(res, m), rec_seconds,
                    ks_distance(truth_mag, est.cwiseAbs()), est};
          }
        };
        for (double alpha : cfg.alpha) evaluate(alpha);

        // Refine around the coarse winner at a fifth of the local spacing.
        if (cfg.alpha.size() >= 2) {
          std::vector<double> grid = cfg.alpha;
          std::sort(grid.begin(), grid.end());
          const auto it = std::min_element(grid.begin(), grid.end(), [&](double a, double b) {
            return std::abs(a - best.alpha) < std::abs(b - best.alpha);
          });
          const size_t bi = static_cast<size_t>(it - grid.begin());
          double step = std::numeric_limits<double>::infinity();
          if (bi > 0) step = std::min(step, grid[bi] - grid[bi - 1]);
          if (bi + 1 < grid.size()) step = std::min(step, grid[bi + 1] - grid[bi]);
          const double center = best.alpha;
          for (int j = -4; j <= 4; ++j) {
            if (j == 0) continue;
            const double a = center + j * (step / 5.0);
            if (a < grid.front() - 1e-12 || a > grid.back() + 1e-12) continue;
            evaluate(a);
          }
        }

        std::vector<std::string> r =
            make_row(to_string(spec.kind), best.alpha, n, m, trial, best.mse, best.snr,
                     best.select_s, best.rec_s);
        r.push_back(format_double(best.ks));
        out.table.add_row(std::move(r));
        out.metadata["best"].push_back({{"strategy", to_string(spec.kind)},
                                        {"trial", trial},
                                        {"alpha", best.alpha},
                                        {"snr_db", best.snr},
                                        {"ks_distance", best.ks}});
        if (trial == 0) {
          ResultTable cdf;
          cdf.columns = {"magnitude", "cdf"};
          RVector sortedm = best.est.cwiseAbs();
          std::sort(sortedm.begin(), sortedm.end());
          for (Index i = 0; i < n; ++i) {
            cdf.add_row({format_double(sortedm(i)),
                         format_double(static_cast<double>(i + 1) / static_cast<double>(n))});
          }
          out.table_sidecars.emplace_back(
              std::string("cdf_") + to_string(spec.kind) + ".csv", cdf);
        }
      } catch (const Error& e) {
        record_error(out.metadata, to_string(spec.kind), trial, e.what());
      }
    }
  }
  return out;
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case ExperimentKind::SweepSize: return run_sweep_size(cfg);
    case ExperimentKind::SweepAlpha: return run_sweep_alpha(cfg);
    case ExperimentKind::Runtime: return run_runtime(cfg);
    case ExperimentKind::CdfCompare: return run_cdf_compare(cfg);
    case ExperimentKind::SingleRun: return run_single(cfg);
  }
  throw InvalidArgument("run_experiment: unknown experiment");
}

namespace {

// Row order must not depend on generation order: strategy first, then the
// remaining columns compared numerically when both cells parse as numbers.
bool row_less(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  for (size_t c = 0; c < a.size() && c < b.size(); ++c) {
    if (a[c] == b[c]) continue;
    char* enda = nullptr;
    char* endb = nullptr;
    const double xa = std::strtod(a[c].c_str(), &enda);
    const double xb = std::strtod(b[c].c_str(), &endb);
    const bool numeric = !a[c].empty() && !b[c].empty() && *enda == '\0' && *endb == '\0';
    if (numeric && xa != xb) return xa < xb;
    if (!numeric) return a[c] < b[c];
  }
  return a.size() < b.size();
}

}  // namespace

void write_output(const ExperimentOutput& out, const std::string& csv_path) {
  ResultTable sorted = out.table;
  std::stable_sort(sorted.rows.begin(), sorted.rows.end(), row_less);
  write_csv(sorted, csv_path);
  write_json(out.metadata, csv_path + ".meta.json");
  for (const auto& [suffix, table] : out.table_sidecars) {
    write_csv(table, csv_path + "." + suffix);
  }
  for (const auto& [suffix, sig] : out.signal_sidecars) {
    write_signal_csv(sig, csv_path + "." + suffix);
  }
}

double ks_distance(const RVector& a, const RVector& b) {
  if (a.size() == 0 || b.size() == 0) {
    throw InvalidArgument("ks_distance: empty sample");
  }
  std::vector<double> va(a.begin(), a.end());
  std::vector<double> vb(b.begin(), b.end());
  std::sort(va.begin(), va.end());
  std::sort(vb.begin(), vb.end());
  const double na = static_cast<double>(va.size());
  const double nb = static_cast<double>(vb.size());
  double d = 0.0;
  const auto cdf = [](const std::vector<double>& v, double t) {
    return static_cast<double>(std::upper_bound(v.begin(), v.end(), t) - v.begin());
  };
  for (double t : va) d = std::max(d, std::abs(cdf(va, t) / na - cdf(vb, t) / nb));
  for (double t : vb) d = std::max(d, std::abs(cdf(va, t) / na - cdf(vb, t) / nb));
  return d;
}

RVector ar1_surrogate(Index n, double phi, uint64_t seed) {
  if (n < 1) throw InvalidArgument("ar1_surrogate: n must be >= 1");
  if (!(std::abs(phi) < 1.0)) {
    throw InvalidArgument("ar1_surrogate: |phi| must be < 1");
  }
  rng::SplitMix64 g(seed);
  RVector x(n);
  x(0) = g.gaussian() / std::sqrt(1.0 - phi * phi);
  for (Index t = 1; t < n; ++t) x(t) = phi * x(t - 1) + g.gaussian();
  return x;
}

ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> kTop = {
      "experiment", "graph",   "shift",   "alpha",        "alpha_star",
      "bandwidth",  "sample_sizes", "graph_sizes", "strategies", "noise",
      "trials",     "seed",    "signal_file", "output"};
  for (const auto& item : j.items()) {
    if (kTop.find(item.key()) == kTop.end()) {
      throw ConfigError("unknown config key: " + item.key());
    }
  }
  ExperimentConfig cfg;
  try {
    if (j.contains("experiment")) {
      cfg.experiment = experiment_from_string(j["experiment"].get<std::string>());
    }
    if (j.contains("graph")) {
      const json& g = j["graph"];
      if (!g.is_object()) throw ConfigError("graph must be an object");
      static const std::set<std::string> kGraph = {"file", "model", "n", "k", "p",
                                                   "communities", "p_in", "p_out",
                                                   "sigma", "density"};
      for (const auto& item : g.items()) {
        if (kGraph.find(item.key()) == kGraph.end()) {
          throw ConfigError("unknown graph key: " + item.key());
        }
      }
      if (g.contains("file")) {
        cfg.graph.file = g["file"].get<std::string>();
        if (!file_exists(cfg.graph.file)) {
          throw ConfigError("graph file not found: " + cfg.graph.file);
        }
      }
      if (g.contains("model")) cfg.graph.model = g["model"].get<std::string>();
      if (g.contains("n")) cfg.graph.n = g["n"].get<Index>();
      if (g.contains("k")) cfg.graph.k = g["k"].get<int>();
      if (g.contains("p")) cfg.graph.p = g["p"].get<double>();
      if (g.contains("communities")) cfg.graph.communities = g["communities"].get<int>();
      if (g.contains("p_in")) cfg.graph.p_in = g["p_in"].get<double>();
      if (g.contains("p_out")) cfg.graph.p_out = g["p_out"].get<double>();
      if (g.contains("sigma")) cfg.graph.sigma = g["sigma"].get<double>();
      if (g.contains("density")) cfg.graph.density = g["density"].get<double>();
      if (cfg.graph.file.empty() && cfg.graph.n < 1) {
        throw ConfigError("graph n must be >= 1");
      }
    }
    if (j.contains("shift")) {
      const std::string s = j["shift"].get<std::string>();
      if (s == "laplacian") {
        cfg.shift = ShiftKind::Laplacian;
      } else if (s == "adjacency") {
        cfg.shift = ShiftKind::Adjacency;
      } else {
        throw ConfigError("shift must be laplacian or adjacency");
      }
    }
    if (j.contains("alpha")) {
      cfg.alpha.clear();
      if (j["alpha"].is_array()) {
        for (const auto& a : j["alpha"]) cfg.alpha.push_back(a.get<double>());
      } else {
        cfg.alpha.push_back(j["alpha"].get<double>());
      }
      if (cfg.alpha.empty()) throw ConfigError("alpha must be nonempty");
      for (double a : cfg.alpha) {
        if (!std::isfinite(a)) throw ConfigError("alpha values must be finite");
      }
    }
    cfg.alpha_star = j.contains("alpha_star") ? j["alpha_star"].get<double>()
                                              : cfg.alpha.front();
    if (!std::isfinite(cfg.alpha_star)) throw ConfigError("alpha_star must be finite");
    if (j.contains("bandwidth")) cfg.bandwidth = j["bandwidth"].get<Index>();
    if (cfg.bandwidth < 1) throw ConfigError("bandwidth must be >= 1");
    if (j.contains("sample_sizes")) {
      for (const auto& s : j["sample_sizes"]) {
        const Index v = s.get<Index>();
        if (v < 1) throw ConfigError("sample_sizes entries must be >= 1");
        cfg.sample_sizes.push_back(v);
      }
    }
    if (j.contains("graph_sizes")) {
      for (const auto& s : j["graph_sizes"]) {
        const Index v = s.get<Index>();
        if (v < 2) throw ConfigError("graph_sizes entries must be >= 2");
        cfg.graph_sizes.push_back(v);
      }
    }
    if (j.contains("strategies")) {
      const auto parse_kind = [](const std::string& name) {
        try {
          return strategy_from_string(name);
        } catch (const InvalidArgument& e) {
          throw ConfigError(e.what());
        }
      };
      for (const auto& s : j["strategies"]) {
        StrategySpec spec;
        if (s.is_string()) {
          spec.kind = parse_kind(s.get<std::string>());
        } else if (s.is_object()) {
          static const std::set<std::string> kStrat = {"kind", "k", "kernel",
                                                       "poly_degree", "fast_updates"};
          for (const auto& item : s.items()) {
            if (kStrat.find(item.key()) == kStrat.end()) {
              throw ConfigError("unknown strategy key: " + item.key());
            }
          }
          spec.kind = parse_kind(s.at("kind").get<std::string>());
          if (s.contains("k")) spec.cut_order = s["k"].get<int>();
          if (s.contains("kernel")) spec.kernel = s["kernel"].get<std::string>();
          if (s.contains("poly_degree")) spec.poly_degree = s["poly_degree"].get<int>();
          if (s.contains("fast_updates")) spec.fast_updates = s["fast_updates"].get<bool>();
        } else {
          throw ConfigError("strategy entries must be strings or objects");
        }
        if (spec.cut_order < 1) throw ConfigError("strategy k must be >= 1");
        if (spec.kernel != "ideal" && spec.kernel != "poly") {
          throw ConfigError("kernel must be ideal or poly");
        }
        cfg.strategies.push_back(spec);
      }
    }
    if (cfg.strategies.empty()) {
      for (StrategyKind k : {StrategyKind::MaxCut, StrategyKind::MaxSigMin,
                             StrategyKind::MinTrac, StrategyKind::MinPinv,
                             StrategyKind::MaxSig, StrategyKind::MaxVol,
                             StrategyKind::MaxCov, StrategyKind::Random}) {
        StrategySpec spec;
        spec.kind = k;
        cfg.strategies.push_back(spec);
      }
    }
    if (j.contains("noise")) {
      const json& nz = j["noise"];
      if (!nz.is_object() || !nz.contains("kind")) {
        throw ConfigError("noise must be {\"kind\": \"none\"|\"spectral\", ...}");
      }
      const std::string kind = nz["kind"].get<std::string>();
      if (kind == "none") {
        cfg.noise.spectral_variance = 0.0;
      } else if (kind == "spectral") {
        cfg.noise.spectral_variance = nz.at("variance").get<double>();
        if (!(cfg.noise.spectral_variance >= 0.0)) {
          throw ConfigError("noise variance must be >= 0");
        }
      } else {
        throw ConfigError("noise kind must be none or spectral");
      }
    }
    if (j.contains("trials")) cfg.trials = j["trials"].get<Index>();
    if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
    if (j.contains("seed")) {
      if (j["seed"].is_number_unsigned()) {
        cfg.seed = j["seed"].get<uint64_t>();
      } else if (j["seed"].is_number_integer() && j["seed"].get<int64_t>() >= 0) {
        cfg.seed = static_cast<uint64_t>(j["seed"].get<int64_t>());
      } else {
        throw ConfigError("seed must be a nonnegative integer");
      }
    }
    if (j.contains("signal_file")) {
      cfg.signal_file = j["signal_file"].get<std::string>();
      if (!cfg.signal_file.empty() && !file_exists(cfg.signal_file)) {
        throw ConfigError("signal file not found: " + cfg.signal_file);
      }
    }
    if (j.contains("output")) cfg.output = j["output"].get<std::string>();
    if (cfg.output.empty()) throw ConfigError("output must be nonempty");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return parse_experiment_config(read_json(path));
}

}  // namespace gfrft
