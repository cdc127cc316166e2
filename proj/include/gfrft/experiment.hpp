#pragma once

#include <cstdint>
#include <json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "gfrft/graph.hpp"
#include "gfrft/io.hpp"
#include "gfrft/reconstruct.hpp"
#include "gfrft/sampling.hpp"

namespace gfrft {

enum class ExperimentKind { SweepSize, SweepAlpha, Runtime, CdfCompare, SingleRun };

const char* to_string(ExperimentKind k);
ExperimentKind experiment_from_string(const std::string& s);

// Graph source: an on-disk file wins over a generator model. Generator
// parameters not used by the selected model are ignored.
struct GraphSpec {
  std::string file;                // JSON graph path; empty = generate
  std::string model = "sensor";    // sensor | erdos_renyi | community | gaussian_kernel
  Index n = 200;
  int k = 6;                       // sensor neighbors
  double p = 0.05;                 // erdos_renyi edge probability
  int communities = 4;
  double p_in = 0.3;
  double p_out = 0.01;
  double sigma = 1.0;              // gaussian_kernel width
  double density = 0.05;           // gaussian_kernel pair probability

  // gaussian_kernel builds edges from this signal; other models ignore it.
  Graph build(uint64_t seed, const RVector* signal = nullptr) const;
};

// noise.spectral_variance > 0 adds F^{-alpha} xi to the observed signal with
// xi i.i.d. N(0, variance) across all fractional frequencies.
struct NoiseSpec {
  double spectral_variance = 0.0;
};

// Config-level strategy entry; resolved to a StrategyConfig per run (Random
// gets a seed substream, MaxCov gets the kernel below).
struct StrategySpec {
  StrategyKind kind = StrategyKind::MaxSigMin;
  int cut_order = 6;
  std::string kernel = "ideal";  // ideal | poly (MaxCov)
  int poly_degree = 5;
  bool fast_updates = false;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::SweepSize;
  GraphSpec graph;
  ShiftKind shift = ShiftKind::Laplacian;
  std::vector<double> alpha = {0.7};   // SweepAlpha/CdfCompare grid; else first entry
  double alpha_star = 0.7;             // order the test signal is bandlimited at
  Index bandwidth = 40;                // |F|, the first `bandwidth` fractional frequencies
  std::vector<Index> sample_sizes;     // SweepSize grid / single |S|; Runtime: n/10 if empty
  std::vector<Index> graph_sizes;      // Runtime only
  std::vector<StrategySpec> strategies;
  NoiseSpec noise;
  Index trials = 1;
  uint64_t seed = 1;
  std::string signal_file;             // optional real-signal CSV (CdfCompare, SingleRun)
  std::string output = "results.csv";
};

// Parses the JSON mirror of ExperimentConfig. Unknown keys, malformed values,
// and missing referenced files raise ConfigError.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::string& path);

struct ExperimentOutput {
  ResultTable table;
  nlohmann::json metadata;
  // Extra CSV files written next to the main table, keyed by filename suffix.
  std::vector<std::pair<std::string, ResultTable>> table_sidecars;
  std::vector<std::pair<std::string, CVector>> signal_sidecars;
};

// Builds the graph a given trial of cfg would use (same seed substream), so
// `graph gen` output matches what the experiment runners see.
Graph build_trial_graph(const ExperimentConfig& cfg, Index trial,
                        const RVector* signal = nullptr);

// Resolves a config-level strategy entry exactly as trial `trial` of an
// experiment would (kernel instantiation, Random seed substream).
StrategyConfig resolve_strategy_spec(const StrategySpec& spec, const IndexSet& band,
                                     uint64_t master_seed, Index trial,
                                     size_t strategy_index);

ExperimentOutput run_sweep_size(const ExperimentConfig& cfg);
ExperimentOutput run_sweep_alpha(const ExperimentConfig& cfg);
ExperimentOutput run_runtime(const ExperimentConfig& cfg);
ExperimentOutput run_cdf_compare(const ExperimentConfig& cfg);
ExperimentOutput run_single(const ExperimentConfig& cfg);
ExperimentOutput run_experiment(const ExperimentConfig& cfg);

// Writes table to csv_path, metadata to csv_path + ".meta.json", and each
// sidecar to csv_path + "." + suffix.
void write_output(const ExperimentOutput& out, const std::string& csv_path);

// Two-sample Kolmogorov-Smirnov distance between the empirical distributions
// of a and b: sup_t |F_a(t) - F_b(t)|.
double ks_distance(const RVector& a, const RVector& b);

// Stationary AR(1) surrogate: x[t] = phi x[t-1] + g[t], g ~ N(0,1), x[0]
// drawn from the stationary marginal N(0, 1/(1-phi^2)). |phi| < 1 required.
RVector ar1_surrogate(Index n, double phi, uint64_t seed);

}  // namespace gfrft
