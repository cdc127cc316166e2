// Command-line front end: every subcommand reads the same JSON config schema
// (the ExperimentConfig mirror) so pipelines share one vocabulary.
//
// Exit codes: 0 success, 2 config/IO problem, 3 numeric failure inside the
// library, 4 anything else.

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>

#include "gfrft/experiment.hpp"
#include "gfrft/gfrft.hpp"
#include "gfrft/io.hpp"
#include "gfrft/rng.hpp"

namespace {

using gfrft::CVector;
using gfrft::Graph;
using gfrft::Index;
using gfrft::IndexSet;
using gfrft::RVector;

struct Common {
  std::string config;
  std::string out;
  std::optional<uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& c, bool out_required = true) {
  cmd->add_option("--config", c.config, "JSON config file")->required();
  auto* out = cmd->add_option("--out", c.out, "output path");
  if (out_required) out->required();
  cmd->add_option("--seed", c.seed, "override the config seed");
}

gfrft::ExperimentConfig load(const Common& c) {
  gfrft::ExperimentConfig cfg = gfrft::load_experiment_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  return cfg;
}

// gaussian_kernel graphs are built from a signal; take it from signal_file.
Graph build_graph(const gfrft::ExperimentConfig& cfg) {
  std::optional<RVector> sig;
  if (cfg.graph.file.empty() && cfg.graph.model == "gaussian_kernel") {
    if (cfg.signal_file.empty()) {
      throw gfrft::ConfigError("gaussian_kernel graph model needs signal_file");
    }
    sig = gfrft::read_signal_csv(cfg.signal_file).real();
  }
  return gfrft::build_trial_graph(cfg, 0, sig ? &*sig : nullptr);
}

int cmd_graph_gen(const Common& c) {
  const auto cfg = load(c);
  const Graph g = build_graph(cfg);
  gfrft::write_graph_json(g, c.out);
  std::cout << "wrote graph n=" << g.n << " edges=" << g.edge_count() << " to " << c.out
            << "\n";
  return 0;
}

int cmd_graph_info(const Common& c) {
  const auto cfg = load(c);
  const Graph g = build_graph(cfg);
  const RVector deg = g.degrees();
  nlohmann::json info;
  info["n"] = g.n;
  info["edges"] = g.edge_count();
  info["connected"] = g.connected();
  info["min_degree"] = deg.minCoeff();
  info["max_degree"] = deg.maxCoeff();
  info["mean_degree"] = deg.mean();
  info["has_coords"] = g.coords.has_value();
  if (c.out.empty()) {
    std::cout << info.dump(2) << "\n";
  } else {
    gfrft::write_json(info, c.out);
    std::cout << "wrote graph info to " << c.out << "\n";
  }
  return 0;
}

int cmd_sample(const Common& c) {
  const auto cfg = load(c);
  const Graph g = build_graph(cfg);
  const auto plan = gfrft::gfrft_plan(gfrft::gft_basis(gfrft::make_shift(g, cfg.shift)));
  const auto op = gfrft::gfrft_operator(plan, cfg.alpha.front());
  const IndexSet band = IndexSet::first(cfg.bandwidth, g.n);
  const Index m = cfg.sample_sizes.empty() ? cfg.bandwidth : cfg.sample_sizes.front();

  nlohmann::json out = nlohmann::json::array();
  for (size_t si = 0; si < cfg.strategies.size(); ++si) {
    const auto& spec = cfg.strategies[si];
    const auto scfg = gfrft::resolve_strategy_spec(spec, band, cfg.seed, 0, si);
    const auto res = gfrft::greedy_select(op, band, m, scfg);
    double elapsed = 0.0;
    for (double t : res.elapsed_seconds) elapsed += t;
    out.push_back({{"strategy", gfrft::to_string(spec.kind)},
                   {"selected", res.selected},
                   {"objective_trace", res.objective_trace},
                   {"pinv_fallbacks", res.pinv_fallbacks},
                   {"elapsed_seconds", elapsed}});
  }
  gfrft::write_json(out, c.out);
  std::cout << "wrote " << out.size() << " selection(s) of size " << m << " to " << c.out
            << "\n";
  return 0;
}

int cmd_reconstruct(const Common& c) {
  const auto cfg = load(c);
  if (cfg.signal_file.empty()) {
    throw gfrft::ConfigError("reconstruct needs signal_file (the observed signal)");
  }
  const Graph g = build_graph(cfg);
  const auto plan = gfrft::gfrft_plan(gfrft::gft_basis(gfrft::make_shift(g, cfg.shift)));
  const auto op = gfrft::gfrft_operator(plan, cfg.alpha.front());
  const IndexSet band = IndexSet::first(cfg.bandwidth, g.n);
  const Index m = cfg.sample_sizes.empty() ? cfg.bandwidth : cfg.sample_sizes.front();

  const CVector observed = gfrft::read_signal_csv(cfg.signal_file);
  if (observed.size() != g.n) {
    throw gfrft::ConfigError("signal length does not match graph size");
  }
  const auto& spec = cfg.strategies.front();
  const auto scfg = gfrft::resolve_strategy_spec(spec, band, cfg.seed, 0, 0);
  const auto res = gfrft::greedy_select(op, band, m, scfg);
  const IndexSet sset = res.index_set(g.n);
  const auto rec = gfrft::build_reconstructor(op, band, sset);
  const CVector est = gfrft::reconstruct(rec, gfrft::sample(observed, sset));
  gfrft::write_signal_csv(est, c.out);
  std::cout << "reconstructed with " << gfrft::to_string(spec.kind) << " |S|=" << m
            << " cond=" << rec.cond << (rec.ill_conditioned ? " (ill-conditioned)" : "")
            << "; wrote " << c.out << "\n";
  return 0;
}

int cmd_experiment(const Common& c, gfrft::ExperimentKind kind) {
  auto cfg = load(c);
  cfg.experiment = kind;
  const std::string out_path = c.out.empty() ? cfg.output : c.out;
  const auto out = gfrft::run_experiment(cfg);
  gfrft::write_output(out, out_path);
  std::cout << gfrft::to_string(kind) << ": wrote " << out.table.rows.size()
            << " rows to " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph fractional Fourier transform sampling toolkit"};
  app.require_subcommand(1);

  Common graph_gen_opts, graph_info_opts, sample_opts, reconstruct_opts;
  Common exp_opts[5];

  auto* graph = app.add_subcommand("graph", "graph generation and inspection");
  graph->require_subcommand(1);
  auto* gen = graph->add_subcommand("gen", "generate a graph and write it as JSON");
  add_common(gen, graph_gen_opts);
  auto* info = graph->add_subcommand("info", "summarize a graph");
  add_common(info, graph_info_opts, /*out_required=*/false);

  auto* sampc = app.add_subcommand("sample", "run sampling-set selection");
  add_common(sampc, sample_opts);

  auto* recc = app.add_subcommand("reconstruct", "select, sample, and reconstruct a signal");
  add_common(recc, reconstruct_opts);

  auto* expc = app.add_subcommand("experiment", "run a full experiment");
  expc->require_subcommand(1);
  const char* kinds[5] = {"sweep-size", "sweep-alpha", "runtime", "cdf", "single"};
  const char* kind_help[5] = {
      "error vs sample-set size", "error vs fractional order", "selection time vs graph size",
      "distribution match across an alpha grid", "one selection + reconstruction with artifacts"};
  CLI::App* expsub[5];
  for (int i = 0; i < 5; ++i) {
    expsub[i] = expc->add_subcommand(kinds[i], kind_help[i]);
    add_common(expsub[i], exp_opts[i], /*out_required=*/false);
  }

  try {
    app.parse(argc, argv);
    if (gen->parsed()) return cmd_graph_gen(graph_gen_opts);
    if (info->parsed()) return cmd_graph_info(graph_info_opts);
    if (sampc->parsed()) return cmd_sample(sample_opts);
    if (recc->parsed()) return cmd_reconstruct(reconstruct_opts);
    for (int i = 0; i < 5; ++i) {
      if (expsub[i]->parsed()) {
        return cmd_experiment(exp_opts[i], gfrft::experiment_from_string(kinds[i]));
      }
    }
    return 4;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const gfrft::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const gfrft::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const gfrft::Error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
