// SPDX-License-Identifier: Apache-2.0
// v2gsim command line: simulate, compare, replay, export-defaults.
#include "v2gsim/engine/config.hpp"
#include "v2gsim/engine/replay.hpp"
#include "v2gsim/engine/simulator.hpp"
#include "v2gsim/common/csv.hpp"
#include "v2gsim/common/errors.hpp"
#include "v2gsim/metrics/metrics.hpp"
#include "v2gsim/parallel/batch.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace v2g;

namespace {

struct Common {
  std::string config;
  std::vector<std::string> algorithms{"afap", "rr"};
  int runs = 1;
  std::uint64_t seed = 0;
  std::string out;
  bool emit_replays = false;
  bool emit_plot_data = false;
};

SimConfig load_or_default(const std::string &path) {
  return path.empty() ? default_config() : load_config(path);
}

void write_plot_data(const fs::path &path, const SimTrace &trace) {
  csv::Table t;
  t.header = {"t", "setpoint_kw", "total_ev_kw", "charge_price",
              "discharge_price"};
  const std::size_t nw =
      trace.steps.empty() ? 0 : trace.steps.front().transformer_kw.size();
  for (std::size_t w = 0; w < nw; ++w) {
    t.header.push_back("transformer" + std::to_string(w) + "_kw");
    t.header.push_back("transformer" + std::to_string(w) + "_overload_kw");
  }
  for (const auto &s : trace.steps) {
    std::vector<std::string> row{
        std::to_string(s.t), csv::format_exact(s.setpoint_kw),
        csv::format_exact(s.total_ev_kw), csv::format_exact(s.charge_price),
        csv::format_exact(s.discharge_price)};
    for (std::size_t w = 0; w < nw; ++w) {
      row.push_back(csv::format_exact(s.transformer_kw[w]));
      row.push_back(csv::format_exact(s.overload_kw[w]));
    }
    t.rows.push_back(std::move(row));
  }
  csv::write(path, t);
}

int run_compare(const Common &c) {
  for (const auto &a : c.algorithms)
    if (!parallel::known_algorithm(a))
      throw CLI::ValidationError("--algorithms", "unknown algorithm '" + a + "'");
  parallel::BatchSpec spec;
  spec.config = load_or_default(c.config);
  spec.algorithms = c.algorithms;
  spec.runs = c.runs;
  spec.seed_base = c.seed;
  spec.keep_traces = c.emit_plot_data;
  spec.keep_replays = c.emit_replays;
  auto results = parallel::run_batch(spec);

  std::vector<metrics::RunRow> rows;
  int failures = 0;
  for (const auto &r : results) {
    rows.push_back(r.row);
    if (!r.row.error.empty()) {
      ++failures;
      std::cerr << r.row.algorithm << " seed " << r.row.seed
                << " failed: " << r.row.error << "\n";
    }
  }
  auto summary = metrics::aggregate(rows);
  std::cout << metrics::format_summary(summary);
  if (!c.out.empty()) {
    const fs::path out = c.out;
    fs::create_directories(out);
    metrics::write_runs_csv(out / "runs.csv", rows);
    metrics::write_summary_csv(out / "summary.csv", summary);
    for (const auto &r : results) {
      const std::string stem = r.row.algorithm + "_seed" + std::to_string(r.row.seed);
      if (r.replay && (r.row.algorithm == c.algorithms.front())) {
        fs::create_directories(out / "replays");
        save_replay(out / "replays" / ("seed" + std::to_string(r.row.seed) + ".json"),
                    *r.replay);
      }
      if (r.trace) {
        fs::create_directories(out / "plot");
        write_plot_data(out / "plot" / (stem + ".csv"), *r.trace);
      }
    }
  }
  return failures == 0 ? 0 : 2;
}

void print_metrics(const std::string &algorithm, const metrics::Metrics &m) {
  const auto &cols = metrics::metric_columns();
  const auto vals = metrics::metric_values(m);
  std::cout << "algorithm: " << algorithm << "\n";
  for (std::size_t k = 0; k < cols.size(); ++k) {
    std::cout << "  " << cols[k] << ": ";
    if (std::isnan(vals[k]))
      std::cout << "NA\n";
    else
      std::cout << csv::format_exact(vals[k]) << "\n";
  }
}

int run_replay(const std::string &path, const std::string &algorithm,
               const std::string &out) {
  if (!parallel::known_algorithm(algorithm))
    throw CLI::ValidationError("--algorithm", "unknown algorithm '" + algorithm + "'");
  Replay r = load_replay(path);
  auto trace = parallel::run_on_replay(r, algorithm);
  auto m = metrics::compute_metrics(trace);
  print_metrics(algorithm, m);
  if (!out.empty()) {
    fs::create_directories(out);
    metrics::write_runs_csv(fs::path(out) / "runs.csv",
                            {metrics::RunRow{r.seed, algorithm, m, ""}});
    write_plot_data(fs::path(out) / (algorithm + "_replay.csv"), trace);
  }
  return 0;
}

void write_series(const fs::path &path, const std::string &column,
                  const std::vector<double> &v) {
  csv::Table t;
  t.header = {"step", column};
  for (std::size_t k = 0; k < v.size(); ++k)
    t.rows.push_back({std::to_string(k), csv::format_exact(v[k])});
  csv::write(path, t);
}

int run_export(const std::string &config_path, const std::string &out,
               std::uint64_t seed) {
  SimConfig cfg = load_or_default(config_path);
  const fs::path dir = out;
  fs::create_directories(dir / "behavior");
  {
    std::ofstream f(dir / "config.yaml");
    f << config_to_yaml(cfg);
  }
  ev::save_registry_csv(dir / "registry.csv", resolve_registry(cfg));
  behavior::export_behavior_csv(dir / "behavior", resolve_behavior(cfg));
  Simulator sim(cfg);
  sim.reset(seed);
  const auto &s = sim.series();
  csv::Table prices;
  prices.header = {"step", "charge_price_eur_per_kwh",
                   "discharge_price_eur_per_kwh"};
  for (std::size_t k = 0; k < s.charge_price.size(); ++k)
    prices.rows.push_back({std::to_string(k), csv::format_exact(s.charge_price[k]),
                           csv::format_exact(s.discharge_price[k])});
  csv::write(dir / "prices.csv", prices);
  for (std::size_t w = 0; w < s.transformers.size(); ++w) {
    const std::string id = cfg.transformers[w].id;
    write_series(dir / ("load_" + id + ".csv"), "load_kw", s.transformers[w].load);
    write_series(dir / ("pv_" + id + ".csv"), "pv_kw", s.transformers[w].pv);
  }
  write_series(dir / "setpoint.csv", "setpoint_kw", s.setpoint);
  std::cout << "wrote defaults to " << dir.string() << "\n";
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"EV charging simulator and benchmarking harness"};
  app.require_subcommand(1);

  Common sim_opts;
  sim_opts.algorithms = {"afap"};
  auto *simulate = app.add_subcommand("simulate", "run one episode per algorithm");
  Common cmp_opts;
  auto *compare = app.add_subcommand("compare", "paired multi-seed comparison");
  for (auto [cmd, o] : {std::pair{simulate, &sim_opts}, std::pair{compare, &cmp_opts}}) {
    cmd->add_option("--config", o->config, "YAML configuration (default: built-in)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--algorithms", o->algorithms,
                    "afap, alap, rr, mpc, mpc:<h>, optimal")
        ->delimiter(',');
    cmd->add_option("--seed", o->seed, "seed (base seed for compare)");
    cmd->add_option("--out", o->out, "output directory");
    cmd->add_flag("--emit-replays", o->emit_replays, "save one replay per seed");
    cmd->add_flag("--emit-plot-data", o->emit_plot_data, "save per-step series");
  }
  compare->add_option("--runs", cmp_opts.runs, "runs per algorithm")
      ->check(CLI::PositiveNumber);

  std::string replay_path, replay_alg = "afap", replay_out;
  auto *replay = app.add_subcommand("replay", "re-simulate a saved replay");
  replay->add_option("replay", replay_path, "replay JSON")->required();
  replay->add_option("--algorithm", replay_alg, "controller to evaluate");
  replay->add_option("--out", replay_out, "output directory");

  std::string export_config, export_out = "defaults";
  std::uint64_t export_seed = 0;
  auto *exp = app.add_subcommand("export-defaults",
                                 "write the bundled data files for editing");
  exp->add_option("--config", export_config, "YAML configuration")
      ->check(CLI::ExistingFile);
  exp->add_option("--out", export_out, "output directory");
  exp->add_option("--seed", export_seed, "seed for the synthetic series");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*simulate) {
      sim_opts.runs = 1;
      return run_compare(sim_opts);
    }
    if (*compare)
      return run_compare(cmp_opts);
    if (*replay)
      return run_replay(replay_path, replay_alg, replay_out);
    if (*exp)
      return run_export(export_config, export_out, export_seed);
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const CLI::Error &e) {
    return app.exit(e);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
