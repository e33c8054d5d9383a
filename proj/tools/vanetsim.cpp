// vanetsim: scenario runner and analysis CLI.
//
// Subcommands:
//   run               simulate one scenario, emit a one-row metrics CSV
//   sweep             simulate a list of vehicle counts, one CSV row each
//   analyze-prob      closed-form vs Monte Carlo two-sided-neighbor table
//   analyze-election  verifier-count distribution for one (k, p, strategy)
//
// Exit codes: 0 success, 1 usage/configuration error, 2 runtime failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vanet/analysis.hpp"
#include "vanet/config.hpp"
#include "vanet/errors.hpp"
#include "vanet/rng.hpp"
#include "vanet/sim.hpp"

namespace {

// Writes atomically: temp file in the target directory, then rename.
void write_output(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw vanet::Error("cannot open output file: " + tmp);
    out << content;
    if (!out.flush()) throw vanet::Error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string format_row(int load, const vanet::sim::MetricsReport& m) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d,%.6f,%.6f,%.6f,%.6f\n", load,
                m.mean_delay_ms(), m.loss_ratio(), m.approval_ratio(),
                m.verified_per_300ms());
  return buf;
}

constexpr const char* metrics_header =
    "load,mean_delay_ms,loss_ratio,approval_ratio,verified_per_300ms\n";

struct ScenarioArgs {
  std::string config_path;
  std::vector<std::string> sets;
  std::string output = "-";
  std::uint64_t seed = 0;
  bool seed_given = false;
};

void add_scenario_options(CLI::App* cmd, ScenarioArgs& args) {
  cmd->add_option("--config", args.config_path,
                  "scenario configuration file (key=value lines)");
  cmd->add_option("--set", args.sets, "override one key=value assignment")
      ->type_name("KEY=VALUE");
  cmd->add_option("-o,--output", args.output,
                  "output CSV path ('-' for stdout)");
  cmd->add_option("--seed", args.seed, "override the scenario seed")
      ->each([&args](const std::string&) { args.seed_given = true; });
}

vanet::sim::ScenarioConfig build_config(const ScenarioArgs& args) {
  vanet::sim::ScenarioConfig cfg;
  if (!args.config_path.empty())
    cfg = vanet::config::load_config_file(args.config_path);
  for (const std::string& s : args.sets) {
    std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw vanet::ConfigError("--set expects KEY=VALUE, got '" + s + "'");
    vanet::config::apply_assignment(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  if (args.seed_given) cfg.seed = args.seed;
  vanet::sim::validate(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cooperative vehicular authentication simulator"};
  app.require_subcommand(1);

  ScenarioArgs run_args;
  std::string trace_path;
  CLI::App* run_cmd = app.add_subcommand("run", "simulate one scenario");
  add_scenario_options(run_cmd, run_args);
  run_cmd->add_option("--trace", trace_path,
                      "write a per-event trace to this file");

  ScenarioArgs sweep_args;
  std::vector<int> loads{50, 100, 150, 200};
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "simulate a list of vehicle counts");
  add_scenario_options(sweep_cmd, sweep_args);
  sweep_cmd->add_option("--loads", loads, "vehicle counts to simulate");

  int n_max = 30;
  std::uint64_t prob_trials = 100000;
  std::uint64_t prob_seed = 1;
  std::string prob_output = "-";
  CLI::App* prob_cmd = app.add_subcommand(
      "analyze-prob", "two-sided neighbor probability: closed form vs MC");
  prob_cmd->add_option("--n-max", n_max, "largest neighbor count");
  prob_cmd->add_option("--trials", prob_trials, "Monte Carlo trials per n");
  prob_cmd->add_option("--seed", prob_seed, "Monte Carlo seed");
  prob_cmd->add_option("-o,--output", prob_output, "output CSV path");

  int elect_k = 10;
  int elect_p = 5;
  std::string elect_strategy = "p_nearest";
  std::uint64_t elect_trials = 10000;
  std::uint64_t elect_seed = 1;
  std::string elect_output = "-";
  CLI::App* elect_cmd = app.add_subcommand(
      "analyze-election", "verifier-count distribution for one (k, p)");
  elect_cmd->add_option("--k", elect_k, "mutual candidate count");
  elect_cmd->add_option("--p", elect_p, "verifier parameter p");
  elect_cmd->add_option("--strategy", elect_strategy,
                        "p_nearest or paper_rule");
  elect_cmd->add_option("--trials", elect_trials, "random neighborhoods");
  elect_cmd->add_option("--seed", elect_seed, "sampling seed");
  elect_cmd->add_option("-o,--output", elect_output, "output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      vanet::sim::ScenarioConfig cfg = build_config(run_args);
      vanet::sim::MetricsReport m;
      if (!trace_path.empty()) {
        std::ofstream trace(trace_path, std::ios::trunc);
        if (!trace)
          throw vanet::Error("cannot open trace file: " + trace_path);
        m = vanet::sim::run(cfg, &trace);
      } else {
        m = vanet::sim::run(cfg);
      }
      write_output(run_args.output,
                   metrics_header + format_row(cfg.vehicle_count, m));
    } else if (*sweep_cmd) {
      vanet::sim::ScenarioConfig cfg = build_config(sweep_args);
      std::string csv = metrics_header;
      for (const auto& [load, m] : vanet::sim::sweep(loads, cfg))
        csv += format_row(load, m);
      write_output(sweep_args.output, csv);
    } else if (*prob_cmd) {
      std::string csv = "n,closed_form,monte_carlo,stderr\n";
      for (int n = 1; n <= n_max; ++n) {
        vanet::analysis::ProbResult r = vanet::analysis::prob_both_sides(
            n, prob_trials, vanet::derive_seed(prob_seed, "prob", n));
        char buf[160];
        std::snprintf(buf, sizeof buf, "%d,%.9f,%.9f,%.9f\n", r.n,
                      r.closed_form, r.monte_carlo, r.mc_stderr);
        csv += buf;
      }
      write_output(prob_output, csv);
    } else if (*elect_cmd) {
      vanet::obu::ElectionStrategy strategy;
      if (elect_strategy == "p_nearest")
        strategy = vanet::obu::ElectionStrategy::p_nearest;
      else if (elect_strategy == "paper_rule")
        strategy = vanet::obu::ElectionStrategy::paper_rule;
      else
        throw vanet::ConfigError("bad --strategy (want p_nearest|paper_rule): '" +
                                 elect_strategy + "'");
      int exact =
          vanet::analysis::exact_verifier_count(elect_k, elect_p, strategy);
      auto hist = vanet::analysis::sample_verifier_counts(
          elect_k, elect_p, strategy, elect_trials, elect_seed);
      std::string csv = "k,p,strategy,count,frequency,exact_count\n";
      for (const auto& [count, times] : hist) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%d,%d,%s,%d,%.9f,%d\n", elect_k,
                      elect_p, elect_strategy.c_str(), count,
                      static_cast<double>(times) /
                          static_cast<double>(elect_trials),
                      exact);
        csv += buf;
      }
      write_output(elect_output, csv);
    }
  } catch (const vanet::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
