#include <cstdio>
#include <exception>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dasopt/harness.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int draws = 0;
  std::string strategies;
  bool serial = false;
  int threads = 0;
};

void add_common(CLI::App* sub, CommonOptions& opt, const std::string& default_out) {
  opt.out_path = default_out;
  sub->add_option("--config", opt.config_path, "Config file (key=value); defaults used if omitted");
  sub->add_option("--out", opt.out_path, "Output CSV path");
  sub->add_option("--seed", opt.seed, "Override the RNG seed")->each([&](const std::string&) {
    opt.seed_set = true;
  });
  sub->add_option("--draws", opt.draws, "Override the number of Monte-Carlo draws");
  sub->add_option("--strategies", opt.strategies,
                  "Comma list from: distance,norm,exhaustive,all-on-ee,all-on-se,cas");
  sub->add_flag("--serial", opt.serial, "Run draws on a single thread");
  sub->add_option("--threads", opt.threads, "Worker threads (0 = runtime default)");
}

dasopt::ExperimentConfig build_config(const CommonOptions& opt) {
  dasopt::ExperimentConfig cfg;
  if (!opt.config_path.empty()) cfg = dasopt::load_config(opt.config_path);
  if (opt.seed_set) cfg.seed = opt.seed;
  if (opt.draws > 0) cfg.num_draws = opt.draws;
  if (!opt.strategies.empty()) {
    cfg.strategies.clear();
    std::string item;
    std::stringstream ss(opt.strategies);
    while (std::getline(ss, item, ',')) cfg.strategies.push_back(item);
  }
  if (opt.serial) cfg.exec_mode = dasopt::ExecMode::Serial;
  if (opt.threads > 0) cfg.threads = opt.threads;
  return cfg;
}

// Per (strategy, sweep value) means, printed after a sweep.
void print_summary(const std::vector<dasopt::ExperimentRecord>& records, bool by_rau_count) {
  struct Acc {
    double rate = 0, ee = 0, active = 0;
    int n = 0, infeasible = 0;
  };
  std::map<std::pair<double, std::string>, Acc> groups;
  for (const auto& rec : records) {
    const double key = by_rau_count ? rec.rau_count : rec.rate_min_bps;
    Acc& acc = groups[{key, rec.strategy}];
    acc.rate += rec.rate_bps;
    acc.ee += rec.ee_bits_per_joule;
    acc.active += rec.active_raus;
    acc.n += 1;
    acc.infeasible += rec.feasible ? 0 : 1;
  }
  std::printf("%-14s %-12s %14s %14s %10s %12s\n", by_rau_count ? "rau_count" : "rate_min",
              "strategy", "mean rate", "mean EE", "mean |S|", "infeasible");
  for (const auto& [key, acc] : groups) {
    std::printf("%-14.6g %-12s %11.3f Mb/s %11.4g b/J %10.2f %9d/%d\n", key.first,
                key.second.c_str(), acc.rate / acc.n / 1e6, acc.ee / acc.n, acc.active / acc.n,
                acc.infeasible, acc.n);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-efficiency optimizer and Monte-Carlo harness for MIMO distributed antenna systems"};
  app.require_subcommand(1);

  CommonOptions rate_opt, rau_opt, trace_opt;
  std::string trace_problem = "rate";

  CLI::App* rate_cmd = app.add_subcommand(
      "rate-sweep", "Sweep the rate floor over paired Monte-Carlo channel draws");
  add_common(rate_cmd, rate_opt, "rate_sweep.csv");

  CLI::App* rau_cmd =
      app.add_subcommand("rau-sweep", "Sweep the number of RAUs over paired Monte-Carlo draws");
  add_common(rau_cmd, rau_opt, "rau_sweep.csv");

  CLI::App* trace_cmd =
      app.add_subcommand("trace", "Emit per-iteration solver convergence traces");
  add_common(trace_cmd, trace_opt, "trace.csv");
  trace_cmd->add_option("--problem", trace_problem, "One of: rate, ee, power")
      ->check(CLI::IsMember({"rate", "ee", "power"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (rate_cmd->parsed()) {
      const auto cfg = build_config(rate_opt);
      const auto records = dasopt::run_rate_sweep(cfg);
      dasopt::write_records_csv(rate_opt.out_path, records);
      print_summary(records, false);
      std::printf("wrote %zu records to %s\n", records.size(), rate_opt.out_path.c_str());
    } else if (rau_cmd->parsed()) {
      const auto cfg = build_config(rau_opt);
      const auto records = dasopt::run_rau_sweep(cfg);
      dasopt::write_records_csv(rau_opt.out_path, records);
      print_summary(records, true);
      std::printf("wrote %zu records to %s\n", records.size(), rau_opt.out_path.c_str());
    } else {
      const auto cfg = build_config(trace_opt);
      dasopt::TraceProblem problem = dasopt::TraceProblem::RateMax;
      if (trace_problem == "ee") problem = dasopt::TraceProblem::EeMax;
      if (trace_problem == "power") problem = dasopt::TraceProblem::PowerMin;
      const auto points = dasopt::run_convergence_trace(cfg, problem);
      dasopt::write_trace_csv(trace_opt.out_path, points);
      std::printf("wrote %zu trace points to %s\n", points.size(), trace_opt.out_path.c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
