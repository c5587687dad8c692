// Compares the serial reference path against the OpenMP draw-parallel path on
// the same workload and checks that both produce identical records.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "dasopt/harness.hpp"

namespace {

double time_run(const dasopt::ExperimentConfig& cfg, std::vector<dasopt::ExperimentRecord>& out) {
  const auto start = std::chrono::steady_clock::now();
  out = dasopt::run_rate_sweep(cfg);
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
  return dt.count();
}

bool identical(const std::vector<dasopt::ExperimentRecord>& a,
               const std::vector<dasopt::ExperimentRecord>& b) {
  // Wall time is the only field allowed to differ between modes.
  return dasopt::records_to_csv(a) == dasopt::records_to_csv(b);
}

}  // namespace

int main(int argc, char** argv) {
  dasopt::ExperimentConfig cfg;
  cfg.num_draws = 24;
  cfg.rate_min_bps = {0.0, 3e8};
  cfg.strategies = {"distance", "exhaustive"};
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string key = argv[i];
    if (key == "--draws") cfg.num_draws = std::atoi(argv[i + 1]);
    else if (key == "--raus") cfg.rau_count = std::atoi(argv[i + 1]);
    else {
      std::fprintf(stderr, "usage: dasopt-bench [--draws n] [--raus n]\n");
      return 2;
    }
  }

  std::printf("workload: %d draws x %zu floors x %zu strategies, %d RAUs\n", cfg.num_draws,
              cfg.rate_min_bps.size(), cfg.strategies.size(), cfg.rau_count);

  std::vector<dasopt::ExperimentRecord> serial_records, parallel_records;
  cfg.exec_mode = dasopt::ExecMode::Serial;
  const double t_serial = time_run(cfg, serial_records);
  cfg.exec_mode = dasopt::ExecMode::OpenMp;
  const double t_parallel = time_run(cfg, parallel_records);

  if (!identical(serial_records, parallel_records)) {
    std::fprintf(stderr, "FAIL: serial and OpenMP runs disagree\n");
    return 1;
  }

  std::printf("%-10s %10s\n", "mode", "seconds");
  std::printf("%-10s %10.3f\n", "serial", t_serial);
  std::printf("%-10s %10.3f\n", "openmp", t_parallel);
  std::printf("speedup: %.2fx, records identical\n", t_serial / std::max(t_parallel, 1e-9));
  return 0;
}
