#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dasopt/channel.hpp"
#include "dasopt/parallel.hpp"
#include "dasopt/selection.hpp"
#include "dasopt/solver.hpp"

namespace dasopt {

/// Full description of a Monte-Carlo experiment. Loadable from a flat
/// key=value config file; see load_config for the key set.
struct ExperimentConfig {
  // Topology template (positions come from place_raus).
  int rau_count = 4;
  int antennas_per_rau = 4;
  int receive_antennas = 4;
  double cell_radius_m = 1000.0;
  double power_limit_w = 10.0;
  double rf_chain_power_w = 1.0;
  double static_power_w = 1.0;
  double bandwidth_hz = 20e6;
  double noise_psd_dbm_hz = -174.0;
  double shadowing_sigma_db = 8.0;

  // Sweeps. Rate floors are in bit/s and divided by the bandwidth internally.
  std::vector<double> rate_min_bps = {0.0};
  std::vector<int> rau_counts = {2, 3, 4, 5, 6, 7};
  std::vector<int> trace_rau_counts = {2, 6, 10};

  int num_draws = 500;
  std::uint64_t seed = 1;
  SolverConfig solver;
  std::vector<std::string> strategies = {"distance", "norm",      "exhaustive",
                                         "all-on-ee", "all-on-se", "cas"};
  bool cas_circuit_literal = true;

  ExecMode exec_mode = ExecMode::OpenMp;
  int threads = 0;  // 0 = runtime default

  DasTopology make_topology(int raus) const;
  void validate() const;
};

/// One (draw, strategy, floor) outcome. wall_time_s is a diagnostic and is
/// not serialized: CSV output must be byte-identical across runs.
struct ExperimentRecord {
  int draw = 0;
  std::string strategy;
  double rate_min_bps = 0.0;
  int rau_count = 0;
  double rate_bps = 0.0;
  double transmit_power_w = 0.0;
  double circuit_power_w = 0.0;
  double ee_bits_per_joule = 0.0;
  int active_raus = 0;
  bool feasible = true;
  int subgradient_iters = 0;
  int dinkelbach_iters = 0;
  int bisection_iters = 0;
  double wall_time_s = 0.0;
};

enum class TraceProblem { RateMax, EeMax, PowerMin };

struct TracePoint {
  std::string problem;
  int rau_count = 0;
  int iteration = 0;   // 1-based
  double objective = 0.0;  // bit/s for rate traces, bit/J for the EE trace
};

/// Known strategy names: distance, norm, exhaustive, all-on-ee, all-on-se, cas.
const std::vector<std::string>& known_strategies();

/// Parses a flat key=value config ('#' comments, blank lines ignored).
/// Unknown keys are an error. Missing file -> std::runtime_error.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text);

/// Paired Monte-Carlo over the rate-floor sweep: every enabled strategy sees
/// the same channel realization within a draw, and records come out in a
/// deterministic order regardless of the execution mode.
std::vector<ExperimentRecord> run_rate_sweep(const ExperimentConfig& cfg);

/// Same pairing, sweeping the RAU count (topology regenerated per count).
std::vector<ExperimentRecord> run_rau_sweep(const ExperimentConfig& cfg);

/// Per-iteration objective traces with all RAUs on, one trace per entry of
/// trace_rau_counts. The power-minimization floor is the midpoint of the
/// maximum and EE-optimal rates.
std::vector<TracePoint> run_convergence_trace(const ExperimentConfig& cfg, TraceProblem problem);

/// CSV I/O. Floating-point fields are written with 12 significant digits and
/// the writer rechecks ee == rate / (tx + circuit) on every record.
void write_records_csv(const std::string& path, const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> read_records_csv(const std::string& path);
std::string records_to_csv(const std::vector<ExperimentRecord>& records);

void write_trace_csv(const std::string& path, const std::vector<TracePoint>& points);

}  // namespace dasopt
