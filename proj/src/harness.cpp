#include "dasopt/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dasopt {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

double parse_double(const std::string& value, const std::string& key) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for '" + key + "': " + value);
  }
  if (used != value.size()) throw std::invalid_argument("config: bad number for '" + key + "': " + value);
  return v;
}

long long parse_int(const std::string& value, const std::string& key) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(value, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer for '" + key + "': " + value);
  }
  if (used != value.size()) throw std::invalid_argument("config: bad integer for '" + key + "': " + value);
  return v;
}

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument("config: bad boolean for '" + key + "': " + value);
}

std::vector<double> parse_double_list(const std::string& value, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split(value, ',')) out.push_back(parse_double(item, key));
  return out;
}

std::vector<int> parse_int_list(const std::string& value, const std::string& key) {
  std::vector<int> out;
  for (const auto& item : split(value, ',')) out.push_back(static_cast<int>(parse_int(item, key)));
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct DrawChannels {
  Point2d user;
  ChannelRealization das;
  ChannelRealization cas;
};

DrawChannels make_draw(const ExperimentConfig& cfg, const DasTopology& topo,
                       const DasTopology& cas_topo, std::size_t draw) {
  // One stream per (seed, topology size, draw); strategies never consume from
  // it, so every strategy sees the identical realization.
  const std::uint64_t base =
      substream_seed(cfg.seed, static_cast<std::uint64_t>(topo.rau_count()), draw);
  DrawChannels out;
  Rng user_rng(substream_seed(base, 1));
  out.user = draw_user_position(cfg.cell_radius_m, user_rng);
  Rng das_rng(substream_seed(base, 2));
  out.das = draw_channel(topo, out.user, cfg.receive_antennas, das_rng);
  Rng cas_rng(substream_seed(base, 3));
  out.cas = draw_channel(cas_topo, out.user, cfg.receive_antennas, cas_rng);
  return out;
}

ExperimentRecord run_strategy(const std::string& name, const DrawChannels& chans,
                              const DasTopology& topo, double rate_min_bps,
                              const ExperimentConfig& cfg) {
  const double floor_hz = rate_min_bps / topo.bandwidth_hz;
  const auto start = std::chrono::steady_clock::now();
  SelectionResult sel;
  if (name == "distance") {
    sel = select_by_distance(chans.das, topo, floor_hz, cfg.solver);
  } else if (name == "norm") {
    sel = select_by_norm(chans.das, topo, floor_hz, cfg.solver);
  } else if (name == "exhaustive") {
    sel = select_exhaustive(chans.das, topo, floor_hz, cfg.solver);
  } else if (name == "all-on-ee") {
    sel = all_on_ee_baseline(chans.das, topo, floor_hz, cfg.solver);
  } else if (name == "all-on-se") {
    sel = all_on_rate_baseline(chans.das, topo, floor_hz, cfg.solver);
  } else if (name == "cas") {
    sel = cas_baseline(chans.cas, topo, floor_hz, cfg.solver, cfg.cas_circuit_literal);
  } else {
    throw std::invalid_argument("unknown strategy: " + name);
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  const CovarianceSolution& sol = sel.solution;
  ExperimentRecord rec;
  rec.strategy = name;
  rec.rate_min_bps = rate_min_bps;
  rec.rau_count = topo.rau_count();
  rec.rate_bps = sol.rate_bps_hz * topo.bandwidth_hz;
  rec.transmit_power_w = sol.transmit_power_w;
  rec.circuit_power_w = sol.circuit_power_w;
  rec.ee_bits_per_joule = sol.energy_efficiency_bits_per_joule;
  rec.active_raus = static_cast<int>(sel.active_set.size());
  rec.feasible = sol.status == SolverStatus::Optimal;
  rec.subgradient_iters = sol.subgradient_iters;
  rec.dinkelbach_iters = sol.dinkelbach_iters;
  rec.bisection_iters = sol.bisection_iters;
  rec.wall_time_s = elapsed.count();
  return rec;
}

void check_record(const ExperimentRecord& rec) {
  const double denom = rec.transmit_power_w + rec.circuit_power_w;
  const double expect = denom > 0 ? rec.rate_bps / denom : 0.0;
  if (std::abs(expect - rec.ee_bits_per_joule) > 1e-9 * std::max(1.0, std::abs(expect))) {
    throw std::logic_error("record failed EE = rate / (tx + circuit) recheck");
  }
}

// Runs the paired Monte-Carlo for one topology, writing into records starting
// at base_index with layout ((floor, draw), strategy).
void run_block(const ExperimentConfig& cfg, const DasTopology& topo,
               std::vector<ExperimentRecord>& records, std::size_t base_index) {
  const DasTopology cas = cas_topology(topo);
  const std::size_t floors = cfg.rate_min_bps.size();
  const std::size_t strategies = cfg.strategies.size();
  const std::size_t draws = static_cast<std::size_t>(cfg.num_draws);
  parallel_for(draws, cfg.exec_mode, cfg.threads, [&](std::size_t d) {
    const DrawChannels chans = make_draw(cfg, topo, cas, d);
    for (std::size_t r = 0; r < floors; ++r) {
      for (std::size_t s = 0; s < strategies; ++s) {
        ExperimentRecord rec =
            run_strategy(cfg.strategies[s], chans, topo, cfg.rate_min_bps[r], cfg);
        rec.draw = static_cast<int>(d);
        records[base_index + (r * draws + d) * strategies + s] = std::move(rec);
      }
    }
  });
}

}  // namespace

const std::vector<std::string>& known_strategies() {
  static const std::vector<std::string> names = {"distance",  "norm",      "exhaustive",
                                                 "all-on-ee", "all-on-se", "cas"};
  return names;
}

DasTopology ExperimentConfig::make_topology(int raus) const {
  DasTopology topo;
  topo.cell_radius_m = cell_radius_m;
  topo.rau_positions = place_raus(raus, cell_radius_m);
  topo.antennas_per_rau.assign(raus, antennas_per_rau);
  topo.power_limit_w.assign(raus, power_limit_w);
  topo.rf_chain_power_w = rf_chain_power_w;
  topo.static_power_w = static_power_w;
  topo.bandwidth_hz = bandwidth_hz;
  topo.noise_psd_dbm_hz = noise_psd_dbm_hz;
  topo.shadowing_sigma_db = shadowing_sigma_db;
  topo.validate();
  return topo;
}

void ExperimentConfig::validate() const {
  if (num_draws < 1) throw std::invalid_argument("config: num_draws must be at least 1");
  if (rate_min_bps.empty()) throw std::invalid_argument("config: rate_min_bps sweep is empty");
  if (rau_counts.empty()) throw std::invalid_argument("config: rau_counts sweep is empty");
  if (trace_rau_counts.empty()) throw std::invalid_argument("config: trace_rau_counts is empty");
  if (strategies.empty()) throw std::invalid_argument("config: no strategies enabled");
  for (const auto& s : strategies) {
    const auto& known = known_strategies();
    if (std::find(known.begin(), known.end(), s) == known.end()) {
      throw std::invalid_argument("config: unknown strategy '" + s + "'");
    }
  }
  const bool exhaustive =
      std::find(strategies.begin(), strategies.end(), "exhaustive") != strategies.end();
  auto check_count = [&](int raus) {
    if (raus < 1) throw std::invalid_argument("config: RAU counts must be positive");
    if (exhaustive && raus > 12) {
      throw std::invalid_argument("config: exhaustive search is limited to 12 RAUs");
    }
  };
  check_count(rau_count);
  for (int c : rau_counts) check_count(c);
  for (double r : rate_min_bps) {
    if (r < 0) throw std::invalid_argument("config: rate floors must be nonnegative");
  }
  make_topology(rau_count);  // throws on inconsistent topology parameters
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "rau_count") cfg.rau_count = static_cast<int>(parse_int(value, key));
    else if (key == "antennas_per_rau") cfg.antennas_per_rau = static_cast<int>(parse_int(value, key));
    else if (key == "receive_antennas") cfg.receive_antennas = static_cast<int>(parse_int(value, key));
    else if (key == "cell_radius_m") cfg.cell_radius_m = parse_double(value, key);
    else if (key == "power_limit_w") cfg.power_limit_w = parse_double(value, key);
    else if (key == "rf_chain_power_w") cfg.rf_chain_power_w = parse_double(value, key);
    else if (key == "static_power_w") cfg.static_power_w = parse_double(value, key);
    else if (key == "bandwidth_hz") cfg.bandwidth_hz = parse_double(value, key);
    else if (key == "noise_psd_dbm_hz") cfg.noise_psd_dbm_hz = parse_double(value, key);
    else if (key == "shadowing_sigma_db") cfg.shadowing_sigma_db = parse_double(value, key);
    else if (key == "rate_min_bps") cfg.rate_min_bps = parse_double_list(value, key);
    else if (key == "rau_counts") cfg.rau_counts = parse_int_list(value, key);
    else if (key == "trace_rau_counts") cfg.trace_rau_counts = parse_int_list(value, key);
    else if (key == "num_draws") cfg.num_draws = static_cast<int>(parse_int(value, key));
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(value, key));
    else if (key == "tolerance") cfg.solver.tolerance = parse_double(value, key);
    else if (key == "subgradient_step_scale") cfg.solver.subgradient_step_scale = parse_double(value, key);
    else if (key == "max_subgradient_iters") cfg.solver.max_subgradient_iters = static_cast<int>(parse_int(value, key));
    else if (key == "max_dinkelbach_iters") cfg.solver.max_dinkelbach_iters = static_cast<int>(parse_int(value, key));
    else if (key == "max_bisection_iters") cfg.solver.max_bisection_iters = static_cast<int>(parse_int(value, key));
    else if (key == "rank_tol") cfg.solver.rank_tol = parse_double(value, key);
    else if (key == "strategies") cfg.strategies = split(value, ',');
    else if (key == "cas_circuit_literal") cfg.cas_circuit_literal = parse_bool(value, key);
    else if (key == "parallel") cfg.exec_mode = parse_bool(value, key) ? ExecMode::OpenMp : ExecMode::Serial;
    else if (key == "threads") cfg.threads = static_cast<int>(parse_int(value, key));
    else throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::vector<ExperimentRecord> run_rate_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const DasTopology topo = cfg.make_topology(cfg.rau_count);
  std::vector<ExperimentRecord> records(cfg.rate_min_bps.size() *
                                        static_cast<std::size_t>(cfg.num_draws) *
                                        cfg.strategies.size());
  run_block(cfg, topo, records, 0);
  return records;
}

std::vector<ExperimentRecord> run_rau_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t block = cfg.rate_min_bps.size() * static_cast<std::size_t>(cfg.num_draws) *
                            cfg.strategies.size();
  std::vector<ExperimentRecord> records(block * cfg.rau_counts.size());
  for (std::size_t t = 0; t < cfg.rau_counts.size(); ++t) {
    run_block(cfg, cfg.make_topology(cfg.rau_counts[t]), records, t * block);
  }
  return records;
}

std::vector<TracePoint> run_convergence_trace(const ExperimentConfig& cfg, TraceProblem problem) {
  cfg.validate();
  std::vector<TracePoint> out;
  for (int raus : cfg.trace_rau_counts) {
    const DasTopology topo = cfg.make_topology(raus);
    const DrawChannels chans = make_draw(cfg, topo, cas_topology(topo), 0);
    std::vector<int> set(static_cast<std::size_t>(raus));
    for (int i = 0; i < raus; ++i) set[static_cast<std::size_t>(i)] = i;
    const ComplexMatrix h = assemble(chans.das, set);
    const PowerModel pm = power_model_for_set(topo, set);

    IterationTrace trace;
    std::string name;
    switch (problem) {
      case TraceProblem::RateMax:
        name = "rate";
        maximize_rate(h, pm, cfg.solver, &trace);
        break;
      case TraceProblem::EeMax:
        name = "ee";
        maximize_ee(h, pm, cfg.solver, &trace);
        break;
      case TraceProblem::PowerMin: {
        name = "power";
        const CovarianceSolution rate_sol = maximize_rate(h, pm, cfg.solver);
        const CovarianceSolution ee_sol = maximize_ee(h, pm, cfg.solver);
        const double floor = 0.5 * (rate_sol.rate_bps_hz + ee_sol.rate_bps_hz);
        minimize_power(h, pm, floor, ee_sol.dual_ee_ratio, cfg.solver, &trace);
        break;
      }
    }
    for (std::size_t k = 0; k < trace.objective.size(); ++k) {
      out.push_back({name, raus, static_cast<int>(k + 1), trace.objective[k] * cfg.bandwidth_hz});
    }
  }
  return out;
}

std::string records_to_csv(const std::vector<ExperimentRecord>& records) {
  std::string out =
      "draw,strategy,rate_min_bps,rau_count,rate_bps,transmit_power_w,circuit_power_w,"
      "ee_bits_per_joule,active_raus,feasible,subgradient_iters,dinkelbach_iters,bisection_iters\n";
  for (const auto& rec : records) {
    check_record(rec);
    out += std::to_string(rec.draw);
    out += ',';
    out += rec.strategy;
    out += ',';
    out += fmt(rec.rate_min_bps);
    out += ',';
    out += std::to_string(rec.rau_count);
    out += ',';
    out += fmt(rec.rate_bps);
    out += ',';
    out += fmt(rec.transmit_power_w);
    out += ',';
    out += fmt(rec.circuit_power_w);
    out += ',';
    out += fmt(rec.ee_bits_per_joule);
    out += ',';
    out += std::to_string(rec.active_raus);
    out += ',';
    out += rec.feasible ? '1' : '0';
    out += ',';
    out += std::to_string(rec.subgradient_iters);
    out += ',';
    out += std::to_string(rec.dinkelbach_iters);
    out += ',';
    out += std::to_string(rec.bisection_iters);
    out += '\n';
  }
  return out;
}

void write_records_csv(const std::string& path, const std::vector<ExperimentRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << records_to_csv(records);
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

std::vector<ExperimentRecord> read_records_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open records file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("records file is empty: " + path);
  std::vector<ExperimentRecord> records;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 13) {
      throw std::runtime_error("records file: expected 13 fields, got " +
                               std::to_string(fields.size()));
    }
    ExperimentRecord rec;
    rec.draw = static_cast<int>(parse_int(fields[0], "draw"));
    rec.strategy = fields[1];
    rec.rate_min_bps = parse_double(fields[2], "rate_min_bps");
    rec.rau_count = static_cast<int>(parse_int(fields[3], "rau_count"));
    rec.rate_bps = parse_double(fields[4], "rate_bps");
    rec.transmit_power_w = parse_double(fields[5], "transmit_power_w");
    rec.circuit_power_w = parse_double(fields[6], "circuit_power_w");
    rec.ee_bits_per_joule = parse_double(fields[7], "ee_bits_per_joule");
    rec.active_raus = static_cast<int>(parse_int(fields[8], "active_raus"));
    rec.feasible = parse_bool(fields[9], "feasible");
    rec.subgradient_iters = static_cast<int>(parse_int(fields[10], "subgradient_iters"));
    rec.dinkelbach_iters = static_cast<int>(parse_int(fields[11], "dinkelbach_iters"));
    rec.bisection_iters = static_cast<int>(parse_int(fields[12], "bisection_iters"));
    records.push_back(std::move(rec));
  }
  return records;
}

void write_trace_csv(const std::string& path, const std::vector<TracePoint>& points) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << "problem,rau_count,iteration,objective\n";
  for (const auto& p : points) {
    out << p.problem << ',' << p.rau_count << ',' << p.iteration << ',' << fmt(p.objective)
        << '\n';
  }
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

}  // namespace dasopt
