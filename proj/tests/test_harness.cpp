#include <cstdio>
#include <filesystem>
#include <fstream>

#include "dasopt/harness.hpp"
#include "doctest.h"

using namespace dasopt;

namespace {

ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.rau_count = 3;
  cfg.antennas_per_rau = 2;
  cfg.receive_antennas = 2;
  cfg.num_draws = 6;
  cfg.rate_min_bps = {0.0, 2e8};
  cfg.strategies = {"distance", "cas", "all-on-se"};
  cfg.exec_mode = ExecMode::Serial;
  return cfg;
}

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = parse_config(
      "# comment\n"
      "rau_count = 5\n"
      "rate_min_bps = 0, 1e8, 2.5e8  # trailing comment\n"
      "strategies = distance,norm\n"
      "seed = 99\n"
      "cas_circuit_literal = false\n"
      "tolerance = 1e-6\n"
      "parallel = false\n");
  CHECK(cfg.rau_count == 5);
  CHECK(cfg.rate_min_bps == std::vector<double>{0.0, 1e8, 2.5e8});
  CHECK(cfg.strategies == std::vector<std::string>{"distance", "norm"});
  CHECK(cfg.seed == 99);
  CHECK_FALSE(cfg.cas_circuit_literal);
  CHECK(cfg.solver.tolerance == 1e-6);
  CHECK(cfg.exec_mode == ExecMode::Serial);

  CHECK_THROWS_AS(parse_config("no_such_key = 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("rau_count = banana\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("just a line\n"), std::invalid_argument);
}

TEST_CASE("config validation") {
  ExperimentConfig cfg = tiny_config();
  cfg.strategies = {"teleport"};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = tiny_config();
  cfg.num_draws = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = tiny_config();
  cfg.rau_count = 13;
  cfg.strategies = {"exhaustive"};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("rate sweep produces records in a deterministic layout") {
  const ExperimentConfig cfg = tiny_config();
  const auto records = run_rate_sweep(cfg);
  REQUIRE(records.size() == cfg.rate_min_bps.size() * cfg.num_draws * cfg.strategies.size());
  // Layout: floor-major, then draw, then strategy.
  CHECK(records[0].rate_min_bps == 0.0);
  CHECK(records[0].draw == 0);
  CHECK(records[0].strategy == "distance");
  CHECK(records[1].strategy == "cas");
  const auto& second_floor = records[cfg.num_draws * cfg.strategies.size()];
  CHECK(second_floor.rate_min_bps == 2e8);
  for (const auto& rec : records) {
    CHECK(rec.rau_count == 3);
    CHECK(rec.active_raus >= 1);
  }
}

TEST_CASE("strategies are paired on identical channel draws") {
  // Removing strategies must not change the channels other strategies see.
  ExperimentConfig all = tiny_config();
  ExperimentConfig only_distance = tiny_config();
  only_distance.strategies = {"distance"};
  const auto records_all = run_rate_sweep(all);
  const auto records_distance = run_rate_sweep(only_distance);
  std::vector<const ExperimentRecord*> distance_in_all;
  for (const auto& rec : records_all) {
    if (rec.strategy == "distance") distance_in_all.push_back(&rec);
  }
  REQUIRE(distance_in_all.size() == records_distance.size());
  for (std::size_t i = 0; i < records_distance.size(); ++i) {
    CHECK(distance_in_all[i]->rate_bps == records_distance[i].rate_bps);
    CHECK(distance_in_all[i]->ee_bits_per_joule == records_distance[i].ee_bits_per_joule);
  }
}

TEST_CASE("serial and OpenMP execution produce identical records") {
  ExperimentConfig serial = tiny_config();
  ExperimentConfig parallel = tiny_config();
  parallel.exec_mode = ExecMode::OpenMp;
  const auto a = run_rate_sweep(serial);
  const auto b = run_rate_sweep(parallel);
  CHECK(records_to_csv(a) == records_to_csv(b));
}

TEST_CASE("two runs with the same config are byte-identical") {
  const ExperimentConfig cfg = tiny_config();
  CHECK(records_to_csv(run_rate_sweep(cfg)) == records_to_csv(run_rate_sweep(cfg)));
}

TEST_CASE("CSV round-trip is stable") {
  const ExperimentConfig cfg = tiny_config();
  const auto records = run_rate_sweep(cfg);
  const std::string path = temp_path("dasopt_records_test.csv");
  write_records_csv(path, records);
  const auto read_back = read_records_csv(path);
  REQUIRE(read_back.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(read_back[i].strategy == records[i].strategy);
    CHECK(read_back[i].draw == records[i].draw);
    CHECK(read_back[i].feasible == records[i].feasible);
    CHECK(read_back[i].rate_bps ==
          doctest::Approx(records[i].rate_bps).epsilon(5e-12));
    CHECK(read_back[i].ee_bits_per_joule ==
          doctest::Approx(records[i].ee_bits_per_joule).epsilon(5e-12));
  }
  // Serializing the parsed records again reproduces the file byte for byte.
  const std::string again = temp_path("dasopt_records_test2.csv");
  write_records_csv(again, read_back);
  std::ifstream f1(path), f2(again);
  std::stringstream s1, s2;
  s1 << f1.rdbuf();
  s2 << f2.rdbuf();
  CHECK(s1.str() == s2.str());
  std::filesystem::remove(path);
  std::filesystem::remove(again);
}

TEST_CASE("CSV writer rejects inconsistent records") {
  ExperimentRecord rec;
  rec.strategy = "distance";
  rec.rate_bps = 1e8;
  rec.transmit_power_w = 5.0;
  rec.circuit_power_w = 5.0;
  rec.ee_bits_per_joule = 1.0;  // should be 1e7
  CHECK_THROWS_AS(records_to_csv({rec}), std::logic_error);
}

TEST_CASE("write failures surface as errors") {
  const ExperimentConfig cfg = tiny_config();
  CHECK_THROWS_AS(write_records_csv("/nonexistent-dir/out.csv", {}), std::runtime_error);
}

TEST_CASE("mean active-RAU count grows with the rate floor") {
  ExperimentConfig cfg = tiny_config();
  cfg.num_draws = 20;
  cfg.strategies = {"distance"};
  cfg.rate_min_bps = {0.0, 4.5e8};
  const auto records = run_rate_sweep(cfg);
  double mean_low = 0, mean_high = 0;
  for (const auto& rec : records) {
    (rec.rate_min_bps == 0.0 ? mean_low : mean_high) += rec.active_raus;
  }
  CHECK(mean_high >= mean_low);
}

TEST_CASE("RAU sweep regenerates the topology per count") {
  ExperimentConfig cfg = tiny_config();
  cfg.rau_counts = {2, 4};
  cfg.rate_min_bps = {0.0};
  cfg.strategies = {"distance"};
  cfg.num_draws = 4;
  const auto records = run_rau_sweep(cfg);
  REQUIRE(records.size() == 8);
  CHECK(records.front().rau_count == 2);
  CHECK(records.back().rau_count == 4);
}

TEST_CASE("convergence traces have the advertised shapes") {
  ExperimentConfig cfg = tiny_config();
  cfg.trace_rau_counts = {2};

  const auto rate_points = run_convergence_trace(cfg, TraceProblem::RateMax);
  REQUIRE_FALSE(rate_points.empty());
  for (std::size_t i = 1; i < rate_points.size(); ++i) {
    CHECK(rate_points[i].objective >= rate_points[i - 1].objective);  // best so far
  }

  const auto ee_points = run_convergence_trace(cfg, TraceProblem::EeMax);
  REQUIRE_FALSE(ee_points.empty());
  CHECK(ee_points.front().objective == 0.0);  // ratio sequence starts at zero
  for (std::size_t i = 1; i < ee_points.size(); ++i) {
    CHECK(ee_points[i].objective >= ee_points[i - 1].objective);
  }
  CHECK(ee_points.size() <= 15);

  const auto power_points = run_convergence_trace(cfg, TraceProblem::PowerMin);
  CHECK(power_points.size() <= 20);

  const std::string path = temp_path("dasopt_trace_test.csv");
  write_trace_csv(path, rate_points);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "problem,rau_count,iteration,objective");
  std::filesystem::remove(path);
}
