#include "dasopt/channel.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dasopt {

namespace {

double ring_radius(int count, double cell_radius_m) {
  // 2 R sin(pi/I) / (3 pi / I)
  const double frac = std::numbers::pi / count;
  return 2.0 * cell_radius_m * std::sin(frac) / (3.0 * frac);
}

std::vector<Point2d> ring_points(int count, double radius, double phase_offset_index) {
  std::vector<Point2d> pts(count);
  for (int j = 0; j < count; ++j) {
    const double angle = 2.0 * std::numbers::pi * (j + phase_offset_index) / count;
    pts[j] = {radius * std::cos(angle), radius * std::sin(angle)};
  }
  return pts;
}

}  // namespace

int DasTopology::total_antennas() const {
  return std::accumulate(antennas_per_rau.begin(), antennas_per_rau.end(), 0);
}

double DasTopology::total_power_limit_w() const {
  return std::accumulate(power_limit_w.begin(), power_limit_w.end(), 0.0);
}

void DasTopology::validate() const {
  if (cell_radius_m <= 0) throw std::invalid_argument("topology: cell radius must be positive");
  const std::size_t count = rau_positions.size();
  if (count == 0) throw std::invalid_argument("topology: at least one RAU required");
  if (antennas_per_rau.size() != count || power_limit_w.size() != count) {
    throw std::invalid_argument("topology: positions, antenna counts and power limits must have equal length");
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (antennas_per_rau[i] < 1) throw std::invalid_argument("topology: antenna counts must be positive");
    if (power_limit_w[i] <= 0) throw std::invalid_argument("topology: power limits must be positive");
    const double norm = std::hypot(rau_positions[i].x, rau_positions[i].y);
    if (norm > cell_radius_m * (1.0 + 1e-9)) {
      throw std::invalid_argument("topology: RAU " + std::to_string(i) + " lies outside the cell");
    }
  }
  if (rf_chain_power_w <= 0) throw std::invalid_argument("topology: RF chain power must be positive");
  if (static_power_w <= 0) throw std::invalid_argument("topology: static power must be positive");
  if (bandwidth_hz <= 0) throw std::invalid_argument("topology: bandwidth must be positive");
  if (shadowing_sigma_db < 0) throw std::invalid_argument("topology: shadowing sigma must be nonnegative");
}

std::vector<Point2d> place_raus(int rau_count, double cell_radius_m) {
  if (rau_count < 1) throw std::invalid_argument("place_raus: RAU count must be at least 1");
  if (cell_radius_m <= 0) throw std::invalid_argument("place_raus: cell radius must be positive");
  if (rau_count == 1) return {{0.0, 0.0}};  // ring radius vanishes, sin(pi) = 0
  if (rau_count < 6) {
    return ring_points(rau_count, ring_radius(rau_count, cell_radius_m), 0.0);
  }
  std::vector<Point2d> pts;
  pts.reserve(rau_count);
  pts.push_back({0.0, 0.0});
  const int on_ring = rau_count - 1;
  const auto ring = ring_points(on_ring, ring_radius(on_ring, cell_radius_m), 0.0);
  pts.insert(pts.end(), ring.begin(), ring.end());
  return pts;
}

double path_loss_db(double distance_m) {
  if (distance_m <= 0) throw std::invalid_argument("path_loss_db: distance must be positive");
  return 38.46 + 35.0 * std::log10(distance_m);
}

double noise_power_w(double noise_psd_dbm_hz, double bandwidth_hz) {
  return std::pow(10.0, (noise_psd_dbm_hz - 30.0) / 10.0) * bandwidth_hz;
}

Point2d draw_user_position(double cell_radius_m, Rng& rng) {
  if (cell_radius_m <= 0) throw std::invalid_argument("draw_user_position: radius must be positive");
  const double radius = cell_radius_m * std::sqrt(rng.uniform());
  const double angle = 2.0 * std::numbers::pi * rng.uniform();
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

ChannelRealization draw_channel(const DasTopology& topology, Point2d user_position,
                                int receive_antennas, Rng& rng) {
  topology.validate();
  if (receive_antennas < 1) {
    throw std::invalid_argument("draw_channel: receive antenna count must be positive");
  }
  const double noise_w = noise_power_w(topology.noise_psd_dbm_hz, topology.bandwidth_hz);

  ChannelRealization out;
  out.user_position = user_position;
  const int count = topology.rau_count();
  out.blocks.reserve(count);
  out.distances_m.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double raw = std::hypot(user_position.x - topology.rau_positions[i].x,
                                  user_position.y - topology.rau_positions[i].y);
    const double distance = std::max(raw, 1.0);  // path-loss model diverges below 1 m
    const double shadow_db =
        topology.shadowing_sigma_db > 0 ? topology.shadowing_sigma_db * rng.normal() : 0.0;
    const double gain = std::pow(10.0, (-path_loss_db(distance) + shadow_db) / 10.0) / noise_w;
    const double amplitude = std::sqrt(gain);

    ComplexMatrix block(receive_antennas, topology.antennas_per_rau[i]);
    for (Eigen::Index r = 0; r < block.rows(); ++r) {
      for (Eigen::Index c = 0; c < block.cols(); ++c) {
        block(r, c) = amplitude * rng.cnormal();
      }
    }
    out.blocks.push_back(std::move(block));
    out.distances_m.push_back(distance);
  }
  return out;
}

ComplexMatrix assemble(const ChannelRealization& channel, const std::vector<int>& active_set) {
  if (active_set.empty()) throw std::invalid_argument("assemble: active set must be nonempty");
  const int count = static_cast<int>(channel.blocks.size());
  Eigen::Index cols = 0;
  int prev = -1;
  for (int idx : active_set) {
    if (idx < 0 || idx >= count) throw std::invalid_argument("assemble: RAU index out of range");
    if (idx <= prev) throw std::invalid_argument("assemble: indices must be strictly increasing");
    prev = idx;
    cols += channel.blocks[idx].cols();
  }
  const Eigen::Index rows = channel.blocks[active_set.front()].rows();
  ComplexMatrix h(rows, cols);
  Eigen::Index offset = 0;
  for (int idx : active_set) {
    const auto& block = channel.blocks[idx];
    h.middleCols(offset, block.cols()) = block;
    offset += block.cols();
  }
  return h;
}

DasTopology cas_topology(const DasTopology& das) {
  DasTopology t = das;
  t.rau_positions = {{0.0, 0.0}};
  t.antennas_per_rau = {das.total_antennas()};
  t.power_limit_w = {das.total_power_limit_w()};
  return t;
}

}  // namespace dasopt
