#pragma once

#include <vector>

#include "dasopt/numerics.hpp"
#include "dasopt/rng.hpp"

namespace dasopt {

struct Point2d {
  double x = 0.0;
  double y = 0.0;
};

/// Geometry and power model of a distributed antenna deployment: one cell,
/// several remote access units (RAUs), each with its own antenna count and
/// transmit power limit.
struct DasTopology {
  double cell_radius_m = 1000.0;
  std::vector<Point2d> rau_positions;
  std::vector<int> antennas_per_rau;
  std::vector<double> power_limit_w;
  double rf_chain_power_w = 1.0;  // per active antenna
  double static_power_w = 1.0;    // per active RAU
  double bandwidth_hz = 20e6;
  double noise_psd_dbm_hz = -174.0;
  double shadowing_sigma_db = 8.0;  // log-normal shadowing std; 0 disables

  int rau_count() const { return static_cast<int>(rau_positions.size()); }
  int total_antennas() const;
  double total_power_limit_w() const;

  /// Throws std::invalid_argument on inconsistent fields (mismatched list
  /// lengths, nonpositive powers, RAUs outside the cell, ...).
  void validate() const;
};

/// One fading draw: per-RAU noise-normalized channel blocks (N x M_i each)
/// plus the geometry it was drawn at.
struct ChannelRealization {
  std::vector<ComplexMatrix> blocks;
  std::vector<double> distances_m;
  Point2d user_position;
};

/// Deterministic RAU placement: fewer than 6 RAUs go on a ring of radius
/// 2 R sin(pi/I) / (3 pi / I) at angles 2 pi (j-1)/I; for 6 or more, the
/// first RAU sits at the cell center and the rest on the ring computed with
/// I-1 in place of I.
std::vector<Point2d> place_raus(int rau_count, double cell_radius_m);

/// 38.46 + 35 log10(d) dB. Throws on nonpositive distance.
double path_loss_db(double distance_m);

/// Receiver noise power in watts for a noise PSD in dBm/Hz and a bandwidth.
double noise_power_w(double noise_psd_dbm_hz, double bandwidth_hz);

/// Uniform point on the disk of the given radius (radius sampled as R sqrt(u)).
Point2d draw_user_position(double cell_radius_m, Rng& rng);

/// Draws one channel realization: block i is sqrt(g_i) times an i.i.d. CN(0,1)
/// matrix, where g_i combines path loss at the RAU-user distance (clamped to
/// 1 m), log-normal shadowing, and division by the noise power so that the
/// resulting blocks see unit-variance receiver noise.
ChannelRealization draw_channel(const DasTopology& topology, Point2d user_position,
                                int receive_antennas, Rng& rng);

/// Horizontal concatenation of the selected blocks. Indices are 0-based and
/// must be strictly increasing; throws otherwise or on an empty set.
ComplexMatrix assemble(const ChannelRealization& channel, const std::vector<int>& active_set);

/// Colocated-antenna equivalent of a DAS topology: a single site at the cell
/// center carrying all antennas with the summed power budget.
DasTopology cas_topology(const DasTopology& das);

}  // namespace dasopt
