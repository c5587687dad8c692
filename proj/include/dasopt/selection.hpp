#pragma once

#include <utility>
#include <vector>

#include "dasopt/channel.hpp"
#include "dasopt/solver.hpp"

namespace dasopt {

enum class SelectionStrategy { Distance, Norm, Exhaustive, AllOn, Cas };

struct SelectionResult {
  std::vector<int> active_set;  // ascending 0-based RAU indices, nonempty
  CovarianceSolution solution;
  int sets_evaluated = 0;
  SelectionStrategy strategy = SelectionStrategy::Distance;
};

/// Circuit power of an active set: (active antennas) * p_c + (active RAUs) * p_0.
double circuit_power_w(const DasTopology& topology, const std::vector<int>& active_set);

/// Circuit power charged to the colocated baseline. The literal variant is
/// I * p_c + (I*M) * p_0; the alternative follows the per-set convention
/// above, (I*M) * p_c + p_0.
double cas_circuit_power_w(const DasTopology& topology, bool literal);

/// Power model (blocks, limits, circuit power, bandwidth) for an active set.
PowerModel power_model_for_set(const DasTopology& topology, const std::vector<int>& active_set);

/// Greedy search over nearest-first prefixes: RAUs are sorted by ascending
/// user distance (ties by index) and prefixes of growing size are evaluated
/// until the energy efficiency drops below the best seen; an infeasible
/// prefix scores 0. If no prefix meets the rate floor the full set is
/// returned with its rate-maximizing solution, flagged Infeasible.
SelectionResult select_by_distance(const ChannelRealization& channel, const DasTopology& topology,
                                   double rate_min_bps_hz, const SolverConfig& cfg);

/// Same search with RAUs sorted by descending Frobenius norm of their channel
/// block (ties by index).
SelectionResult select_by_norm(const ChannelRealization& channel, const DasTopology& topology,
                               double rate_min_bps_hz, const SolverConfig& cfg);

/// Evaluates all 2^I - 1 nonempty subsets and returns the best. Guarded to
/// at most 12 RAUs. Falls back like the greedy search when nothing is feasible.
SelectionResult select_exhaustive(const ChannelRealization& channel, const DasTopology& topology,
                                  double rate_min_bps_hz, const SolverConfig& cfg);

/// Colocated-antenna baseline: a single site at the cell center with all
/// antennas, the summed power budget, and the CAS circuit-power formula.
/// cas_channel must be a realization drawn on cas_topology(topology).
SelectionResult cas_baseline(const ChannelRealization& cas_channel, const DasTopology& topology,
                             double rate_min_bps_hz, const SolverConfig& cfg,
                             bool literal_circuit = true);

/// EE maximization over the full RAU set (no selection).
SelectionResult all_on_ee_baseline(const ChannelRealization& channel, const DasTopology& topology,
                                   double rate_min_bps_hz, const SolverConfig& cfg);

/// Rate maximization over the full RAU set, with its implied EE. Flagged
/// Infeasible when even the maximum rate misses the floor.
SelectionResult all_on_rate_baseline(const ChannelRealization& channel, const DasTopology& topology,
                                     double rate_min_bps_hz, const SolverConfig& cfg);

/// Convenience pair {EE-optimal, rate-maximal} over the full set.
std::pair<SelectionResult, SelectionResult> all_on_baselines(const ChannelRealization& channel,
                                                             const DasTopology& topology,
                                                             double rate_min_bps_hz,
                                                             const SolverConfig& cfg);

}  // namespace dasopt
