#include "dasopt/selection.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace dasopt {

namespace {

double score_of(const CovarianceSolution& sol) {
  // Infeasible sets count as zero EE during the search.
  return sol.status == SolverStatus::Optimal ? sol.energy_efficiency_bits_per_joule : 0.0;
}

CovarianceSolution evaluate_set(const ChannelRealization& channel, const DasTopology& topology,
                                const std::vector<int>& set, double rate_min_bps_hz,
                                const SolverConfig& cfg) {
  return maximize_ee_with_rate_floor(assemble(channel, set), power_model_for_set(topology, set),
                                     rate_min_bps_hz, cfg);
}

// Shared prefix search for the distance and norm orderings. `order` is a
// permutation of the RAU indices, best-first.
SelectionResult greedy_prefix_search(const ChannelRealization& channel,
                                     const DasTopology& topology, double rate_min_bps_hz,
                                     const SolverConfig& cfg, const std::vector<int>& order,
                                     SelectionStrategy strategy) {
  SelectionResult res;
  res.strategy = strategy;
  double best_ee = 0.0;
  for (int a = 1; a <= topology.rau_count(); ++a) {
    std::vector<int> set(order.begin(), order.begin() + a);
    std::sort(set.begin(), set.end());
    CovarianceSolution sol = evaluate_set(channel, topology, set, rate_min_bps_hz, cfg);
    ++res.sets_evaluated;
    const double ee = score_of(sol);
    if (ee >= best_ee) {
      // Ties continue the search, so the all-infeasible case walks through
      // every prefix and ends holding the full set's rate-max fallback.
      best_ee = ee;
      res.active_set = std::move(set);
      res.solution = std::move(sol);
    } else {
      break;  // farther RAUs only add circuit power from here on
    }
  }
  return res;
}

std::vector<int> order_by_distance(const ChannelRealization& channel) {
  std::vector<int> order(channel.distances_m.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return channel.distances_m[a] < channel.distances_m[b];
  });
  return order;
}

std::vector<int> order_by_norm(const ChannelRealization& channel) {
  std::vector<double> norms(channel.blocks.size());
  for (std::size_t i = 0; i < channel.blocks.size(); ++i) {
    norms[i] = channel.blocks[i].norm();
  }
  std::vector<int> order(norms.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return norms[a] > norms[b]; });
  return order;
}

std::vector<int> full_set(const DasTopology& topology) {
  std::vector<int> set(topology.rau_count());
  std::iota(set.begin(), set.end(), 0);
  return set;
}

}  // namespace

double circuit_power_w(const DasTopology& topology, const std::vector<int>& active_set) {
  int antennas = 0;
  for (int idx : active_set) antennas += topology.antennas_per_rau.at(idx);
  return antennas * topology.rf_chain_power_w +
         static_cast<double>(active_set.size()) * topology.static_power_w;
}

double cas_circuit_power_w(const DasTopology& topology, bool literal) {
  const int sites = topology.rau_count();
  const int antennas = topology.total_antennas();
  if (literal) return sites * topology.rf_chain_power_w + antennas * topology.static_power_w;
  return antennas * topology.rf_chain_power_w + topology.static_power_w;
}

PowerModel power_model_for_set(const DasTopology& topology, const std::vector<int>& active_set) {
  PowerModel pm;
  pm.block_sizes.reserve(active_set.size());
  pm.per_rau_limits_w.reserve(active_set.size());
  for (int idx : active_set) {
    pm.block_sizes.push_back(topology.antennas_per_rau.at(idx));
    pm.per_rau_limits_w.push_back(topology.power_limit_w.at(idx));
  }
  pm.circuit_power_w = circuit_power_w(topology, active_set);
  pm.bandwidth_hz = topology.bandwidth_hz;
  return pm;
}

SelectionResult select_by_distance(const ChannelRealization& channel, const DasTopology& topology,
                                   double rate_min_bps_hz, const SolverConfig& cfg) {
  return greedy_prefix_search(channel, topology, rate_min_bps_hz, cfg, order_by_distance(channel),
                              SelectionStrategy::Distance);
}

SelectionResult select_by_norm(const ChannelRealization& channel, const DasTopology& topology,
                               double rate_min_bps_hz, const SolverConfig& cfg) {
  return greedy_prefix_search(channel, topology, rate_min_bps_hz, cfg, order_by_norm(channel),
                              SelectionStrategy::Norm);
}

SelectionResult select_exhaustive(const ChannelRealization& channel, const DasTopology& topology,
                                  double rate_min_bps_hz, const SolverConfig& cfg) {
  const int count = topology.rau_count();
  if (count > 12) {
    throw std::invalid_argument("select_exhaustive: refusing to enumerate more than 2^12 subsets");
  }
  SelectionResult res;
  res.strategy = SelectionStrategy::Exhaustive;
  double best_ee = 0.0;
  bool any_feasible = false;
  bool have_best = false;
  CovarianceSolution full_sol;

  for (unsigned mask = 1; mask < (1u << count); ++mask) {
    std::vector<int> set;
    for (int i = 0; i < count; ++i) {
      if (mask & (1u << i)) set.push_back(i);
    }
    CovarianceSolution sol = evaluate_set(channel, topology, set, rate_min_bps_hz, cfg);
    ++res.sets_evaluated;
    const double ee = score_of(sol);
    any_feasible = any_feasible || sol.status == SolverStatus::Optimal;
    const bool is_full = static_cast<int>(set.size()) == count;
    if (!have_best || ee > best_ee) {
      best_ee = ee;
      res.active_set = set;
      res.solution = sol;
      have_best = true;
    }
    if (is_full) full_sol = std::move(sol);
  }
  if (!any_feasible) {
    // Same fallback as the greedy search: all RAUs on at maximum rate.
    res.active_set = full_set(topology);
    res.solution = std::move(full_sol);
  }
  return res;
}

SelectionResult cas_baseline(const ChannelRealization& cas_channel, const DasTopology& topology,
                             double rate_min_bps_hz, const SolverConfig& cfg,
                             bool literal_circuit) {
  if (cas_channel.blocks.size() != 1) {
    throw std::invalid_argument("cas_baseline: expected a single-site channel realization");
  }
  PowerModel pm;
  pm.block_sizes = {static_cast<int>(cas_channel.blocks[0].cols())};
  pm.per_rau_limits_w = {topology.total_power_limit_w()};
  pm.circuit_power_w = cas_circuit_power_w(topology, literal_circuit);
  pm.bandwidth_hz = topology.bandwidth_hz;

  SelectionResult res;
  res.strategy = SelectionStrategy::Cas;
  res.active_set = {0};
  res.sets_evaluated = 1;
  res.solution = maximize_ee_with_rate_floor(cas_channel.blocks[0], pm, rate_min_bps_hz, cfg);
  return res;
}

SelectionResult all_on_ee_baseline(const ChannelRealization& channel, const DasTopology& topology,
                                   double rate_min_bps_hz, const SolverConfig& cfg) {
  SelectionResult res;
  res.strategy = SelectionStrategy::AllOn;
  res.active_set = full_set(topology);
  res.sets_evaluated = 1;
  res.solution = evaluate_set(channel, topology, res.active_set, rate_min_bps_hz, cfg);
  return res;
}

SelectionResult all_on_rate_baseline(const ChannelRealization& channel, const DasTopology& topology,
                                     double rate_min_bps_hz, const SolverConfig& cfg) {
  SelectionResult res;
  res.strategy = SelectionStrategy::AllOn;
  res.active_set = full_set(topology);
  res.sets_evaluated = 1;
  res.solution = maximize_rate(assemble(channel, res.active_set),
                               power_model_for_set(topology, res.active_set), cfg);
  if (res.solution.rate_bps_hz < rate_min_bps_hz) {
    res.solution.status = SolverStatus::Infeasible;
  }
  return res;
}

std::pair<SelectionResult, SelectionResult> all_on_baselines(const ChannelRealization& channel,
                                                             const DasTopology& topology,
                                                             double rate_min_bps_hz,
                                                             const SolverConfig& cfg) {
  return {all_on_ee_baseline(channel, topology, rate_min_bps_hz, cfg),
          all_on_rate_baseline(channel, topology, rate_min_bps_hz, cfg)};
}

}  // namespace dasopt
