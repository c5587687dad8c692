#pragma once

#include <vector>

#include "dasopt/numerics.hpp"

namespace dasopt {

/// Per-RAU power constraints for one active set. block_sizes gives the
/// antenna count of each active RAU (in active-set order); the i-th power
/// limit applies to the trace of the corresponding diagonal block of the
/// transmit covariance. bandwidth_hz is only used to express energy
/// efficiency in bit/J.
struct PowerModel {
  std::vector<int> block_sizes;
  std::vector<double> per_rau_limits_w;
  double circuit_power_w = 0.0;
  double bandwidth_hz = 1.0;

  int total_antennas() const;
  void validate(Eigen::Index columns) const;
};

struct SolverConfig {
  double tolerance = 1e-5;              // epsilon used by every stopping rule
  double subgradient_step_scale = 30.0;  // step u_k = 1 / (scale * k)
  int max_subgradient_iters = 500;
  int max_dinkelbach_iters = 30;
  int max_bisection_iters = 60;
  double rank_tol = 1e-10;
};

enum class SolverStatus { Optimal, Infeasible };

struct CovarianceSolution {
  ComplexMatrix covariance;  // Hermitian PSD, per-RAU feasible
  double rate_bps_hz = 0.0;
  double transmit_power_w = 0.0;
  double circuit_power_w = 0.0;
  double energy_efficiency_bits_per_joule = 0.0;  // W * rate / (tx + circuit)
  SolverStatus status = SolverStatus::Optimal;
  bool converged = true;  // stopping criterion of the controlling stage met

  // Dual diagnostics.
  std::vector<double> rau_power_prices;  // final per-RAU multipliers
  double dual_ee_ratio = 0.0;     // Dinkelbach ratio at exit, set when the EE stage ran
  double dual_power_price = 0.0;  // transmit-power price from the power-minimization stage

  int subgradient_iters = 0;  // cumulative across stages
  int dinkelbach_iters = 0;
  int bisection_iters = 0;
};

/// Per-iteration objective series, filled when a trace sink is passed to a
/// solver. Rate stage: best feasible rate so far. EE stage: Dinkelbach ratio
/// sequence (starts at 0). Power stage: achieved rate per bisection probe.
struct IterationTrace {
  std::vector<double> objective;
};

/// Water-filling solution of max log2|I + h Q h^H| - tr(diag(weights) Q) over
/// PSD Q. Modes come from the eigendecomposition of W^{-1/2} h^H h W^{-1/2};
/// each retained mode gets power [1/ln2 - 1/d_m]^+.
struct Waterfill {
  ComplexMatrix covariance;
  ComplexMatrix basis;     // eigenbasis in the weighted space
  RealVector mode_gains;   // d, descending
  RealVector mode_powers;  // q
};

Waterfill inner_waterfill(const ComplexMatrix& h, const RealVector& weights, double rank_tol);

/// Rank-one matched-filter covariance for a single-receive-antenna channel:
/// Q = power * W^{-1} h^H h W^{-1} / ||W^{-1/2} h^H||^2, so tr(W Q) = power.
ComplexMatrix miso_mrt_covariance(const ComplexMatrix& h, const RealVector& weights, double power);

/// Rate maximization under per-RAU power constraints via dual subgradient
/// ascent: multipliers start at 1, the inner problem is solved by
/// water-filling, and multipliers follow P_i - tr(B_i Q) with step
/// 1/(scale*k). The returned covariance is the best feasible iterate
/// (iterates are repaired by one uniform scale factor when slightly
/// infeasible); converged=false flags a hit iteration cap.
CovarianceSolution maximize_rate(const ComplexMatrix& h, const PowerModel& power,
                                 const SolverConfig& cfg, IterationTrace* trace = nullptr);

/// Energy-efficiency maximization without a rate floor (Dinkelbach): solves
/// max rate - eta*(power + P_C) subproblems with the same dual loop, updating
/// eta to the achieved ratio until |G(eta)| <= tolerance.
CovarianceSolution maximize_ee(const ComplexMatrix& h, const PowerModel& power,
                               const SolverConfig& cfg, IterationTrace* trace = nullptr);

/// Transmit-power minimization subject to rate >= rate_floor, by bisection on
/// the power price mu in (tolerance * ee_ratio_upper, ee_ratio_upper]; the
/// achieved rate is nonincreasing in mu, and the upper bound comes from a
/// prior maximize_ee (its ratio always exceeds the required price). Returns
/// Infeasible when the floor exceeds the achievable rate.
CovarianceSolution minimize_power(const ComplexMatrix& h, const PowerModel& power,
                                  double rate_floor_bps_hz, double ee_ratio_upper,
                                  const SolverConfig& cfg, IterationTrace* trace = nullptr);

/// Full cascade for a fixed active set: (1) rate maximization as the
/// feasibility check, (2) unconstrained EE maximization, accepted when it
/// meets the floor, (3) otherwise power minimization at the floor. An
/// Infeasible result carries the rate-maximizing solution's numbers.
CovarianceSolution maximize_ee_with_rate_floor(const ComplexMatrix& h, const PowerModel& power,
                                               double rate_min_bps_hz, const SolverConfig& cfg);

}  // namespace dasopt
