#include "dasopt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dasopt {

namespace {

constexpr double kWeightFloor = 1e-12;  // the weighted subproblem needs strictly positive weights

double water_level_power(double gain) {
  return std::max(0.0, 1.0 / std::numbers::ln2 - 1.0 / gain);
}

// One evaluation of the weighted water-filling allocation plus the uniform
// feasibility repair against the per-RAU limits. Scaling the covariance by a
// single factor keeps it PSD and leaves beam directions untouched. For the
// pure rate stage (fill_power) the ray is followed up to the first binding
// constraint, since the rate is strictly increasing along it; the priced
// stages only shrink infeasible iterates.
struct Allocation {
  HermitianEvd modes;       // basis (M x r) and gains d in the weighted space
  RealVector mode_powers;   // q, before repair
  RealVector rau_power;     // tr(B_i Q), before repair
  double scale = 1.0;       // uniform repair factor c
  double rate = 0.0;        // log2 det at the repaired covariance
  double power = 0.0;       // total transmit power after repair
};

Allocation evaluate_allocation(const ComplexMatrix& h, const RealVector& weights,
                               const std::vector<int>& antenna_rau,
                               const std::vector<double>& limits, double rank_tol,
                               bool fill_power) {
  Allocation out;
  const RealVector inv_sqrt = weights.array().sqrt().inverse();
  out.modes = gram_evd(h * inv_sqrt.asDiagonal(), rank_tol);
  const Eigen::Index r = out.modes.eigenvalues.size();
  out.mode_powers.resize(r);
  for (Eigen::Index m = 0; m < r; ++m) {
    out.mode_powers[m] = water_level_power(out.modes.eigenvalues[m]);
  }

  out.rau_power = RealVector::Zero(static_cast<Eigen::Index>(limits.size()));
  for (Eigen::Index j = 0; j < h.cols(); ++j) {
    double alloc = 0.0;
    for (Eigen::Index m = 0; m < r; ++m) {
      alloc += out.mode_powers[m] * std::norm(out.modes.basis(j, m));
    }
    out.rau_power[antenna_rau[j]] += alloc / weights[j];
  }

  double ray_limit = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < out.rau_power.size(); ++i) {
    if (out.rau_power[i] > 0) {
      ray_limit = std::min(ray_limit, limits[i] / out.rau_power[i]);
    }
  }
  if (std::isfinite(ray_limit)) {
    out.scale = fill_power ? ray_limit : std::min(1.0, ray_limit);
  }
  for (Eigen::Index m = 0; m < r; ++m) {
    out.rate += std::log2(1.0 + out.scale * out.mode_powers[m] * out.modes.eigenvalues[m]);
  }
  out.power = out.scale * out.rau_power.sum();
  return out;
}

ComplexMatrix materialize_covariance(const Allocation& alloc, const RealVector& weights) {
  const RealVector inv_sqrt = weights.array().sqrt().inverse();
  const ComplexMatrix carrier = inv_sqrt.asDiagonal() * alloc.modes.basis;
  const RealVector powers = alloc.scale * alloc.mode_powers;
  return hermitianize(carrier * powers.asDiagonal() * carrier.adjoint());
}

RealVector weights_from_duals(const std::vector<double>& lambda, double tx_price,
                              const std::vector<int>& antenna_rau, Eigen::Index columns) {
  RealVector w(columns);
  for (Eigen::Index j = 0; j < columns; ++j) {
    w[j] = std::max(tx_price + lambda[antenna_rau[j]], kWeightFloor);
  }
  return w;
}

struct DualOutcome {
  ComplexMatrix covariance;
  std::vector<double> lambda;  // multipliers at the returned iterate
  double rate = 0.0;
  double power = 0.0;
  double score = 0.0;  // rate - tx_price * power at the returned iterate
  int iterations = 0;
  bool converged = false;
};

// Projected subgradient ascent on the per-RAU multipliers for the subproblem
//   max_{Q in W} log2|I + h Q h^H| - tx_price * tr(Q).
// Stops when the complementary-slackness residual plus the primal violation
// drops below tolerance * max_i P_i. Returns the best repaired iterate.
DualOutcome dual_subgradient(const ComplexMatrix& h, const PowerModel& pm, double tx_price,
                             const SolverConfig& cfg, std::vector<double> lambda,
                             IterationTrace* trace) {
  const int rau_count = static_cast<int>(pm.per_rau_limits_w.size());
  std::vector<int> antenna_rau(pm.total_antennas());
  for (int i = 0, j = 0; i < rau_count; ++i) {
    for (int a = 0; a < pm.block_sizes[i]; ++a) antenna_rau[j++] = i;
  }
  const double max_limit =
      *std::max_element(pm.per_rau_limits_w.begin(), pm.per_rau_limits_w.end());

  std::vector<double> best_lambda = lambda;
  double best_score = -std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;

  const bool fill_power = tx_price == 0.0;  // rate is strictly increasing along the scaling ray
  for (int k = 1; k <= cfg.max_subgradient_iters; ++k) {
    iterations = k;
    const RealVector w = weights_from_duals(lambda, tx_price, antenna_rau, h.cols());
    const Allocation alloc =
        evaluate_allocation(h, w, antenna_rau, pm.per_rau_limits_w, cfg.rank_tol, fill_power);
    const double score = alloc.rate - tx_price * alloc.power;
    if (score > best_score) {
      best_score = score;
      best_lambda = lambda;
    }
    if (trace) trace->objective.push_back(best_score);

    double slackness = 0.0;
    double violation = 0.0;
    for (int i = 0; i < rau_count; ++i) {
      const double s = pm.per_rau_limits_w[i] - alloc.rau_power[i];
      slackness = std::max(slackness, std::abs(lambda[i] * s));
      violation = std::max(violation, -s);
    }
    if (slackness + std::max(violation, 0.0) <= cfg.tolerance * max_limit) {
      converged = true;
      break;
    }
    const double step = 1.0 / (cfg.subgradient_step_scale * k);
    for (int i = 0; i < rau_count; ++i) {
      const double s = pm.per_rau_limits_w[i] - alloc.rau_power[i];
      lambda[i] = std::max(0.0, lambda[i] - step * s);
    }
  }

  // Rebuild the best iterate; the evaluation is deterministic in lambda.
  const RealVector w = weights_from_duals(best_lambda, tx_price, antenna_rau, h.cols());
  const Allocation alloc =
      evaluate_allocation(h, w, antenna_rau, pm.per_rau_limits_w, cfg.rank_tol, fill_power);
  DualOutcome out;
  out.covariance = materialize_covariance(alloc, w);
  out.lambda = std::move(best_lambda);
  out.rate = alloc.rate;
  out.power = alloc.power;
  out.score = alloc.rate - tx_price * alloc.power;
  out.iterations = iterations;
  out.converged = converged;
  return out;
}

double energy_efficiency(const PowerModel& pm, double rate, double tx_power) {
  const double denom = tx_power + pm.circuit_power_w;
  return denom > 0 ? pm.bandwidth_hz * rate / denom : 0.0;
}

CovarianceSolution solution_from(const PowerModel& pm, DualOutcome&& out) {
  CovarianceSolution sol;
  sol.covariance = std::move(out.covariance);
  sol.rate_bps_hz = out.rate;
  sol.transmit_power_w = out.power;
  sol.circuit_power_w = pm.circuit_power_w;
  sol.energy_efficiency_bits_per_joule = energy_efficiency(pm, out.rate, out.power);
  sol.rau_power_prices = std::move(out.lambda);
  sol.subgradient_iters = out.iterations;
  sol.converged = out.converged;
  return sol;
}

std::vector<double> unit_duals(const PowerModel& pm) {
  return std::vector<double>(pm.per_rau_limits_w.size(), 1.0);
}

}  // namespace

int PowerModel::total_antennas() const {
  return std::accumulate(block_sizes.begin(), block_sizes.end(), 0);
}

void PowerModel::validate(Eigen::Index columns) const {
  if (block_sizes.empty() || block_sizes.size() != per_rau_limits_w.size()) {
    throw std::invalid_argument("power model: block sizes and limits must be nonempty and equal length");
  }
  for (int m : block_sizes) {
    if (m < 1) throw std::invalid_argument("power model: block sizes must be positive");
  }
  for (double p : per_rau_limits_w) {
    if (p <= 0) throw std::invalid_argument("power model: power limits must be strictly positive");
  }
  if (circuit_power_w < 0) throw std::invalid_argument("power model: circuit power must be nonnegative");
  if (bandwidth_hz <= 0) throw std::invalid_argument("power model: bandwidth must be positive");
  if (total_antennas() != columns) {
    throw std::invalid_argument("power model: blocks cover " + std::to_string(total_antennas()) +
                                " antennas but the channel has " + std::to_string(columns) +
                                " columns");
  }
}

Waterfill inner_waterfill(const ComplexMatrix& h, const RealVector& weights, double rank_tol) {
  if (weights.size() != h.cols()) {
    throw std::invalid_argument("inner_waterfill: weight count must match channel columns");
  }
  if ((weights.array() <= 0.0).any()) {
    throw std::invalid_argument("inner_waterfill: weights must be strictly positive");
  }
  const RealVector inv_sqrt = weights.array().sqrt().inverse();
  Waterfill out;
  HermitianEvd evd = gram_evd(h * inv_sqrt.asDiagonal(), rank_tol);
  const Eigen::Index r = evd.eigenvalues.size();
  out.mode_powers.resize(r);
  for (Eigen::Index m = 0; m < r; ++m) {
    out.mode_powers[m] = water_level_power(evd.eigenvalues[m]);
  }
  const ComplexMatrix carrier = inv_sqrt.asDiagonal() * evd.basis;
  out.covariance = hermitianize(carrier * out.mode_powers.asDiagonal() * carrier.adjoint());
  out.basis = std::move(evd.basis);
  out.mode_gains = std::move(evd.eigenvalues);
  return out;
}

ComplexMatrix miso_mrt_covariance(const ComplexMatrix& h, const RealVector& weights, double power) {
  if (h.rows() != 1) throw std::invalid_argument("miso_mrt_covariance: channel must be a row vector");
  if (weights.size() != h.cols()) {
    throw std::invalid_argument("miso_mrt_covariance: weight count must match channel columns");
  }
  if ((weights.array() <= 0.0).any()) {
    throw std::invalid_argument("miso_mrt_covariance: weights must be strictly positive");
  }
  if (power < 0) throw std::invalid_argument("miso_mrt_covariance: power must be nonnegative");
  const ComplexVector matched = weights.array().inverse().matrix().asDiagonal() * h.adjoint();
  const double gain = (h * matched).real()(0, 0);  // h W^{-1} h^H = ||W^{-1/2} h^H||^2
  if (gain <= 0) throw std::invalid_argument("miso_mrt_covariance: channel vector is zero");
  return (power / gain) * (matched * matched.adjoint());
}

CovarianceSolution maximize_rate(const ComplexMatrix& h, const PowerModel& power,
                                 const SolverConfig& cfg, IterationTrace* trace) {
  power.validate(h.cols());
  return solution_from(power, dual_subgradient(h, power, 0.0, cfg, unit_duals(power), trace));
}

CovarianceSolution maximize_ee(const ComplexMatrix& h, const PowerModel& power,
                               const SolverConfig& cfg, IterationTrace* trace) {
  power.validate(h.cols());
  double eta = 0.0;
  std::vector<double> warm = unit_duals(power);
  DualOutcome cur;
  int inner_solves = 0;
  int subgradient_total = 0;
  bool converged = false;

  while (inner_solves < cfg.max_dinkelbach_iters) {
    if (trace) trace->objective.push_back(eta);
    cur = dual_subgradient(h, power, eta, cfg, warm, nullptr);
    warm = cur.lambda;
    ++inner_solves;
    subgradient_total += cur.iterations;
    const double g = cur.rate - eta * (cur.power + power.circuit_power_w);
    if (std::abs(g) <= cfg.tolerance) {
      converged = true;
      break;
    }
    eta = cur.rate / (cur.power + power.circuit_power_w);
  }

  CovarianceSolution sol = solution_from(power, std::move(cur));
  sol.subgradient_iters = subgradient_total;
  sol.dinkelbach_iters = inner_solves;
  sol.dual_ee_ratio = eta;
  sol.converged = converged;
  return sol;
}

CovarianceSolution minimize_power(const ComplexMatrix& h, const PowerModel& power,
                                  double rate_floor_bps_hz, double ee_ratio_upper,
                                  const SolverConfig& cfg, IterationTrace* trace) {
  power.validate(h.cols());
  if (rate_floor_bps_hz <= 0) {
    // Any covariance meets a nonpositive floor; zero power is optimal.
    CovarianceSolution sol;
    sol.covariance = ComplexMatrix::Zero(h.cols(), h.cols());
    sol.circuit_power_w = power.circuit_power_w;
    sol.rau_power_prices.assign(power.per_rau_limits_w.size(), 0.0);
    return sol;
  }
  if (ee_ratio_upper <= 0) {
    throw std::invalid_argument("minimize_power: price upper bound must be positive");
  }

  std::vector<double> warm = unit_duals(power);
  int probes = 0;
  int subgradient_total = 0;
  auto probe = [&](double mu) {
    DualOutcome out = dual_subgradient(h, power, mu, cfg, warm, nullptr);
    warm = out.lambda;
    ++probes;
    subgradient_total += out.iterations;
    if (trace) trace->objective.push_back(out.rate);
    return out;
  };

  double mu_lo = cfg.tolerance * ee_ratio_upper;  // the price must stay strictly positive
  double mu_hi = ee_ratio_upper;
  const double rate_tol = cfg.tolerance * rate_floor_bps_hz;

  DualOutcome best = probe(mu_lo);
  double best_mu = mu_lo;
  if (best.rate < rate_floor_bps_hz - rate_tol) {
    // Floor above the achievable rate: precondition violated.
    CovarianceSolution sol = solution_from(power, std::move(best));
    sol.status = SolverStatus::Infeasible;
    sol.converged = false;
    sol.dual_power_price = mu_lo;
    sol.bisection_iters = probes;
    sol.subgradient_iters = subgradient_total;
    return sol;
  }

  bool converged = std::abs(best.rate - rate_floor_bps_hz) <= rate_tol;
  while (!converged && probes < cfg.max_bisection_iters) {
    const double mu = 0.5 * (mu_lo + mu_hi);
    DualOutcome cur = probe(mu);
    if (std::abs(cur.rate - rate_floor_bps_hz) <= rate_tol) {
      best = std::move(cur);
      best_mu = mu;
      converged = true;
      break;
    }
    if (cur.rate > rate_floor_bps_hz) {
      mu_lo = mu;  // rate is nonincreasing in the price: move toward the floor
      best = std::move(cur);
      best_mu = mu;
    } else {
      mu_hi = mu;
    }
    if (mu_hi - mu_lo <= 1e-14 * ee_ratio_upper) break;  // interval collapse
  }

  CovarianceSolution sol = solution_from(power, std::move(best));
  sol.dual_power_price = best_mu;
  sol.bisection_iters = probes;
  sol.subgradient_iters = subgradient_total;
  sol.converged = converged;
  return sol;
}

CovarianceSolution maximize_ee_with_rate_floor(const ComplexMatrix& h, const PowerModel& power,
                                               double rate_min_bps_hz, const SolverConfig& cfg) {
  CovarianceSolution rate_sol = maximize_rate(h, power, cfg);
  if (rate_sol.rate_bps_hz < rate_min_bps_hz) {
    rate_sol.status = SolverStatus::Infeasible;
    return rate_sol;
  }
  CovarianceSolution ee_sol = maximize_ee(h, power, cfg);
  ee_sol.subgradient_iters += rate_sol.subgradient_iters;
  if (ee_sol.rate_bps_hz >= rate_min_bps_hz) {
    return ee_sol;
  }
  CovarianceSolution min_sol =
      minimize_power(h, power, rate_min_bps_hz, ee_sol.dual_ee_ratio, cfg);
  min_sol.subgradient_iters += ee_sol.subgradient_iters;
  min_sol.dinkelbach_iters = ee_sol.dinkelbach_iters;
  min_sol.dual_ee_ratio = ee_sol.dual_ee_ratio;
  return min_sol;
}

}  // namespace dasopt
