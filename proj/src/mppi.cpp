#include "tnav/mppi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tnav/error.hpp"
#include "tnav/geometry.hpp"
#include "tnav/parallel.hpp"

namespace tnav {

ControlSequence ControlSequence::shifted() const {
  ControlSequence out = *this;
  if (out.u.size() > 1) {
    std::rotate(out.u.begin(), out.u.begin() + 1, out.u.end());
    out.u.back() = u.back();
  }
  return out;
}

void MppiConfig::validate() const {
  if (horizon < 1) throw SpecError("mppi horizon must be >= 1");
  if (samples < 2) throw SpecError("mppi sample count must be >= 2");
  if (!(lambda > 0.0)) throw SpecError("mppi lambda must be > 0");
  if (sigma_v < 0.0 || sigma_omega < 0.0) throw SpecError("mppi noise sigmas must be >= 0");
  if (!std::isfinite(mask_tau)) throw SpecError("mppi mask tau must be finite");
}

Command MppiConfig::clamp_sample(const Command& c, const SimParams& params) const {
  const double vm = v_limit > 0.0 ? std::min(v_limit, params.v_max) : params.v_max;
  const double wm = omega_limit > 0.0 ? std::min(omega_limit, params.omega_max) : params.omega_max;
  return {std::clamp(c.v, -vm, vm), std::clamp(c.omega, -wm, wm)};
}

double CostBreakdown::total(const MppiCostWeights& w, double soft_penalty) const {
  if (hard_masked) return kMaskSentinel;
  return w.goal * goal_dist + w.trav * trav_sum + w.effort * effort_sum +
         w.rollover * rollover_steps + w.stability * stability_sum + exit_penalty +
         soft_penalty * soft_masked_steps;
}

CostBreakdown rollout_cost(std::span<const VehicleState> traj, const TraversabilityMap* tm,
                           double goal_x, double goal_y, const MppiConfig& cfg) {
  if (traj.empty()) throw SpecError("rollout_cost: empty trajectory");
  CostBreakdown cost;
  for (const VehicleState& s : traj) {
    cost.effort_sum += s.v * s.v + s.omega * s.omega;
    cost.stability_sum += std::abs(s.roll) + std::abs(s.pitch);
    if (std::abs(s.roll) > cfg.rollover_threshold || std::abs(s.pitch) > cfg.rollover_threshold) {
      cost.rollover_steps += 1.0;
    }
    if (tm != nullptr) {
      if (s.x < tm->origin_x || s.x > tm->origin_x + tm->height_cells * tm->resolution ||
          s.y < tm->origin_y || s.y > tm->origin_y + tm->width_cells * tm->resolution) {
        cost.exit_penalty += kMaskSentinel;
        if (cfg.mask_mode == MaskMode::Hard) cost.hard_masked = true;
        continue;
      }
      const double value = tm->combined[tm->cell_index(tm->cell_m(s.x), tm->cell_n(s.y))];
      cost.trav_sum += value;
      if (value > cfg.mask_tau) {
        if (cfg.mask_mode == MaskMode::Hard) {
          cost.hard_masked = true;
        } else {
          cost.soft_masked_steps += 1.0;
        }
      }
    }
  }
  const VehicleState& last = traj.back();
  cost.goal_dist = hypot2(last.x - goal_x, last.y - goal_y);
  return cost;
}

std::vector<double> mppi_weights(std::span<const double> costs, double lambda) {
  if (costs.empty()) throw SpecError("mppi_weights: no costs");
  if (!(lambda > 0.0)) throw SpecError("mppi_weights: lambda must be > 0");
  double min_cost = costs[0];
  for (const double c : costs) min_cost = std::min(min_cost, c);
  std::vector<double> w(costs.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    w[i] = std::exp(-(costs[i] - min_cost) / lambda);
    sum += w[i];
  }
  for (double& x : w) x /= sum;
  return w;
}

namespace {

// True when every step of the rollout stays below the mask threshold and on
// the map.
bool rollout_feasible(std::span<const VehicleState> traj, const TraversabilityMap& tm,
                      double tau) {
  for (const VehicleState& s : traj) {
    if (s.x < tm.origin_x || s.x > tm.origin_x + tm.height_cells * tm.resolution ||
        s.y < tm.origin_y || s.y > tm.origin_y + tm.width_cells * tm.resolution) {
      return false;
    }
    if (tm.combined[tm.cell_index(tm.cell_m(s.x), tm.cell_n(s.y))] > tau) return false;
  }
  return true;
}

}  // namespace

MppiResult mppi_plan(const VehicleState& state, double goal_x, double goal_y,
                     const TraversabilityMap* tm, const ControlSequence& nominal,
                     const MppiConfig& cfg, const ElevationMap& map, const VehicleGeometry& geom,
                     const SimParams& params, Rng& rng) {
  cfg.validate();
  if (static_cast<int>(nominal.u.size()) != cfg.horizon) {
    throw SpecError("mppi_plan: nominal sequence length must equal the horizon");
  }

  const int K = cfg.samples;
  const int N = cfg.horizon;

  MppiResult result;
  MppiDiagnostics& diag = result.diag;
  diag.samples.resize(K);
  diag.costs.resize(K);
  diag.breakdowns.resize(K);

  // Sample-major, then step-major draws keep the stream layout fixed.
  for (int k = 0; k < K; ++k) {
    ControlSequence seq;
    seq.u.resize(N);
    for (int t = 0; t < N; ++t) {
      Command c = nominal.u[t];
      c.v += draw_gaussian(rng, 0.0, cfg.sigma_v);
      c.omega += draw_gaussian(rng, 0.0, cfg.sigma_omega);
      seq.u[t] = cfg.clamp_sample(c, params);
    }
    diag.samples[k] = std::move(seq);
  }

  // Rollouts and costs are pure per sample.
  parallel_for(static_cast<std::size_t>(K), [&](std::size_t k) {
    const RolloutResult rr = predict_rollout(state, diag.samples[k].u, map, geom, params);
    CostBreakdown cost;
    if (rr.states.empty()) {
      cost.exit_penalty = kMaskSentinel * N;
      if (cfg.mask_mode == MaskMode::Hard && tm != nullptr) cost.hard_masked = true;
      cost.goal_dist = hypot2(state.x - goal_x, state.y - goal_y);
    } else {
      cost = rollout_cost(rr.states, tm, goal_x, goal_y, cfg);
      if (rr.exited) {
        const int missing = N - static_cast<int>(rr.states.size());
        cost.exit_penalty += kMaskSentinel * missing;
        if (cfg.mask_mode == MaskMode::Hard && tm != nullptr) cost.hard_masked = true;
      }
    }
    diag.breakdowns[k] = cost;
    diag.costs[k] = cost.total(cfg.weights, cfg.soft_penalty);
  });

  diag.masked_count = 0;
  for (const auto& b : diag.breakdowns) {
    if (b.hard_masked) ++diag.masked_count;
  }

  if (tm != nullptr && cfg.mask_mode == MaskMode::Hard && diag.masked_count == K) {
    diag.saturated = true;
    diag.planned = nominal;
    diag.weights.assign(K, 1.0 / K);
    diag.effective_sample_size = static_cast<double>(K);
    result.next_nominal = nominal;
    return result;
  }

  diag.weights = mppi_weights(diag.costs, cfg.lambda);
  double ess = 0.0;
  for (const double w : diag.weights) ess += w * w;
  diag.effective_sample_size = 1.0 / ess;

  ControlSequence averaged;
  averaged.u.assign(N, Command{});
  for (int k = 0; k < K; ++k) {
    const double w = diag.weights[k];
    for (int t = 0; t < N; ++t) {
      averaged.u[t].v += w * diag.samples[k].u[t].v;
      averaged.u[t].omega += w * diag.samples[k].u[t].omega;
    }
  }
  for (Command& c : averaged.u) c = cfg.clamp_sample(c, params);

  // The softmax average of feasible samples is not itself guaranteed
  // feasible; in hard-mask mode verify its rollout and fall back to the
  // lowest-cost sample (feasible by construction) when it violates the mask.
  if (tm != nullptr && cfg.mask_mode == MaskMode::Hard) {
    const RolloutResult avg_rr = predict_rollout(state, averaged.u, map, geom, params);
    const bool ok = !avg_rr.exited && static_cast<int>(avg_rr.states.size()) == N &&
                    rollout_feasible(avg_rr.states, *tm, cfg.mask_tau);
    if (!ok) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < diag.costs.size(); ++k) {
        if (diag.costs[k] < diag.costs[best]) best = k;
      }
      averaged = diag.samples[best];
      diag.fell_back_to_best = true;
    }
  }

  diag.planned = averaged;
  result.next_nominal = averaged.shifted();
  return result;
}

}  // namespace tnav
