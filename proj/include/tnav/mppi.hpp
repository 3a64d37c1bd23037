#pragma once

#include <span>
#include <vector>

#include "tnav/predictor.hpp"
#include "tnav/rng.hpp"
#include "tnav/tmap.hpp"

namespace tnav {

struct ControlSequence {
  std::vector<Command> u;

  static ControlSequence zeros(int n) { return {std::vector<Command>(static_cast<std::size_t>(n))}; }
  // Receding-horizon shift: drop the first command, repeat the last.
  ControlSequence shifted() const;
};

enum class MaskMode { Hard, Soft };

struct MppiCostWeights {
  double goal = 4.0;        // terminal distance to goal
  double trav = 1.0;        // per-step traversability lookup
  double effort = 0.05;     // per-step squared command magnitude
  double rollover = 50.0;   // per step beyond the attitude threshold
  double stability = 0.0;   // per-step |roll|+|pitch| (decomposed-model costing)
};

struct MppiConfig {
  int horizon = 12;           // N
  int samples = 64;           // K
  double lambda = 0.3;        // softmax temperature, > 0
  double sigma_v = 0.25;      // per-step v perturbation
  double sigma_omega = 0.6;   // per-step omega perturbation
  // Planner-side actuation budget for sampled commands; capped further by
  // the vehicle limits in SimParams. Non-positive = inherit the sim limits.
  double v_limit = 0.0;
  double omega_limit = 0.0;
  MppiCostWeights weights;
  double rollover_threshold = kPi / 4.0;
  double mask_tau = 1e18;     // combined value above which a cell is masked
  MaskMode mask_mode = MaskMode::Hard;
  double soft_penalty = 100.0;  // added per masked step in soft mode

  void validate() const;
  Command clamp_sample(const Command& c, const SimParams& params) const;
};

inline constexpr double kMaskSentinel = 1e6;

// Decomposed rollout cost; total() applies the weights so diagnostics can
// re-derive each term.
struct CostBreakdown {
  double goal_dist = 0.0;     // terminal distance, meters
  double trav_sum = 0.0;      // summed combined values along the rollout
  double effort_sum = 0.0;    // summed v^2 + omega^2
  double rollover_steps = 0.0;
  double stability_sum = 0.0;  // summed |roll| + |pitch|
  double exit_penalty = 0.0;   // sentinel per step outside the map
  double soft_masked_steps = 0.0;
  bool hard_masked = false;

  double total(const MppiCostWeights& w, double soft_penalty) const;
};

// Cost of one rollout against the traversability map (tm may be null for
// unguided planning: the traversability term is then zero and no masking
// happens). Steps outside the map are billed at the sentinel value.
CostBreakdown rollout_cost(std::span<const VehicleState> traj, const TraversabilityMap* tm,
                           double goal_x, double goal_y, const MppiConfig& cfg);

// Exponentiated-cost weights with min-cost baseline subtraction; sums to 1.
std::vector<double> mppi_weights(std::span<const double> costs, double lambda);

struct MppiDiagnostics {
  std::vector<double> costs;                 // per sample
  std::vector<CostBreakdown> breakdowns;     // per sample
  std::vector<ControlSequence> samples;      // recorded perturbed sequences
  std::vector<double> weights;               // softmax weights
  double effective_sample_size = 0.0;
  int masked_count = 0;       // hard-masked samples
  bool saturated = false;     // every sample hard-masked; nominal returned
  bool fell_back_to_best = false;  // averaged plan violated the mask; argmin used
  ControlSequence planned;    // the (unshifted) sequence whose first command executes
};

struct MppiResult {
  ControlSequence next_nominal;  // planned, shifted one step
  MppiDiagnostics diag;
};

// One receding-horizon update: draw K Gaussian perturbation sequences around
// the nominal, roll each out with the nominal kinodynamic model, cost them,
// softmax-average, and in hard-mask mode verify the averaged plan's own
// rollout stays below tau (falling back to the best sample when it does not).
// Deterministic given the rng state.
MppiResult mppi_plan(const VehicleState& state, double goal_x, double goal_y,
                     const TraversabilityMap* tm, const ControlSequence& nominal,
                     const MppiConfig& cfg, const ElevationMap& map, const VehicleGeometry& geom,
                     const SimParams& params, Rng& rng);

}  // namespace tnav
