#include "tnav/predictor.hpp"

#include <algorithm>
#include <cmath>

#include "tnav/error.hpp"
#include "tnav/geometry.hpp"

namespace tnav {

double slope_along_heading(const ElevationMap& map, double x, double y, double yaw,
                           const VehicleGeometry& geom) {
  const double d = geom.wheelbase / 2.0;
  const double cx = std::cos(yaw);
  const double sy = std::sin(yaw);
  const double h_front = height_at_clamped(map, x + d * cx, y + d * sy);
  const double h_rear = height_at_clamped(map, x - d * cx, y - d * sy);
  return (h_front - h_rear) / (2.0 * d);
}

double speed_factor(double slope, const SimParams& params) {
  const double uphill = std::max(0.0, slope);
  double f = std::clamp(1.0 - params.slip_gain * uphill, 0.0, 1.0);
  if (slope > params.stuck_slope) f = std::min(f, 0.02);
  return f;
}

namespace detail {

VehicleState step_core(const VehicleState& state, const Command& cmd, const ElevationMap& map,
                       const VehicleGeometry& geom, const SimParams& params, double noise_v,
                       double noise_omega, bool clamped) {
  const Command c = params.clamp(cmd);
  const double alpha = 1.0 - std::exp(-params.dt / params.actuation_tau);
  const double v_lag = state.v + alpha * (c.v - state.v);
  const double omega_lag = state.omega + alpha * (c.omega - state.omega);

  const double slope = slope_along_heading(map, state.x, state.y, state.yaw, geom);
  const double v_eff = v_lag * speed_factor(slope, params) + noise_v;
  const double omega_eff = omega_lag + noise_omega;

  VehicleState next = state;
  next.v = v_eff;
  next.omega = omega_eff;
  next.x = state.x + v_eff * std::cos(state.yaw) * params.dt;
  next.y = state.y + v_eff * std::sin(state.yaw) * params.dt;
  next.yaw = wrap_angle(state.yaw + omega_eff * params.dt);

  if (clamped) {
    next.x = std::clamp(next.x, map.origin_x, map.origin_x + map.extent_x());
    next.y = std::clamp(next.y, map.origin_y, map.origin_y + map.extent_y());
  } else if (!map.in_extent(next.x, next.y)) {
    throw BoundsError("vehicle left map extent at x=" + std::to_string(next.x) +
                      " y=" + std::to_string(next.y));
  }
  const SettleResult s = clamped ? settle_pose_clamped(map, next.x, next.y, next.yaw, geom)
                                 : settle_pose(map, next.x, next.y, next.yaw, geom);
  next.z = s.z;
  next.roll = s.roll;
  next.pitch = s.pitch;
  return next;
}

}  // namespace detail

VehicleState nominal_step(const VehicleState& state, const Command& cmd, const ElevationMap& map,
                          const VehicleGeometry& geom, const SimParams& params) {
  return detail::step_core(state, cmd, map, geom, params, 0.0, 0.0, false);
}

RolloutResult predict_rollout(const VehicleState& start, std::span<const Command> commands,
                              const ElevationMap& map, const VehicleGeometry& geom,
                              const SimParams& params) {
  RolloutResult result;
  result.states.reserve(commands.size());
  VehicleState state = start;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    try {
      state = nominal_step(state, commands[i], map, geom, params);
    } catch (const BoundsError&) {
      result.exited = true;
      result.exit_index = static_cast<int>(i);
      return result;
    }
    result.states.push_back(state);
  }
  return result;
}

}  // namespace tnav
