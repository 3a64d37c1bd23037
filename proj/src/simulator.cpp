#include "tnav/simulator.hpp"

#include <cmath>

namespace tnav {

double footprint_height_variance(const ElevationMap& map, double x, double y, double yaw,
                                 const VehicleGeometry& geom) {
  constexpr int kSamples = 6;
  const double cos_y = std::cos(yaw);
  const double sin_y = std::sin(yaw);
  const double hx = geom.wheelbase / 2.0;
  const double hy = geom.track / 2.0;

  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double fx = -hx + (2.0 * hx) * i / (kSamples - 1);
    for (int j = 0; j < kSamples; ++j) {
      const double fy = -hy + (2.0 * hy) * j / (kSamples - 1);
      const double px = x + cos_y * fx - sin_y * fy;
      const double py = y + sin_y * fx + cos_y * fy;
      const double h = height_at_clamped(map, px, py);
      sum += h;
      sum_sq += h * h;
    }
  }
  const double n = static_cast<double>(kSamples * kSamples);
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  return var > 0.0 ? var : 0.0;
}

VehicleState simulate_step(const VehicleState& state, const Command& cmd, const ElevationMap& map,
                           const VehicleGeometry& geom, const SimParams& params, Rng& rng) {
  const double sigma =
      params.roughness_gain * footprint_height_variance(map, state.x, state.y, state.yaw, geom);
  const double noise_v = draw_gaussian(rng, 0.0, sigma);
  const double noise_omega = draw_gaussian(rng, 0.0, sigma);
  return detail::step_core(state, cmd, map, geom, params, noise_v, noise_omega, true);
}

}  // namespace tnav
