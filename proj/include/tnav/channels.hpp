#pragma once

#include <array>

#include "tnav/regressor.hpp"
#include "tnav/stability.hpp"

namespace tnav {

inline constexpr int kNumChannels = 14;

// Fixed channel order:
//   0 roll, 1 pitch,
//   2 mu_dv, 3 mu_domega, 4 sigma_dv, 5 sigma_domega,
//   6 mu_dx, 7 mu_dy, 8 mu_droll, 9 mu_dpitch,
//   10 sigma_dx, 11 sigma_dy, 12 sigma_droll, 13 sigma_dpitch.
using ChannelVector = std::array<double, kNumChannels>;

// True for the slots that enter the combined value as absolute values.
bool channel_is_mu(int c);

// Combination weights grouped as in the traversability value: w1 over
// (roll, pitch), w2 over the velocity-uncertainty block, w3 over the
// pose-uncertainty block, each aligned with the channel order above.
struct CombineWeights {
  std::array<double, 2> w1 = {1.0, 1.0};
  std::array<double, 4> w2 = {0.5, 1.0, 0.5, 1.0};
  std::array<double, 8> w3 = {0.25, 0.25, 0.25, 0.25, 0.25, 0.25, 0.25, 0.25};

  std::array<double, kNumChannels> flat() const;
  static CombineWeights from_flat(const std::array<double, kNumChannels>& w);
  void validate() const;  // all >= 0, at least one > 0
};

// Weighted sum of the channels; mu slots contribute their absolute value, so
// a negative discrepancy is as costly as a positive one.
double combine(const ChannelVector& ch, const CombineWeights& w);

// Divides each weight by the matching per-channel scale (typically the
// training-set standard deviation of that channel); scales at or below
// `floor` are treated as `floor`.
CombineWeights normalize_weights(const CombineWeights& w,
                                 const std::array<double, kNumChannels>& channel_sigma,
                                 double floor = 1e-6);

// One patch through all three predictors, concatenated in channel order.
ChannelVector patch_channels(const TerrainPatch& patch, const VehicleGeometry& geom,
                             const Regressor& vel_reg, const Regressor& pose_reg);

}  // namespace tnav
