#include "tnav/channels.hpp"

#include <cmath>

#include "tnav/error.hpp"

namespace tnav {

bool channel_is_mu(int c) {
  return c == 2 || c == 3 || (c >= 6 && c <= 9);
}

std::array<double, kNumChannels> CombineWeights::flat() const {
  std::array<double, kNumChannels> w;
  w[0] = w1[0];
  w[1] = w1[1];
  for (int i = 0; i < 4; ++i) w[2 + i] = w2[i];
  for (int i = 0; i < 8; ++i) w[6 + i] = w3[i];
  return w;
}

CombineWeights CombineWeights::from_flat(const std::array<double, kNumChannels>& w) {
  CombineWeights out;
  out.w1 = {w[0], w[1]};
  for (int i = 0; i < 4; ++i) out.w2[i] = w[2 + i];
  for (int i = 0; i < 8; ++i) out.w3[i] = w[6 + i];
  out.validate();
  return out;
}

void CombineWeights::validate() const {
  bool any = false;
  for (const double w : flat()) {
    if (w < 0.0 || !std::isfinite(w)) throw SpecError("combine weights must be finite and >= 0");
    if (w > 0.0) any = true;
  }
  if (!any) throw SpecError("at least one combine weight must be > 0");
}

double combine(const ChannelVector& ch, const CombineWeights& w) {
  const auto flat = w.flat();
  double value = 0.0;
  for (int c = 0; c < kNumChannels; ++c) {
    const double x = channel_is_mu(c) ? std::abs(ch[c]) : ch[c];
    value += flat[c] * x;
  }
  return value;
}

CombineWeights normalize_weights(const CombineWeights& w,
                                 const std::array<double, kNumChannels>& channel_sigma,
                                 double floor) {
  std::array<double, kNumChannels> flat = w.flat();
  for (int c = 0; c < kNumChannels; ++c) {
    flat[c] /= std::max(floor, channel_sigma[c]);
  }
  return CombineWeights::from_flat(flat);
}

ChannelVector patch_channels(const TerrainPatch& patch, const VehicleGeometry& geom,
                             const Regressor& vel_reg, const Regressor& pose_reg) {
  if (vel_reg.spec().k != 2 || pose_reg.spec().k != 4) {
    throw SpecError("patch_channels: velocity regressor must have k=2 and pose regressor k=4");
  }
  const RollPitchEstimate rp = roll_pitch(patch, geom);
  const GaussianPrediction vel = vel_reg.forward(patch);
  const GaussianPrediction pose = pose_reg.forward(patch);

  ChannelVector ch;
  ch[0] = rp.roll;
  ch[1] = rp.pitch;
  ch[2] = vel.mu[0];
  ch[3] = vel.mu[1];
  ch[4] = vel.sigma[0];
  ch[5] = vel.sigma[1];
  for (int i = 0; i < 4; ++i) ch[6 + i] = pose.mu[i];
  for (int i = 0; i < 4; ++i) ch[10 + i] = pose.sigma[i];
  return ch;
}

}  // namespace tnav
