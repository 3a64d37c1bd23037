#include "tnav/settle.hpp"

#include <array>
#include <cmath>

#include "tnav/error.hpp"
#include "tnav/geometry.hpp"

namespace tnav {

namespace {

SettleResult settle_impl(const ElevationMap& map, double x, double y, double yaw,
                         const VehicleGeometry& geom, bool clamped) {
  const double cos_y = std::cos(yaw);
  const double sin_y = std::sin(yaw);

  std::array<double, 4> wx, wy, wh;
  for (int i = 0; i < 4; ++i) {
    const Vec2& o = geom.wheels[i];
    wx[i] = x + cos_y * o.x - sin_y * o.y;
    wy[i] = y + sin_y * o.x + cos_y * o.y;
    wh[i] = clamped ? height_at_clamped(map, wx[i], wy[i]) : height_at(map, wx[i], wy[i]);
  }

  // Least-squares plane z = a*xc + b*yc + mean through the centered points.
  double mx = 0.0, my = 0.0, mh = 0.0;
  for (int i = 0; i < 4; ++i) {
    mx += wx[i];
    my += wy[i];
    mh += wh[i];
  }
  mx /= 4.0;
  my /= 4.0;
  mh /= 4.0;

  double sxx = 0.0, sxy = 0.0, syy = 0.0, sxh = 0.0, syh = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double dx = wx[i] - mx;
    const double dy = wy[i] - my;
    const double dh = wh[i] - mh;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
    sxh += dx * dh;
    syh += dy * dh;
  }
  const double det = sxx * syy - sxy * sxy;
  double a = 0.0, b = 0.0;
  if (std::abs(det) > 1e-12) {
    a = (syy * sxh - sxy * syh) / det;
    b = (sxx * syh - sxy * sxh) / det;
  }

  // World-plane slopes expressed in the body frame.
  const double slope_fwd = a * cos_y + b * sin_y;
  const double slope_left = -a * sin_y + b * cos_y;

  SettleResult out;
  out.pitch = std::atan(slope_fwd);
  out.roll = std::atan(slope_left);
  out.z = a * (x - mx) + b * (y - my) + mh + geom.clearance;
  return out;
}

}  // namespace

SettleResult settle_pose(const ElevationMap& map, double x, double y, double yaw,
                         const VehicleGeometry& geom) {
  return settle_impl(map, x, y, yaw, geom, false);
}

SettleResult settle_pose_clamped(const ElevationMap& map, double x, double y, double yaw,
                                 const VehicleGeometry& geom) {
  return settle_impl(map, x, y, yaw, geom, true);
}

}  // namespace tnav
