#include "tnav/vehicle.hpp"

#include "tnav/error.hpp"

namespace tnav {

VehicleGeometry VehicleGeometry::box(double wheelbase, double track, double clearance) {
  VehicleGeometry g;
  g.wheelbase = wheelbase;
  g.track = track;
  g.clearance = clearance;
  const double hx = wheelbase / 2.0;
  const double hy = track / 2.0;
  g.wheels[0] = {hx, hy};    // front-left
  g.wheels[1] = {-hx, hy};   // rear-left
  g.wheels[2] = {-hx, -hy};  // rear-right
  g.wheels[3] = {hx, -hy};   // front-right
  g.validate();
  return g;
}

void VehicleGeometry::validate() const {
  if (!(wheelbase > 0.0)) throw SpecError("vehicle wheelbase must be > 0");
  if (!(track > 0.0)) throw SpecError("vehicle track must be > 0");
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (!(wheel_distance(i, j) > 0.0)) {
        throw SpecError("vehicle wheels " + std::to_string(i + 1) + " and " +
                        std::to_string(j + 1) + " coincide");
      }
    }
  }
}

void SimParams::validate() const {
  if (!(dt > 0.0)) throw SpecError("sim dt must be > 0");
  if (slip_gain < 0.0 || roughness_gain < 0.0) throw SpecError("sim gains must be >= 0");
  if (!(actuation_tau > 0.0)) throw SpecError("sim actuation_tau must be > 0");
  if (!(stuck_slope > 0.0)) throw SpecError("sim stuck_slope must be > 0");
  if (!(rollover_threshold > 0.0)) throw SpecError("sim rollover_threshold must be > 0");
  if (!(v_max > 0.0) || !(omega_max > 0.0)) throw SpecError("sim velocity limits must be > 0");
}

}  // namespace tnav
