#include "thirsty/water.hpp"

#include "thirsty/errors.hpp"

#include <cmath>
#include <string>

namespace thirsty {

WaterVolume WaterVolume::from_liters(double liters) {
  if (!std::isfinite(liters) || liters < 0.0)
    throw ValidationError("water volume must be finite and >= 0 L, got " +
                          std::to_string(liters));
  WaterVolume v;
  v.liters_ = liters;
  return v;
}

WaterVolume WaterVolume::operator+(WaterVolume rhs) const {
  return from_liters(liters_ + rhs.liters_);
}

WaterVolume& WaterVolume::operator+=(WaterVolume rhs) {
  *this = *this + rhs;
  return *this;
}

WaterVolume WaterVolume::operator*(double k) const {
  if (!std::isfinite(k) || k < 0.0)
    throw ValidationError("water volume scale factor must be finite and >= 0, got " +
                          std::to_string(k));
  return from_liters(liters_ * k);
}

} // namespace thirsty
