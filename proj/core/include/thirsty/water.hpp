#pragma once

#include <compare>

namespace thirsty {

/// A non-negative, finite volume of water. Internally always liters;
/// gallons exist only at presentation time.
class WaterVolume {
public:
  /// Exact US-gallon definition, 3.785411784 L/gal.
  static constexpr double liters_per_gallon = 3.785411784;

  WaterVolume() = default;

  /// Throws ValidationError unless liters is finite and ≥ 0.
  static WaterVolume from_liters(double liters);

  double liters() const { return liters_; }
  double gallons() const { return liters_ / liters_per_gallon; }

  WaterVolume operator+(WaterVolume rhs) const;
  WaterVolume& operator+=(WaterVolume rhs);

  /// Scale by a non-negative finite factor (WSI weighting, share splits).
  WaterVolume operator*(double k) const;

  auto operator<=>(const WaterVolume&) const = default;

private:
  double liters_ = 0.0;
};

} // namespace thirsty
