#include "locfield/units.hpp"

#include <cmath>

#include "locfield/errors.hpp"

namespace locfield {

double UnitSystem::field_scale() const { return std::sqrt(hbar * c / (epsilon * area)); }

UnitSystem make_units(double hbar, double c, double epsilon, double mu, double area) {
  for (double v : {hbar, c, epsilon, mu, area}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InvalidArgument("unit constants must be positive and finite");
    }
  }
  const double expected_c = 1.0 / std::sqrt(epsilon * mu);
  if (std::abs(c - expected_c) > 1e-12 * expected_c) {
    throw InvalidArgument("speed of light inconsistent with 1/sqrt(epsilon mu)");
  }
  return UnitSystem{hbar, c, epsilon, mu, area};
}

UnitSystem natural_units() { return UnitSystem{}; }

}  // namespace locfield
