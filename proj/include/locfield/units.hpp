#pragma once

namespace locfield {

/// Physical constants carried through every prefactor. Natural units set all
/// of them to one; any other choice must satisfy c = 1/sqrt(epsilon mu).
struct UnitSystem {
  double hbar = 1.0;
  double c = 1.0;
  double epsilon = 1.0;
  double mu = 1.0;
  double area = 1.0;  ///< transverse area A occupied by the field

  /// sqrt(hbar c / (epsilon A)), the common E-field prefactor.
  [[nodiscard]] double field_scale() const;
};

/// Validating constructor; throws InvalidArgument on non-positive entries or
/// when c deviates from 1/sqrt(epsilon mu) by more than 1e-12 relative.
UnitSystem make_units(double hbar, double c, double epsilon, double mu, double area);

UnitSystem natural_units();

}  // namespace locfield
