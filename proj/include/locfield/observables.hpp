#pragma once

#include <iosfwd>
#include <vector>

#include "locfield/field_state.hpp"
#include "locfield/units.hpp"

namespace locfield {

/// Expectation values of E and B (y and z components) and the normal-ordered
/// energy density, sampled on the grid.
struct FieldProfiles {
  std::vector<double> x;
  std::vector<double> e_y, e_z, b_y, b_z;
  std::vector<double> energy_density;  ///< hbar c per unit length
};

/// E = sum_s P [xi_sH y + xi_sV z],  B = sum_s (s/c) P [-xi_sV y + xi_sH z],
/// P = sqrt(hbar c / (epsilon A)), <xi> = sqrt(2) Re a.
/// Requires a sqrt-kernel position field read as coherent amplitudes; any other
/// input throws RepresentationMismatch (convert with change_kernel first).
FieldProfiles field_profiles(const AmplitudeField& field, const UnitSystem& units);

/// Normal-ordered density hbar c sum_{s,lambda} <xi_{s lambda}>^2 = hbar c sum 2 (Re a)^2.
std::vector<double> energy_density(const AmplitudeField& field, const UnitSystem& units);

/// (A/2) [epsilon |E|^2 + |B|^2 / mu] evaluated from profiles; agrees with
/// energy_density point by point because opposite directions never cross-couple.
std::vector<double> energy_density_from_fields(const FieldProfiles& profiles,
                                               const UnitSystem& units);

/// Normal-ordered energy of a coherent momentum-space state:
///   sum_{s,lambda} sum_m dk 2 pi hbar c [ |f(k)|^2 |alpha(k)|^2 + Re f(k) f(-k) alpha(k) alpha(-k) ].
/// The anomalous second term is what makes conjugate pairs add to 4x or cancel.
/// The unpaired Nyquist mode -pi/dx contributes no anomalous term.
double energy_total(const AmplitudeField& field, const KernelSpec& kernel, const UnitSystem& units);

/// Same sum restricted to one direction of motion.
double energy_of_direction(const AmplitudeField& field, const KernelSpec& kernel,
                           const UnitSystem& units, Direction s);

struct MaxwellReport {
  double residual = 0.0;            ///< max-norm over x of the four curl-equation residuals
  double scale = 0.0;               ///< peak |E| / dx
  double band_edge_fraction = 0.0;  ///< share of sum |alpha|^2 with |k| > 0.8 k_max
  bool band_edge = false;           ///< true when the band-limit caveat applies

  [[nodiscard]] double relative() const { return scale > 0.0 ? residual / scale : 0.0; }
};

/// Checks dE/dt = (1/(epsilon mu)) curl B and dB/dt = -curl E in 1D component form.
/// Time derivatives are central differences over +/- dt_probe of exact free
/// evolution; spatial derivatives are spectral. Input is a momentum field.
MaxwellReport maxwell_residual(const AmplitudeField& field, const UnitSystem& units,
                               double dt_probe,
                               const KernelSpec& kernel = KernelSpec::sqrt_abs_k());

/// CSV with columns x,E_y,E_z,B_y,B_z,u preceded by '#' lines recording units and kernel.
void write_profiles_csv(std::ostream& out, const FieldProfiles& profiles, const UnitSystem& units,
                        const KernelSpec& kernel);

}  // namespace locfield
