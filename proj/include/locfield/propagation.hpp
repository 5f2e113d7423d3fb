#pragma once

#include <vector>

#include "locfield/field_state.hpp"
#include "locfield/units.hpp"

namespace locfield {

/// Exact free evolution in momentum space: alpha(k) -> e^{-i k c t} alpha(k) on
/// every channel. The s-dependence cancels, e^{i s k (x - s c t)} = e^{i s k x} e^{-i k c t};
/// negative-k modes rotate with negative frequency. Periodic (torus) boundaries.
AmplitudeField evolve_free(const AmplitudeField& field, double t, const UnitSystem& units);

/// In-place variant with precomputed phases; used by long stepping loops.
class FreePropagator {
 public:
  FreePropagator(const Grid& grid, double t, const UnitSystem& units);
  void apply(AmplitudeField& field) const;

 private:
  std::vector<Complex> phases_;
};

/// Exact whole-cell translation of a flat-kernel position field: the s-channel
/// (both polarizations) is rotated by s * cells sites. Matches evolve_free at
/// t = cells dx / c.
AmplitudeField shift_position(const AmplitudeField& field, long cells, Direction s);
/// Both directions shifted by their own s * cells.
AmplitudeField shift_position(const AmplitudeField& field, long cells);

/// Signed eigenvalues hbar c k_m of the dynamical Hamiltonian on the lattice.
std::vector<double> dynamical_spectrum(const Grid& grid, const UnitSystem& units);

}  // namespace locfield
