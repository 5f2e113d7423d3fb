#include "locfield/propagation.hpp"

#include <algorithm>

#include "locfield/errors.hpp"

namespace locfield {

FreePropagator::FreePropagator(const Grid& grid, double t, const UnitSystem& units)
    : phases_(grid.size()) {
  for (std::size_t m = 0; m < grid.size(); ++m) {
    phases_[m] = std::polar(1.0, -grid.k(m) * units.c * t);
  }
}

void FreePropagator::apply(AmplitudeField& field) const {
  if (field.representation() != Representation::Momentum) {
    throw RepresentationMismatch("free propagation acts on momentum amplitudes");
  }
  if (field.size() != phases_.size()) throw InvalidArgument("propagator grid mismatch");
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    auto chan = field.channel(c);
    for (std::size_t m = 0; m < chan.size(); ++m) chan[m] *= phases_[m];
  }
}

AmplitudeField evolve_free(const AmplitudeField& field, double t, const UnitSystem& units) {
  AmplitudeField out = field;
  if (t != 0.0) FreePropagator(field.grid(), t, units).apply(out);
  return out;
}

AmplitudeField shift_position(const AmplitudeField& field, long cells, Direction s) {
  if (field.representation() != Representation::Position ||
      field.kernel().kind != KernelKind::Flat) {
    throw RepresentationMismatch("shift_position needs a flat-kernel position field");
  }
  AmplitudeField out = field;
  const long n = static_cast<long>(field.size());
  const long shift = ((sign_of(s) * cells) % n + n) % n;
  for (Polarization p : kPolarizations) {
    auto chan = out.channel(s, p);
    std::rotate(chan.begin(), chan.begin() + (n - shift) % n, chan.end());
  }
  return out;
}

AmplitudeField shift_position(const AmplitudeField& field, long cells) {
  return shift_position(shift_position(field, cells, Direction::Right), cells, Direction::Left);
}

std::vector<double> dynamical_spectrum(const Grid& grid, const UnitSystem& units) {
  std::vector<double> out(grid.size());
  for (std::size_t m = 0; m < grid.size(); ++m) out[m] = units.hbar * units.c * grid.k(m);
  return out;
}

}  // namespace locfield
