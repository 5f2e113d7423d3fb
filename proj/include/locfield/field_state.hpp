#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "locfield/grid.hpp"
#include "locfield/kernel.hpp"

namespace locfield {

enum class Representation { Momentum, Position };
enum class PolarizationBasis { Linear, Circular };

/// How the amplitudes are read. Every evolution is linear in mode operators, so
/// the same numbers describe either coherent amplitudes <a> or a one-photon
/// wavefunction; only observable reporting depends on this tag.
enum class Interpretation { CoherentAmplitude, SingleExcitation };

/// Direction of motion s = +1 (right-moving) or s = -1 (left-moving).
enum class Direction : int { Right = +1, Left = -1 };

[[nodiscard]] constexpr int sign_of(Direction s) { return static_cast<int>(s); }
[[nodiscard]] constexpr Direction opposite(Direction s) {
  return s == Direction::Right ? Direction::Left : Direction::Right;
}

/// Polarization slot: H/V in the linear basis, +/- in the circular basis.
enum class Polarization : int { First = 0, Second = 1 };
inline constexpr Polarization kH = Polarization::First;
inline constexpr Polarization kV = Polarization::Second;
inline constexpr Polarization kPlus = Polarization::First;
inline constexpr Polarization kMinus = Polarization::Second;

inline constexpr std::size_t kChannelCount = 4;
inline constexpr std::array<Direction, 2> kDirections{Direction::Right, Direction::Left};
inline constexpr std::array<Polarization, 2> kPolarizations{Polarization::First,
                                                            Polarization::Second};

/// Channel order in storage: (s=+1,p0), (s=+1,p1), (s=-1,p0), (s=-1,p1).
[[nodiscard]] constexpr std::size_t channel_index(Direction s, Polarization p) {
  return (s == Direction::Right ? 0u : 2u) + static_cast<std::size_t>(p);
}
[[nodiscard]] constexpr Direction channel_direction(std::size_t channel) {
  return channel < 2 ? Direction::Right : Direction::Left;
}
[[nodiscard]] constexpr Polarization channel_polarization(std::size_t channel) {
  return static_cast<Polarization>(channel % 2);
}

/// Complex amplitudes for the four (s, lambda) channels on one grid, either as
/// momentum amplitudes alpha(k) (kernel-agnostic) or as position amplitudes a(x)
/// produced by a specific kernel.
class AmplitudeField {
 public:
  AmplitudeField() = default;
  AmplitudeField(Grid grid, Representation rep, KernelSpec kernel = {},
                 PolarizationBasis basis = PolarizationBasis::Linear,
                 Interpretation interpretation = Interpretation::CoherentAmplitude);

  static AmplitudeField momentum(Grid grid, PolarizationBasis basis = PolarizationBasis::Linear);

  [[nodiscard]] const Grid& grid() const { return grid_; }
  [[nodiscard]] std::size_t size() const { return grid_.size(); }
  [[nodiscard]] Representation representation() const { return rep_; }
  /// Kernel that produced a position representation. Meaningless for momentum fields.
  [[nodiscard]] const KernelSpec& kernel() const { return kernel_; }
  [[nodiscard]] PolarizationBasis basis() const { return basis_; }
  [[nodiscard]] Interpretation interpretation() const { return interpretation_; }
  void set_interpretation(Interpretation i) { interpretation_ = i; }

  [[nodiscard]] std::span<Complex> channel(std::size_t c);
  [[nodiscard]] std::span<const Complex> channel(std::size_t c) const;
  [[nodiscard]] std::span<Complex> channel(Direction s, Polarization p) {
    return channel(channel_index(s, p));
  }
  [[nodiscard]] std::span<const Complex> channel(Direction s, Polarization p) const {
    return channel(channel_index(s, p));
  }

  [[nodiscard]] std::span<Complex> data() { return data_; }
  [[nodiscard]] std::span<const Complex> data() const { return data_; }

  /// Riemann weight of this representation: dk for momentum, dx for position.
  [[nodiscard]] double weight() const;
  /// sum |.|^2 weight over all channels.
  [[nodiscard]] double norm_squared() const;
  [[nodiscard]] double norm_squared(std::size_t channel) const;
  [[nodiscard]] bool all_finite() const;

  /// Same grid/representation/kernel/basis, all amplitudes zero.
  [[nodiscard]] AmplitudeField zeros_like() const;

  AmplitudeField& operator+=(const AmplitudeField& other);
  AmplitudeField& operator-=(const AmplitudeField& other);
  AmplitudeField& operator*=(Complex factor);

  /// Tag-only relabelling used by transforms; data untouched.
  void relabel(Representation rep, KernelSpec kernel);
  void relabel(PolarizationBasis basis) { basis_ = basis; }

 private:
  void require_compatible(const AmplitudeField& other) const;

  Grid grid_;
  Representation rep_ = Representation::Momentum;
  KernelSpec kernel_;
  PolarizationBasis basis_ = PolarizationBasis::Linear;
  Interpretation interpretation_ = Interpretation::CoherentAmplitude;
  std::vector<Complex> data_;
};

AmplitudeField operator+(AmplitudeField lhs, const AmplitudeField& rhs);
AmplitudeField operator-(AmplitudeField lhs, const AmplitudeField& rhs);

/// Max over all entries of |lhs - rhs|. Fields must share grid and tags.
double max_abs_difference(const AmplitudeField& lhs, const AmplitudeField& rhs);

/// Gaussian spectrum on one channel:
///   alpha(k) ~ exp(-width^2 (k - carrier)^2 / 2) exp(-i s k center),
/// renormalised on the lattice so that sum |alpha|^2 dk = |amplitude|^2.
/// Requires width >= 3 dx and |carrier| + 4/width <= k_max.
AmplitudeField gaussian_packet(const Grid& grid, Direction s, Polarization p, double center,
                               double width, double carrier, Complex amplitude,
                               PolarizationBasis basis = PolarizationBasis::Linear);

struct PlacedPacket {
  AmplitudeField field;
  double center = 0.0;   ///< lattice position actually used
  bool snapped = false;  ///< requested center was off-lattice and moved to the nearest site
};

/// Constant-modulus spectrum over the full +/-k band. Its flat-kernel (phi = 0)
/// position representation is a single-site excitation at `center`.
/// Normalised so that sum |alpha|^2 dk = |amplitude|^2.
PlacedPacket band_flat_packet(const Grid& grid, Direction s, Polarization p, double center,
                              Complex amplitude,
                              PolarizationBasis basis = PolarizationBasis::Linear);

/// A_{s,+/-} = (A_{sH} +/- i A_{sV}) / sqrt(2). No-op if already circular.
AmplitudeField to_circular(const AmplitudeField& field);
/// Inverse of to_circular. No-op if already linear.
AmplitudeField to_linear(const AmplitudeField& field);

}  // namespace locfield
