#include "locfield/field_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "locfield/errors.hpp"

namespace locfield {

AmplitudeField::AmplitudeField(Grid grid, Representation rep, KernelSpec kernel,
                               PolarizationBasis basis, Interpretation interpretation)
    : grid_(grid),
      rep_(rep),
      kernel_(kernel),
      basis_(basis),
      interpretation_(interpretation),
      data_(kChannelCount * grid.size()) {
  if (grid.size() == 0) throw InvalidArgument("field requires a constructed grid");
}

AmplitudeField AmplitudeField::momentum(Grid grid, PolarizationBasis basis) {
  return AmplitudeField(grid, Representation::Momentum, KernelSpec{}, basis);
}

std::span<Complex> AmplitudeField::channel(std::size_t c) {
  return std::span<Complex>(data_).subspan(c * size(), size());
}

std::span<const Complex> AmplitudeField::channel(std::size_t c) const {
  return std::span<const Complex>(data_).subspan(c * size(), size());
}

double AmplitudeField::weight() const {
  return rep_ == Representation::Momentum ? grid_.dk() : grid_.dx();
}

double AmplitudeField::norm_squared(std::size_t c) const {
  double sum = 0.0;
  for (const Complex& v : channel(c)) sum += std::norm(v);
  return sum * weight();
}

double AmplitudeField::norm_squared() const {
  double sum = 0.0;
  for (std::size_t c = 0; c < kChannelCount; ++c) sum += norm_squared(c);
  return sum;
}

bool AmplitudeField::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

AmplitudeField AmplitudeField::zeros_like() const {
  return AmplitudeField(grid_, rep_, kernel_, basis_, interpretation_);
}

void AmplitudeField::relabel(Representation rep, KernelSpec kernel) {
  rep_ = rep;
  kernel_ = kernel;
}

void AmplitudeField::require_compatible(const AmplitudeField& other) const {
  if (!(grid_ == other.grid_) || rep_ != other.rep_ || basis_ != other.basis_ ||
      (rep_ == Representation::Position && !(kernel_ == other.kernel_))) {
    throw RepresentationMismatch("fields differ in grid, representation, kernel or basis");
  }
}

AmplitudeField& AmplitudeField::operator+=(const AmplitudeField& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

AmplitudeField& AmplitudeField::operator-=(const AmplitudeField& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

AmplitudeField& AmplitudeField::operator*=(Complex factor) {
  for (Complex& v : data_) v *= factor;
  return *this;
}

AmplitudeField operator+(AmplitudeField lhs, const AmplitudeField& rhs) { return lhs += rhs; }
AmplitudeField operator-(AmplitudeField lhs, const AmplitudeField& rhs) { return lhs -= rhs; }

double max_abs_difference(const AmplitudeField& lhs, const AmplitudeField& rhs) {
  const AmplitudeField diff = lhs - rhs;
  double worst = 0.0;
  for (const Complex& v : diff.data()) worst = std::max(worst, std::abs(v));
  return worst;
}

AmplitudeField gaussian_packet(const Grid& grid, Direction s, Polarization p, double center,
                               double width, double carrier, Complex amplitude,
                               PolarizationBasis basis) {
  if (!(width >= 3.0 * grid.dx())) {
    throw PreconditionViolation("packet width must be at least 3 dx");
  }
  if (std::abs(carrier) + 4.0 / width > grid.k_max()) {
    throw PreconditionViolation("packet spectrum exceeds the band limit pi/dx");
  }
  AmplitudeField field = AmplitudeField::momentum(grid, basis);
  auto chan = field.channel(s, p);
  const double sd = sign_of(s);
  double norm = 0.0;
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const double k = grid.k(m);
    const double envelope = std::exp(-0.5 * width * width * (k - carrier) * (k - carrier));
    chan[m] = std::polar(envelope, -sd * k * center);
    norm += envelope * envelope;
  }
  norm *= grid.dk();
  const Complex scale = amplitude / std::sqrt(norm);
  for (Complex& v : chan) v *= scale;
  return field;
}

PlacedPacket band_flat_packet(const Grid& grid, Direction s, Polarization p, double center,
                              Complex amplitude, PolarizationBasis basis) {
  const std::size_t j = grid.nearest_x_index(center);
  const double placed = grid.x(j);
  PlacedPacket out{AmplitudeField::momentum(grid, basis), placed,
                   std::abs(placed - center) > 1e-9 * grid.dx()};
  auto chan = out.field.channel(s, p);
  const double sd = sign_of(s);
  const double level = 1.0 / std::sqrt(static_cast<double>(grid.size()) * grid.dk());
  for (std::size_t m = 0; m < grid.size(); ++m) {
    chan[m] = amplitude * std::polar(level, -sd * grid.k(m) * placed);
  }
  return out;
}

AmplitudeField to_circular(const AmplitudeField& field) {
  if (field.basis() == PolarizationBasis::Circular) return field;
  AmplitudeField out = field;
  out.relabel(PolarizationBasis::Circular);
  const Complex i{0.0, 1.0};
  const double r = std::numbers::sqrt2 / 2.0;
  for (Direction s : kDirections) {
    auto h = field.channel(s, kH);
    auto v = field.channel(s, kV);
    auto plus = out.channel(s, kPlus);
    auto minus = out.channel(s, kMinus);
    for (std::size_t j = 0; j < field.size(); ++j) {
      plus[j] = r * (h[j] + i * v[j]);
      minus[j] = r * (h[j] - i * v[j]);
    }
  }
  return out;
}

AmplitudeField to_linear(const AmplitudeField& field) {
  if (field.basis() == PolarizationBasis::Linear) return field;
  AmplitudeField out = field;
  out.relabel(PolarizationBasis::Linear);
  const Complex i{0.0, 1.0};
  const double r = std::numbers::sqrt2 / 2.0;
  for (Direction s : kDirections) {
    auto plus = field.channel(s, kPlus);
    auto minus = field.channel(s, kMinus);
    auto h = out.channel(s, kH);
    auto v = out.channel(s, kV);
    for (std::size_t j = 0; j < field.size(); ++j) {
      h[j] = r * (plus[j] + minus[j]);
      v[j] = -i * r * (plus[j] - minus[j]);
    }
  }
  return out;
}

}  // namespace locfield
