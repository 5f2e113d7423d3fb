#include "locfield/transforms.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "fft.hpp"
#include "locfield/errors.hpp"

namespace locfield {

namespace {

// On the centered lattice
//   k_m x_j = 2 pi m j / n - pi m - pi j + pi n / 2,
// so e^{i s k_m x_j} = e^{2 pi i s m j / n} (-1)^{m + j + n/2}.
double parity(std::size_t i) { return (i % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

AmplitudeField to_position(const AmplitudeField& field, const KernelSpec& kernel) {
  if (field.representation() != Representation::Momentum) {
    throw RepresentationMismatch("to_position expects a momentum-representation field");
  }
  const Grid& grid = field.grid();
  const std::size_t n = grid.size();
  const double global = parity(n / 2);

  std::vector<Complex> weights(n);
  for (std::size_t m = 0; m < n; ++m) {
    weights[m] = kernel.value(grid.k(m)) * grid.dk() * parity(m);
  }

  AmplitudeField out = field;
  out.relabel(Representation::Position, kernel);
  std::vector<Complex> buffer(n);
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    auto src = field.channel(c);
    auto dst = out.channel(c);
    for (std::size_t m = 0; m < n; ++m) buffer[m] = weights[m] * src[m];
    detail::dft(buffer, dst, sign_of(channel_direction(c)));
    for (std::size_t j = 0; j < n; ++j) dst[j] *= global * parity(j);
  }
  return out;
}

AmplitudeField to_momentum(const AmplitudeField& field) {
  if (field.representation() != Representation::Position) {
    throw RepresentationMismatch("to_momentum expects a position-representation field");
  }
  const KernelSpec& kernel = field.kernel();
  const Grid& grid = field.grid();
  const std::size_t n = grid.size();
  const double global = parity(n / 2);

  std::vector<Complex> weights(n);
  const double scale = grid.dx() / (2.0 * std::numbers::pi);
  for (std::size_t m = 0; m < n; ++m) {
    weights[m] = kernel.inverse_value(grid.k(m)) * scale * parity(m);
  }

  AmplitudeField out = field;
  out.relabel(Representation::Momentum, KernelSpec{});
  std::vector<Complex> buffer(n);
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    auto src = field.channel(c);
    auto dst = out.channel(c);
    for (std::size_t j = 0; j < n; ++j) buffer[j] = src[j] * (global * parity(j));
    detail::dft(buffer, dst, -sign_of(channel_direction(c)));
    for (std::size_t m = 0; m < n; ++m) dst[m] *= weights[m];
  }
  return out;
}

AmplitudeField change_kernel(const AmplitudeField& position_field, const KernelSpec& kernel) {
  if (position_field.representation() == Representation::Position &&
      position_field.kernel() == kernel) {
    return position_field;
  }
  return to_position(to_momentum(position_field), kernel);
}

Complex overlap_kernel(const Grid& grid, const KernelSpec& kernel, Direction s,
                       double separation) {
  const double sd = sign_of(s);
  Complex sum{0.0, 0.0};
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const double k = grid.k(m);
    sum += std::norm(kernel.value(k)) * std::polar(1.0, sd * k * separation);
  }
  return sum * grid.dk();
}

double xi_commutator_kernel(const Grid& grid, const KernelSpec& kernel, Direction s,
                            double separation) {
  const double sd = sign_of(s);
  double sum = 0.0;
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const double k = grid.k(m);
    sum += std::norm(kernel.value(k)) * std::sin(sd * k * separation);
  }
  return sum * grid.dk();
}

}  // namespace locfield
