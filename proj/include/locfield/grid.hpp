#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace locfield {

/// Centered lattice pair:
///   x_j = (j - n/2) dx,  k_m = (m - n/2) dk,  dk = 2 pi / (n dx).
/// Both x = 0 and k = 0 sit on lattice points (index n/2). The band runs over
/// [-pi/dx, pi/dx); every continuum integral is a Riemann sum with weight dx or dk.
class Grid {
 public:
  Grid() = default;

  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] double dx() const { return dx_; }
  [[nodiscard]] double dk() const { return dk_; }
  [[nodiscard]] double length() const { return static_cast<double>(n_) * dx_; }
  [[nodiscard]] double k_max() const;
  [[nodiscard]] std::size_t center() const { return n_ / 2; }

  [[nodiscard]] double x(std::size_t j) const;
  [[nodiscard]] double k(std::size_t m) const;
  [[nodiscard]] std::vector<double> x_values() const;
  [[nodiscard]] std::vector<double> k_values() const;

  /// Nearest lattice index to position x; throws InvalidArgument outside [x_0, x_{n-1}].
  [[nodiscard]] std::size_t nearest_x_index(double x) const;
  [[nodiscard]] std::size_t nearest_k_index(double k) const;

  /// Index of -k_m. The most negative wavenumber -pi/dx has no partner in the band.
  [[nodiscard]] std::optional<std::size_t> negated_k_index(std::size_t m) const;
  /// Index of -x_j modulo the period (j = 0 maps to itself).
  [[nodiscard]] std::size_t mirrored_x_index(std::size_t j) const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  friend Grid make_grid(std::size_t n_points, double dx);
  Grid(std::size_t n, double dx);

  std::size_t n_ = 0;
  double dx_ = 0.0;
  double dk_ = 0.0;
};

/// Throws InvalidArgument for odd n, n < 4, or dx <= 0.
Grid make_grid(std::size_t n_points, double dx);

}  // namespace locfield
