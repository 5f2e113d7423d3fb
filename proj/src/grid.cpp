#include "locfield/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "locfield/errors.hpp"

namespace locfield {

Grid::Grid(std::size_t n, double dx)
    : n_(n), dx_(dx), dk_(2.0 * std::numbers::pi / (static_cast<double>(n) * dx)) {}

Grid make_grid(std::size_t n_points, double dx) {
  if (n_points < 4 || n_points % 2 != 0) {
    throw InvalidArgument("grid size must be even and >= 4, got " + std::to_string(n_points));
  }
  if (!(dx > 0.0) || !std::isfinite(dx)) {
    throw InvalidArgument("grid spacing must be positive and finite");
  }
  return Grid(n_points, dx);
}

double Grid::k_max() const { return std::numbers::pi / dx_; }

double Grid::x(std::size_t j) const {
  return (static_cast<double>(j) - static_cast<double>(n_ / 2)) * dx_;
}

double Grid::k(std::size_t m) const {
  return (static_cast<double>(m) - static_cast<double>(n_ / 2)) * dk_;
}

std::vector<double> Grid::x_values() const {
  std::vector<double> out(n_);
  for (std::size_t j = 0; j < n_; ++j) out[j] = x(j);
  return out;
}

std::vector<double> Grid::k_values() const {
  std::vector<double> out(n_);
  for (std::size_t m = 0; m < n_; ++m) out[m] = k(m);
  return out;
}

namespace {

std::size_t nearest_index(double value, double step, std::size_t n, const char* what) {
  const double pos = std::round(value / step) + static_cast<double>(n / 2);
  if (!std::isfinite(pos) || pos < 0.0 || pos > static_cast<double>(n - 1)) {
    throw InvalidArgument(std::string(what) + " outside the lattice");
  }
  return static_cast<std::size_t>(pos);
}

}  // namespace

std::size_t Grid::nearest_x_index(double xv) const { return nearest_index(xv, dx_, n_, "position"); }

std::size_t Grid::nearest_k_index(double kv) const {
  return nearest_index(kv, dk_, n_, "wavenumber");
}

std::optional<std::size_t> Grid::negated_k_index(std::size_t m) const {
  if (m == 0) return std::nullopt;
  return n_ - m;
}

std::size_t Grid::mirrored_x_index(std::size_t j) const { return (n_ - j) % n_; }

}  // namespace locfield
