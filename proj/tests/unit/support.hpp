#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "locfield/field_state.hpp"

namespace testing_support {

using locfield::Complex;

/// Random complex field with N(0, 1) real and imaginary parts on every entry.
inline locfield::AmplitudeField random_field(const locfield::Grid& grid, std::mt19937_64& rng,
                                             locfield::Representation rep =
                                                 locfield::Representation::Momentum,
                                             locfield::KernelSpec kernel = {}) {
  std::normal_distribution<double> g;
  locfield::AmplitudeField f(grid, rep, kernel);
  for (Complex& v : f.data()) v = {g(rng), g(rng)};
  return f;
}

inline std::vector<Complex> as_vector(std::span<const Complex> s) { return {s.begin(), s.end()}; }

inline double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

inline double max_abs(std::span<const Complex> a) {
  double worst = 0.0;
  for (const Complex& v : a) worst = std::max(worst, std::abs(v));
  return worst;
}

}  // namespace testing_support
