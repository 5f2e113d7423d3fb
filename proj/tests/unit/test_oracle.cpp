#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracle.hpp"

using oracle::Complex;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(DenseUnitaryOracle, Identity) {
  const auto u = oracle::dense_unitary_oracle(0.0);
  EXPECT_LT(std::abs(u[0][0] - 1.0), 1e-15);
  EXPECT_LT(std::abs(u[1][1] - 1.0), 1e-15);
  EXPECT_LT(std::abs(u[0][1]), 1e-15);
  EXPECT_LT(std::abs(u[1][0]), 1e-15);
}

TEST(DenseUnitaryOracle, RealHalfPi) {
  const auto u = oracle::dense_unitary_oracle(kPi / 2);
  EXPECT_LT(std::abs(u[0][0]), 1e-15);
  EXPECT_LT(std::abs(u[1][1]), 1e-15);
  EXPECT_LT(std::abs(u[0][1] - Complex(0, -1)), 1e-15);
  EXPECT_LT(std::abs(u[1][0] - Complex(0, -1)), 1e-15);
}

TEST(DenseUnitaryOracle, UnitaryAndAgreesWithPade) {
  std::mt19937_64 rng(301);
  std::uniform_real_distribution<double> r(0.0, 10.0), phase(0.0, 2 * kPi);
  for (int trial = 0; trial < 1000; ++trial) {
    const Complex xi = std::polar(r(rng), phase(rng));
    const auto u = oracle::dense_unitary_oracle(xi);
    EXPECT_LT(oracle::unitarity_defect(u), 1e-14);
    const auto v = oracle::dense_unitary_pade(xi);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) EXPECT_LT(std::abs(u[a][b] - v[a][b]), 1e-12);
    }
  }
}

TEST(RotationOracle, ReadOffMatrix) {
  const auto [a0, b0] = oracle::rotation_solution_oracle(1.0, 0.0, 0.0);
  EXPECT_EQ(a0, Complex(1.0));
  EXPECT_EQ(b0, Complex(0.0));
  const auto [a1, b1] = oracle::rotation_solution_oracle(1.0, 0.0, kPi / 2);
  EXPECT_LT(std::abs(a1), 1e-16);
  EXPECT_NEAR(b1.real(), 1.0, 1e-16);
  const auto [a2, b2] = oracle::rotation_solution_oracle(1.0, 0.0, kPi / 4);
  EXPECT_NEAR(std::norm(b2), 0.5, 1e-15);
  EXPECT_NEAR(std::norm(a2), 0.5, 1e-15);
}

TEST(RotationOracle, ModulusAgreesWithUnitaryForRealAngles) {
  std::mt19937_64 rng(303);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 500; ++trial) {
    const double theta = 3 * g(rng);
    const Complex a{g(rng), g(rng)};
    const auto [ra, rb] = oracle::rotation_solution_oracle(a, 0.0, theta);
    const auto u = oracle::dense_unitary_oracle(theta);
    EXPECT_NEAR(std::norm(ra), std::norm(u[0][0] * a), 1e-12);
    EXPECT_NEAR(std::norm(rb), std::norm(u[1][0] * a), 1e-12);
  }
}

TEST(GaussianOracle, TranslatesByHalfPeriod) {
  const std::size_t n = 256;
  const double dx = 0.1, c = 2.0, length = n * dx;
  const auto at0 = oracle::gaussian_translation_oracle(n, dx, +1, -5.0, 1.0, 0.0, 1.0, 0.0, c);
  const auto half = oracle::gaussian_translation_oracle(n, dx, +1, -5.0, 1.0, 0.0, 1.0,
                                                        length / (2 * c), c);
  for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(std::abs(half[(j + n / 2) % n] - at0[j]), 0, 1e-14);
  double norm = 0.0;
  for (const Complex& v : at0) norm += std::norm(v) * dx;
  EXPECT_NEAR(norm, 1.0, 1e-12);
}

TEST(XiProfileOracle, PiecewiseLinearIntegral) {
  // Triangle of height 2 on sites 3..5 (x = -1, 0, 1 for n = 8, dx = 1): area 2.
  std::vector<double> omega(8, 0.0);
  omega[4] = 2.0;
  EXPECT_NEAR(oracle::xi_profile_oracle(omega, 1.0, -3.0, 10.0, 1.0), 2.0, 1e-15);
  EXPECT_NEAR(oracle::xi_profile_oracle(omega, 1.0, -1.0, 1.0, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(oracle::xi_profile_oracle(omega, 1.0, -1.0, 0.5, 2.0), 0.5, 1e-15);
  EXPECT_NEAR(oracle::xi_profile_oracle(omega, 1.0, 1.0, -1.0, 1.0), -1.0, 1e-15);
}

TEST(TransformOracle, RoundTrip) {
  std::mt19937_64 rng(307);
  std::normal_distribution<double> g;
  const std::size_t n = 16;
  std::vector<Complex> alpha(n), f(n, 1.0 / std::sqrt(2 * kPi));
  for (Complex& v : alpha) v = {g(rng), g(rng)};
  for (int s : {1, -1}) {
    const auto back = oracle::direct_to_momentum(oracle::direct_to_position(alpha, f, 0.3, s), f,
                                                 0.3, s);
    for (std::size_t m = 0; m < n; ++m) EXPECT_LT(std::abs(back[m] - alpha[m]), 1e-13);
  }
}
