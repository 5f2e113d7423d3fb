#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "locfield/errors.hpp"
#include "locfield/propagation.hpp"
#include "locfield/transforms.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace locfield;
using testing_support::max_abs_diff;
using testing_support::random_field;

namespace {
const UnitSystem kUnits = make_units(1.0, 2.0, 0.5, 0.5, 1.0);
}

TEST(FreeEvolution, ZeroTimeIsIdentity) {
  std::mt19937_64 rng(61);
  const Grid g = make_grid(64, 0.5);
  const AmplitudeField f = random_field(g, rng);
  EXPECT_EQ(max_abs_difference(evolve_free(f, 0.0, kUnits), f), 0.0);
}

TEST(FreeEvolution, DeltaMovesWholeCells) {
  const Grid g = make_grid(256, 0.3);
  for (Direction s : kDirections) {
    for (long m : {1L, 7L, 40L, -13L}) {
      const PlacedPacket p = band_flat_packet(g, s, kH, 3 * g.dx(), 1.0);
      const auto moved = to_position(evolve_free(p.field, m * g.dx() / kUnits.c, kUnits),
                                     KernelSpec::flat());
      const auto chan = moved.channel(s, kH);
      const std::size_t target = g.nearest_x_index(p.center + sign_of(s) * m * g.dx());
      EXPECT_NEAR(std::abs(chan[target]), 1.0 / std::sqrt(g.dx()), 1e-12);
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (j != target) EXPECT_LT(std::abs(chan[j]), 1e-12);
      }
    }
  }
}

TEST(FreeEvolution, GaussianMatchesAnalyticTranslation) {
  const Grid g = make_grid(1024, 0.1);
  const double sigma = 20 * g.dx();
  const Complex amp{0.8, -0.6};
  for (Direction s : kDirections) {
    const double k0 = sign_of(s) * 3.0;
    const auto alpha = gaussian_packet(g, s, kV, -4.0, sigma, k0, amp);
    for (double t : {0.0, 0.37, 5.0, g.length() / (2 * kUnits.c), 123.4}) {
      const auto pos = to_position(evolve_free(alpha, t, kUnits), KernelSpec::flat());
      const auto expect = oracle::gaussian_translation_oracle(g.size(), g.dx(), sign_of(s), -4.0,
                                                              sigma, k0, amp, t, kUnits.c);
      EXPECT_LT(max_abs_diff(pos.channel(s, kV), expect), 1e-10) << "t=" << t;
    }
  }
}

TEST(ShiftPosition, MatchesSpectralPath) {
  std::mt19937_64 rng(67);
  const Grid g = make_grid(128, 0.25);
  const AmplitudeField alpha = random_field(g, rng);
  const AmplitudeField pos = to_position(alpha, KernelSpec::flat());
  EXPECT_EQ(max_abs_difference(shift_position(pos, 0), pos), 0.0);
  for (long cells : {1L, 5L, 77L, -9L}) {
    const auto fast = shift_position(pos, cells);
    const auto slow = to_position(evolve_free(alpha, cells * g.dx() / kUnits.c, kUnits),
                                  KernelSpec::flat());
    EXPECT_LT(max_abs_difference(fast, slow), 1e-12);
  }
  // One direction only: data rotated by s * cells.
  const auto right = shift_position(pos, 5, Direction::Right);
  for (std::size_t j = 0; j < g.size(); ++j) {
    EXPECT_EQ(right.channel(Direction::Right, kH)[(j + 5) % g.size()],
              pos.channel(Direction::Right, kH)[j]);
    EXPECT_EQ(right.channel(Direction::Left, kH)[j], pos.channel(Direction::Left, kH)[j]);
  }
  EXPECT_THROW(shift_position(alpha, 1), RepresentationMismatch);
  EXPECT_THROW(shift_position(to_position(alpha, KernelSpec::sqrt_abs_k()), 1),
               RepresentationMismatch);
}

TEST(FreeEvolution, UnitaryComposableReversible) {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> time(-10.0, 10.0);
  const Grid g = make_grid(256, 0.2);
  for (int trial = 0; trial < 20; ++trial) {
    const AmplitudeField f = random_field(g, rng);
    const double t1 = time(rng), t2 = time(rng);
    const auto once = evolve_free(f, t1, kUnits);
    EXPECT_NEAR(once.norm_squared(), f.norm_squared(), 1e-13 * f.norm_squared());
    const auto twice = evolve_free(once, t2, kUnits);
    EXPECT_LT(max_abs_difference(twice, evolve_free(f, t1 + t2, kUnits)), 1e-12);
    EXPECT_LT(max_abs_difference(evolve_free(once, -t1, kUnits), f), 1e-12);
  }
}

TEST(FreeEvolution, PropagatorReuse) {
  std::mt19937_64 rng(73);
  const Grid g = make_grid(64, 0.5);
  const AmplitudeField f = random_field(g, rng);
  const FreePropagator step(g, 0.1, kUnits);
  AmplitudeField stepped = f;
  for (int i = 0; i < 10; ++i) step.apply(stepped);
  EXPECT_LT(max_abs_difference(stepped, evolve_free(f, 1.0, kUnits)), 1e-13);
  AmplitudeField pos = to_position(f, KernelSpec::flat());
  EXPECT_THROW(step.apply(pos), RepresentationMismatch);
}

TEST(DynamicalSpectrum, SignedLinearDispersion) {
  const Grid g = make_grid(16, 0.5);
  const auto e = dynamical_spectrum(g, kUnits);
  for (std::size_t m = 0; m < g.size(); ++m) {
    EXPECT_DOUBLE_EQ(e[m], kUnits.hbar * kUnits.c * g.k(m));
  }
  EXPECT_LT(e.front(), 0.0);
  EXPECT_GT(e.back(), 0.0);
}
