#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <limits>
#include <random>

#include "locfield/errors.hpp"
#include "locfield/field_state.hpp"
#include "locfield/transforms.hpp"
#include "support.hpp"

using namespace locfield;
using testing_support::max_abs_diff;
using testing_support::random_field;

namespace {
const double kRoot2 = std::numbers::sqrt2;
}

TEST(GaussianPacket, NormalisedRealSpectrumAtOrigin) {
  const Grid g = make_grid(512, 0.1);
  const AmplitudeField f = gaussian_packet(g, Direction::Right, kH, 0.0, 2.0, 0.0, 1.0);
  EXPECT_NEAR(f.norm_squared(), 1.0, 1e-12);
  const auto chan = f.channel(Direction::Right, kH);
  std::size_t peak = 0;
  for (std::size_t m = 0; m < g.size(); ++m) {
    EXPECT_EQ(chan[m].imag(), 0.0);
    EXPECT_GE(chan[m].real(), 0.0);
    if (std::abs(chan[m]) > std::abs(chan[peak])) peak = m;
  }
  EXPECT_EQ(peak, g.center());
  EXPECT_EQ(f.norm_squared(channel_index(Direction::Left, kH)), 0.0);
}

TEST(GaussianPacket, ShiftTheorem) {
  const Grid g = make_grid(256, 0.2);
  for (Direction s : kDirections) {
    const auto a = gaussian_packet(g, s, kV, 1.0, 1.5, 0.7, Complex{0.3, 0.4});
    const auto b = gaussian_packet(g, s, kV, 3.4, 1.5, 0.7, Complex{0.3, 0.4});
    for (std::size_t m = 0; m < g.size(); ++m) {
      const Complex expect = a.channel(s, kV)[m] * std::polar(1.0, -sign_of(s) * g.k(m) * 2.4);
      EXPECT_LT(std::abs(b.channel(s, kV)[m] - expect), 1e-13);
    }
  }
}

TEST(GaussianPacket, PositionPeakNearCentre) {
  std::mt19937_64 rng(23);
  const Grid g = make_grid(1024, 0.1);
  std::uniform_real_distribution<double> where(-30.0, 30.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double centre = where(rng);
    for (Direction s : kDirections) {
      const auto pos = to_position(gaussian_packet(g, s, kH, centre, 1.0, 1.0, 1.0),
                                   KernelSpec::flat());
      const auto chan = pos.channel(s, kH);
      std::size_t peak = 0;
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (std::abs(chan[j]) > std::abs(chan[peak])) peak = j;
      }
      EXPECT_LE(std::abs(g.x(peak) - centre), g.dx() / 2 + 1e-12);
    }
  }
}

TEST(GaussianPacket, Preconditions) {
  const Grid g = make_grid(128, 0.5);
  EXPECT_THROW(gaussian_packet(g, Direction::Right, kH, 0, 1.0, 0, 1.0), PreconditionViolation);
  EXPECT_THROW(gaussian_packet(g, Direction::Right, kH, 0, 2.0, 5.5, 1.0), PreconditionViolation);
  EXPECT_NO_THROW(gaussian_packet(g, Direction::Right, kH, 0, 2.0, 1.0, 1.0));
}

TEST(BandFlatPacket, FlatPositionIsLatticeDelta) {
  const Grid g = make_grid(128, 0.25);
  for (double centre : {0.0, 0.75, -4.0}) {
    const PlacedPacket p = band_flat_packet(g, Direction::Left, kV, centre, Complex{0.0, 2.0});
    EXPECT_FALSE(p.snapped);
    EXPECT_NEAR(p.field.norm_squared(), 4.0, 1e-12);
    const AmplitudeField pos = to_position(p.field, KernelSpec::flat());
    const auto a = pos.channel(Direction::Left, kV);
    const std::size_t at = g.nearest_x_index(centre);
    EXPECT_NEAR(std::abs(a[at]) * std::abs(a[at]) * g.dx(), 4.0, 1e-12);
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (j != at) EXPECT_LT(std::abs(a[j]), 1e-12);
    }
  }
}

TEST(BandFlatPacket, GlobalPhaseKeepsDelta) {
  const Grid g = make_grid(64, 1.0);
  PlacedPacket p = band_flat_packet(g, Direction::Right, kH, 0.0, 1.0);
  p.field *= Complex{0.0, 1.0};
  const AmplitudeField pos = to_position(p.field, KernelSpec::flat());
  const auto a = pos.channel(Direction::Right, kH);
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (j != g.center()) EXPECT_LT(std::abs(a[j]), 1e-12);
  }
  EXPECT_NEAR(std::abs(a[g.center()]), 1.0, 1e-12);
}

TEST(BandFlatPacket, OffLatticeCentreSnaps) {
  const Grid g = make_grid(64, 1.0);
  const PlacedPacket p = band_flat_packet(g, Direction::Right, kH, 2.3, 1.0);
  EXPECT_TRUE(p.snapped);
  EXPECT_EQ(p.center, 2.0);
}

TEST(PolarizationBasis, ReadOffDefinitions) {
  const Grid g = make_grid(4, 1.0);
  AmplitudeField h = AmplitudeField::momentum(g);
  h.channel(Direction::Right, kH)[1] = 1.0;
  const AmplitudeField hc = to_circular(h);
  EXPECT_EQ(hc.basis(), PolarizationBasis::Circular);
  EXPECT_NEAR(std::abs(hc.channel(Direction::Right, kPlus)[1] - 1.0 / kRoot2), 0, 4e-16);
  EXPECT_NEAR(std::abs(hc.channel(Direction::Right, kMinus)[1] - 1.0 / kRoot2), 0, 4e-16);

  AmplitudeField v = AmplitudeField::momentum(g);
  v.channel(Direction::Left, kV)[2] = 1.0;
  const AmplitudeField vc = to_circular(v);
  EXPECT_NEAR(std::abs(vc.channel(Direction::Left, kPlus)[2] - Complex(0, 1 / kRoot2)), 0, 4e-16);
  EXPECT_NEAR(std::abs(vc.channel(Direction::Left, kMinus)[2] - Complex(0, -1 / kRoot2)), 0,
              4e-16);
}

TEST(PolarizationBasis, RoundTripNormAndIdempotence) {
  std::mt19937_64 rng(29);
  const Grid g = make_grid(128, 0.3);
  for (int trial = 0; trial < 20; ++trial) {
    const AmplitudeField f = random_field(g, rng);
    const AmplitudeField c = to_circular(f);
    EXPECT_LT(max_abs_difference(to_linear(c), f), 1e-15 * 8);
    EXPECT_NEAR(c.norm_squared(), f.norm_squared(), 1e-12 * f.norm_squared());
    EXPECT_EQ(max_abs_difference(to_circular(c), c), 0.0);
    EXPECT_EQ(max_abs_difference(to_linear(f), f), 0.0);
  }
}

TEST(PolarizationBasis, CommutesWithRepresentationChange) {
  std::mt19937_64 rng(31);
  const Grid g = make_grid(64, 0.5);
  for (const KernelSpec& kernel : {KernelSpec::flat(0.4), KernelSpec::sqrt_abs_k(2.0)}) {
    const AmplitudeField f = random_field(g, rng);
    const auto a = to_position(to_circular(f), kernel);
    const auto b = to_circular(to_position(f, kernel));
    EXPECT_LT(max_abs_diff(a.data(), b.data()), 1e-12);
    EXPECT_EQ(a.basis(), b.basis());
  }
}

TEST(AmplitudeField, ArithmeticAndTags) {
  std::mt19937_64 rng(37);
  const Grid g = make_grid(16, 1.0);
  const AmplitudeField a = random_field(g, rng);
  const AmplitudeField b = random_field(g, rng);
  const AmplitudeField sum = a + b;
  EXPECT_LT(max_abs_difference(sum - b, a), 1e-15);
  EXPECT_TRUE(sum.all_finite());
  EXPECT_EQ(a.zeros_like().norm_squared(), 0.0);

  const AmplitudeField pos = to_position(a, KernelSpec::flat());
  EXPECT_THROW((void)(a + pos), RepresentationMismatch);
  EXPECT_THROW((void)(a + to_circular(b)), RepresentationMismatch);
  EXPECT_THROW((void)(a + AmplitudeField::momentum(make_grid(16, 2.0))), RepresentationMismatch);
  EXPECT_DOUBLE_EQ(a.weight(), g.dk());
  EXPECT_DOUBLE_EQ(pos.weight(), g.dx());

  AmplitudeField bad = a;
  bad.data()[3] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_FALSE(bad.all_finite());
}
