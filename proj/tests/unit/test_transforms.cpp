#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "locfield/errors.hpp"
#include "locfield/transforms.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace locfield;
using testing_support::max_abs;
using testing_support::max_abs_diff;
using testing_support::random_field;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Complex> kernel_samples(const Grid& g, const KernelSpec& k) {
  std::vector<Complex> f(g.size());
  for (std::size_t m = 0; m < g.size(); ++m) f[m] = k.value(g.k(m));
  return f;
}

const KernelSpec kAllKernels[] = {KernelSpec::flat(), KernelSpec::flat(1.1),
                                  KernelSpec::sqrt_abs_k(), KernelSpec::sqrt_abs_k(kPi / 2),
                                  KernelSpec::standard_positive_only()};

}  // namespace

TEST(KernelSpec, Values) {
  const double r = 1.0 / std::sqrt(2 * kPi);
  EXPECT_NEAR(std::abs(KernelSpec::flat(0.3).value(2.0) - std::polar(r, 0.3)), 0, 1e-16);
  EXPECT_NEAR(std::abs(KernelSpec::flat(0.3).value(-2.0) - std::polar(r, -0.3)), 0, 1e-16);
  EXPECT_EQ(KernelSpec::flat(0.3).value(0.0), Complex(r, 0.0));
  EXPECT_EQ(KernelSpec::sqrt_abs_k(0.3).value(0.0), Complex(0.0, 0.0));
  EXPECT_NEAR(std::abs(KernelSpec::sqrt_abs_k().value(-3.0) - std::sqrt(3 / (2 * kPi))), 0, 1e-15);
  const KernelSpec pos = KernelSpec::standard_positive_only();
  EXPECT_EQ(pos.value(-1.0), Complex(0.0, 0.0));
  EXPECT_NEAR(std::abs(pos.value(2.0) - Complex(0.0, std::sqrt(2 / (2 * kPi)))), 0, 1e-15);
  EXPECT_THROW(KernelSpec::flat(-0.1), InvalidArgument);
  EXPECT_THROW(KernelSpec::sqrt_abs_k(2 * kPi), InvalidArgument);
  EXPECT_THROW((void)pos.inverse_value(1.0), NonInvertibleKernel);
  EXPECT_EQ(parse_kernel_kind("sqrt_abs_k"), KernelKind::SqrtAbsK);
  EXPECT_THROW((void)parse_kernel_kind("gaussian"), InvalidArgument);
}

TEST(Transforms, MatchDirectSumOnEveryKernelAndDirection) {
  std::mt19937_64 rng(3);
  const Grid g = make_grid(64, 0.7);
  for (const KernelSpec& kernel : kAllKernels) {
    const AmplitudeField alpha = random_field(g, rng);
    const AmplitudeField pos = to_position(alpha, kernel);
    const auto f = kernel_samples(g, kernel);
    for (std::size_t c = 0; c < kChannelCount; ++c) {
      const int s = sign_of(channel_direction(c));
      const auto expect = oracle::direct_to_position(testing_support::as_vector(alpha.channel(c)),
                                                     f, g.dx(), s);
      EXPECT_LT(max_abs_diff(pos.channel(c), expect), 1e-12 * (1 + max_abs(expect)));
      if (!kernel.invertible()) continue;
      const auto back = oracle::direct_to_momentum(expect, f, g.dx(), s);
      EXPECT_LT(max_abs_diff(to_momentum(pos).channel(c), back), 1e-11);
    }
  }
}

TEST(Transforms, FlatRoundTripIsIdentity) {
  std::mt19937_64 rng(5);
  for (std::size_t n : {4u, 10u, 256u, 1024u}) {
    const Grid g = make_grid(n, 0.3);
    for (int trial = 0; trial < 5; ++trial) {
      const AmplitudeField alpha = random_field(g, rng);
      for (double phi : {0.0, 0.5, kPi}) {
        const AmplitudeField back = to_momentum(to_position(alpha, KernelSpec::flat(phi)));
        EXPECT_LT(max_abs_difference(alpha, back), 1e-12);
      }
    }
  }
}

TEST(Transforms, PositiveOnlyHasNoInverse) {
  const Grid g = make_grid(16, 1.0);
  const AmplitudeField pos =
      to_position(AmplitudeField::momentum(g), KernelSpec::standard_positive_only());
  EXPECT_THROW((void)to_momentum(pos), NonInvertibleKernel);
}

TEST(Transforms, SqrtKernelRoundTripOffTheNullMode) {
  std::mt19937_64 rng(7);
  const Grid g = make_grid(64, 0.5);
  AmplitudeField alpha = random_field(g, rng);
  for (std::size_t c = 0; c < kChannelCount; ++c) alpha.channel(c)[g.center()] = 0.0;
  const AmplitudeField pos = to_position(alpha, KernelSpec::sqrt_abs_k(0.4));
  EXPECT_LT(max_abs_difference(alpha, to_momentum(pos)), 1e-10);
  // The k = 0 mode is annihilated and comes back as zero.
  AmplitudeField only_zero = AmplitudeField::momentum(g);
  only_zero.channel(0)[g.center()] = 1.0;
  EXPECT_EQ(max_abs(to_position(only_zero, KernelSpec::sqrt_abs_k()).data()), 0.0);
}

TEST(Transforms, UniformSpectrumIsLatticeDelta) {
  const Grid g = make_grid(128, 0.25);
  AmplitudeField alpha = AmplitudeField::momentum(g);
  for (Complex& v : alpha.channel(0)) v = 1.0;
  const AmplitudeField pos = to_position(alpha, KernelSpec::flat());
  const auto a = pos.channel(0);
  EXPECT_NEAR(std::abs(a[g.center()] - g.size() * g.dk() / std::sqrt(2 * kPi)), 0, 1e-12);
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (j != g.center()) EXPECT_LT(std::abs(a[j]), 1e-12);
  }
}

TEST(Transforms, SingleModeIsPlaneWave) {
  const Grid g = make_grid(32, 0.5);
  const std::size_t m0 = 21;
  for (Direction s : kDirections) {
    AmplitudeField alpha = AmplitudeField::momentum(g);
    alpha.channel(s, kV)[m0] = 1.0;
    const KernelSpec kernel = KernelSpec::sqrt_abs_k(0.9);
    const AmplitudeField pos = to_position(alpha, kernel);
    const auto a = pos.channel(s, kV);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const Complex expect =
          kernel.value(g.k(m0)) * g.dk() * std::exp(Complex{0, sign_of(s) * g.k(m0) * g.x(j)});
      EXPECT_LT(std::abs(a[j] - expect), 1e-14);
    }
  }
}

TEST(Transforms, FlatTransformPreservesInnerProducts) {
  std::mt19937_64 rng(9);
  const Grid g = make_grid(512, 0.1);
  for (int trial = 0; trial < 10; ++trial) {
    const AmplitudeField a = random_field(g, rng);
    const AmplitudeField b = random_field(g, rng);
    const AmplitudeField pa = to_position(a, KernelSpec::flat(0.2));
    const AmplitudeField pb = to_position(b, KernelSpec::flat(0.2));
    Complex ip_k = 0.0, ip_x = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
      ip_k += std::conj(a.data()[i]) * b.data()[i] * g.dk();
      ip_x += std::conj(pa.data()[i]) * pb.data()[i] * g.dx();
    }
    EXPECT_LT(std::abs(ip_k - ip_x), 1e-12 * std::abs(ip_k) + 1e-12);
    EXPECT_NEAR(a.norm_squared(), pa.norm_squared(), 1e-12 * a.norm_squared());
  }
}

TEST(Transforms, PhaseCovariance) {
  std::mt19937_64 rng(13);
  const Grid g = make_grid(96, 0.4);
  for (double phi : {0.3, 1.7, 4.0}) {
    const AmplitudeField alpha = random_field(g, rng);
    AmplitudeField rotated = alpha;
    for (std::size_t c = 0; c < kChannelCount; ++c) {
      auto chan = rotated.channel(c);
      for (std::size_t m = 0; m < g.size(); ++m) chan[m] *= std::polar(1.0, sgn(g.k(m)) * phi);
    }
    for (KernelKind kind : {KernelKind::Flat, KernelKind::SqrtAbsK}) {
      const KernelSpec with_phase =
          kind == KernelKind::Flat ? KernelSpec::flat(phi) : KernelSpec::sqrt_abs_k(phi);
      const KernelSpec without =
          kind == KernelKind::Flat ? KernelSpec::flat() : KernelSpec::sqrt_abs_k();
      const auto lhs = to_position(alpha, with_phase);
      const auto rhs = to_position(rotated, without);
      EXPECT_LT(max_abs_diff(lhs.data(), rhs.data()), 1e-12);
    }
  }
}

TEST(Transforms, BandFlatPacketUnderPhaseChanges) {
  const Grid g = make_grid(256, 0.2);
  const AmplitudeField alpha =
      band_flat_packet(g, Direction::Right, kH, 0.0, Complex{1.0, 0.0}).field;
  const auto base = to_position(alpha, KernelSpec::flat());
  // Global phase: |a(x)| is exactly unchanged.
  AmplitudeField turned = alpha;
  turned *= Complex{0.0, 1.0};
  const auto base_turned = to_position(turned, KernelSpec::flat());
  for (std::size_t i = 0; i < base.data().size(); ++i) {
    EXPECT_NEAR(std::abs(base.data()[i]), std::abs(base_turned.data()[i]), 1e-12);
  }
  // Kernel phase: the total weight is unchanged even though the profile is not a delta.
  for (double phi : {0.5, kPi / 2, 3.0}) {
    EXPECT_NEAR(to_position(alpha, KernelSpec::flat(phi)).norm_squared(), base.norm_squared(),
                1e-12);
  }
}

TEST(Transforms, PositiveOnlyEqualsTruncatedSqrtKernel) {
  std::mt19937_64 rng(17);
  const Grid g = make_grid(80, 0.3);
  const AmplitudeField alpha = random_field(g, rng);
  AmplitudeField truncated = alpha;
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    auto chan = truncated.channel(c);
    for (std::size_t m = 0; m < g.size(); ++m) {
      if (g.k(m) <= 0.0) chan[m] = 0.0;
    }
  }
  const auto lhs = to_position(alpha, KernelSpec::standard_positive_only());
  const auto rhs = to_position(truncated, KernelSpec::sqrt_abs_k(kPi / 2));
  EXPECT_LT(max_abs_diff(lhs.data(), rhs.data()), 1e-13);
}

TEST(Transforms, ChangeKernelRoutesThroughMomentum) {
  std::mt19937_64 rng(19);
  const Grid g = make_grid(64, 0.5);
  AmplitudeField alpha = random_field(g, rng);
  for (std::size_t c = 0; c < kChannelCount; ++c) alpha.channel(c)[g.center()] = 0.0;
  const auto flat = to_position(alpha, KernelSpec::flat());
  const auto sqrt_direct = to_position(alpha, KernelSpec::sqrt_abs_k());
  const auto sqrt_changed = change_kernel(flat, KernelSpec::sqrt_abs_k());
  EXPECT_EQ(sqrt_changed.kernel(), KernelSpec::sqrt_abs_k());
  EXPECT_LT(max_abs_diff(sqrt_direct.data(), sqrt_changed.data()), 1e-11);
}

TEST(OverlapKernel, FlatIsLatticeDelta) {
  const Grid g = make_grid(200, 0.05);
  for (Direction s : kDirections) {
    EXPECT_NEAR(std::abs(overlap_kernel(g, KernelSpec::flat(0.7), s, 0.0) - 1.0 / g.dx()), 0,
                1e-10);
    for (int m : {1, 2, 7, -3, 99}) {
      EXPECT_LT(std::abs(overlap_kernel(g, KernelSpec::flat(), s, m * g.dx())), 1e-12 / g.dx());
    }
  }
}

TEST(OverlapKernel, SqrtKernelClosedForm) {
  // (1/2 pi) int_{-K}^{K} |k| e^{i k d} dk = (K d sin K d + cos K d - 1) / (pi d^2)
  const Grid g = make_grid(8192, 1.0);
  const double kmax = g.k_max();
  const double d = 0.5;
  const double closed = (kmax * d * std::sin(kmax * d) + std::cos(kmax * d) - 1) / (kPi * d * d);
  const Complex value = overlap_kernel(g, KernelSpec::sqrt_abs_k(), Direction::Right, d);
  EXPECT_NEAR(value.real(), closed, 1e-6);
  // The half-open band leaves only the -K endpoint term in the imaginary part.
  const double endpoint = -(kmax / (2 * kPi)) * std::sin(kmax * d) * g.dk();
  EXPECT_NEAR(value.imag(), endpoint, 1e-6);
  EXPECT_NEAR(std::abs(endpoint), kmax * g.dk() / (2 * kPi), 1e-12);
}

TEST(OverlapKernel, SqrtKernelPeakDecayAndZeroSum) {
  const Grid g = make_grid(1024, 0.1);
  const KernelSpec sq = KernelSpec::sqrt_abs_k();
  const double peak = overlap_kernel(g, sq, Direction::Right, 0.0).real();
  const double flat_height = overlap_kernel(g, KernelSpec::flat(), Direction::Right, 0.0).real();
  const double mean_abs_k = g.k_max() / 2;
  EXPECT_NEAR(peak, flat_height * mean_abs_k, 1e-3 * peak);
  EXPECT_LT(std::abs(overlap_kernel(g, sq, Direction::Right, 21 * g.dx())), 1e-2 * peak);
  Complex total = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    total += overlap_kernel(g, sq, Direction::Right, g.x(j)) * g.dx();
  }
  EXPECT_LT(std::abs(total), 1e-9 * peak);
}

TEST(OverlapKernel, CommutatorIntegrandIsOnlyTheUnpairedSample) {
  const Grid g = make_grid(256, 0.2);
  for (const KernelSpec& kernel : {KernelSpec::flat(0.4), KernelSpec::sqrt_abs_k(1.3)}) {
    for (Direction s : kDirections) {
      for (double d : {0.0, 0.13, 1.0, -2.7}) {
        const double unpaired = std::norm(kernel.value(g.k(0))) *
                                std::sin(sign_of(s) * g.k(0) * d) * g.dk();
        EXPECT_NEAR(xi_commutator_kernel(g, kernel, s, d), unpaired, 1e-12);
      }
    }
  }
}
