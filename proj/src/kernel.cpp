#include "locfield/kernel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "locfield/errors.hpp"

namespace locfield {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double checked_phase(double phase) {
  if (!std::isfinite(phase) || phase < 0.0 || phase >= kTwoPi) {
    throw InvalidArgument("kernel phase must lie in [0, 2 pi)");
  }
  return phase;
}

}  // namespace

KernelSpec KernelSpec::flat(double phase) { return {KernelKind::Flat, checked_phase(phase)}; }

KernelSpec KernelSpec::sqrt_abs_k(double phase) {
  return {KernelKind::SqrtAbsK, checked_phase(phase)};
}

KernelSpec KernelSpec::standard_positive_only() {
  return {KernelKind::StandardPositiveOnly, std::numbers::pi / 2.0};
}

Complex KernelSpec::value(double k) const {
  switch (kind) {
    case KernelKind::Flat:
      return std::polar(1.0 / std::sqrt(kTwoPi), sgn(k) * phase);
    case KernelKind::SqrtAbsK:
      return std::polar(std::sqrt(std::abs(k) / kTwoPi), sgn(k) * phase);
    case KernelKind::StandardPositiveOnly:
      if (k <= 0.0) return {0.0, 0.0};
      return {0.0, std::sqrt(k / kTwoPi)};
  }
  return {0.0, 0.0};
}

Complex KernelSpec::inverse_value(double k) const {
  if (!invertible()) {
    throw NonInvertibleKernel(
        "the positive-only kernel vanishes for k < 0; no position -> momentum inverse exists");
  }
  const Complex f = value(k);
  // k = 0 is a null mode of the sqrt kernel; define its inverse coefficient as zero.
  if (f == Complex{0.0, 0.0}) return {0.0, 0.0};
  return 1.0 / f;
}

std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::Flat:
      return "flat";
    case KernelKind::SqrtAbsK:
      return "sqrt_abs_k";
    case KernelKind::StandardPositiveOnly:
      return "standard_positive_only";
  }
  return "unknown";
}

KernelKind parse_kernel_kind(std::string_view name) {
  if (name == "flat") return KernelKind::Flat;
  if (name == "sqrt_abs_k") return KernelKind::SqrtAbsK;
  if (name == "standard_positive_only") return KernelKind::StandardPositiveOnly;
  throw InvalidArgument("unknown kernel '" + std::string(name) + "'");
}

}  // namespace locfield
