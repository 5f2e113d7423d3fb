#pragma once

#include <complex>
#include <string>
#include <string_view>

namespace locfield {

using Complex = std::complex<double>;

enum class KernelKind {
  Flat,                  ///< f(k) = e^{i sgn(k) phi} / sqrt(2 pi): truly local, bosonic A(x)
  SqrtAbsK,              ///< f(k) = sqrt(|k| / 2 pi) e^{i sgn(k) phi}: highly localised a(x)
  StandardPositiveOnly,  ///< SqrtAbsK with phi = pi/2 restricted to k > 0 (textbook limit)
};

/// Weight function f(k) of the position <-> momentum transform.
/// sgn(0) is taken as 0, so f(0) is real for Flat and zero for the sqrt kernels.
struct KernelSpec {
  KernelKind kind = KernelKind::Flat;
  double phase = 0.0;  ///< phi in [0, 2 pi)

  static KernelSpec flat(double phase = 0.0);
  static KernelSpec sqrt_abs_k(double phase = 0.0);
  static KernelSpec standard_positive_only();

  /// f(k).
  [[nodiscard]] Complex value(double k) const;
  /// 1/f(k), or 0 where f(k) = 0. Throws NonInvertibleKernel for StandardPositiveOnly.
  [[nodiscard]] Complex inverse_value(double k) const;
  [[nodiscard]] bool invertible() const { return kind != KernelKind::StandardPositiveOnly; }

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

[[nodiscard]] inline double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

[[nodiscard]] std::string_view to_string(KernelKind kind);
/// Accepts "flat", "sqrt_abs_k", "standard_positive_only".
[[nodiscard]] KernelKind parse_kernel_kind(std::string_view name);

}  // namespace locfield
