#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace locfield::detail {

/// Unnormalised DFT, out_m = sum_j in_j e^{sign 2 pi i j m / n}, backed by FFTW.
/// Plans are cached per (n, sign); planning is serialised, execution is reentrant.
void dft(std::span<const std::complex<double>> in, std::span<std::complex<double>> out, int sign);

}  // namespace locfield::detail
