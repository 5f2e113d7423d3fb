#pragma once

#include "locfield/field_state.hpp"
#include "locfield/kernel.hpp"

namespace locfield {

/// Generalised Fourier transform, per channel (s, lambda):
///   a_s(x_j) = sum_m f(k_m) e^{i s k_m x_j} alpha_s(k_m) dk.
/// The direction index s enters the exponent, so s = -1 channels use the
/// conjugate DFT direction.
AmplitudeField to_position(const AmplitudeField& field, const KernelSpec& kernel);

/// Inverse of to_position using the kernel recorded on the field:
///   alpha_s(k_m) = (1 / 2 pi) sum_j f(k_m)^{-1} e^{-i s k_m x_j} a_s(x_j) dx.
/// The k = 0 mode of the sqrt kernel is a null mode and comes back as zero.
/// Throws NonInvertibleKernel for the positive-only kernel.
AmplitudeField to_momentum(const AmplitudeField& field);

/// Position field re-expressed with another kernel (through momentum space).
AmplitudeField change_kernel(const AmplitudeField& position_field, const KernelSpec& kernel);

/// Band-limited commutator / overlap kernel
///   sum_m |f(k_m)|^2 e^{i s k_m separation} dk.
/// Flat: lattice delta of height 1/dx. SqrtAbsK: (1/2 pi) int |k| e^{i s k d} dk.
Complex overlap_kernel(const Grid& grid, const KernelSpec& kernel, Direction s, double separation);

/// Integrand of the xi-xi commutator, sum_m |f(k_m)|^2 sin(s k_m separation) dk.
/// Vanishes identically for kernels with |f(k)| = |f(-k)|, up to the unpaired
/// Nyquist sample.
double xi_commutator_kernel(const Grid& grid, const KernelSpec& kernel, Direction s,
                            double separation);

}  // namespace locfield
