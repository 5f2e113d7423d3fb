#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "locfield/field_state.hpp"
#include "locfield/units.hpp"

namespace locfield {

/// Omega_{xx'} = Omega(x) delta(x + x'), one real sample per lattice site.
/// On the lattice delta(x + x') is (1/dx) [j' = mirror of j].
struct SeparableKernel {
  std::vector<double> omega;  ///< size n
  std::size_t begin = 0;      ///< support [begin, end) in site indices
  std::size_t end = 0;
};

/// Real coupling matrix Omega_{j j'}; only the support block is stored, all
/// other entries are exactly zero.
struct DenseKernel {
  std::size_t n = 0;
  std::size_t row_begin = 0, rows = 0;
  std::size_t col_begin = 0, cols = 0;
  std::vector<double> values;  ///< rows x cols, row-major

  /// Entry at signed site indices; zero outside the block (and outside the grid).
  [[nodiscard]] double at(long row, long col) const;
};

class MirrorKernel {
 public:
  /// Throws InvalidArgument for non-finite samples or support touching site 0
  /// (the -L/2 site has no mirror partner on the lattice).
  static MirrorKernel separable(const Grid& grid, std::vector<double> omega);
  /// Full n x n row-major matrix; the support block is extracted.
  static MirrorKernel dense(const Grid& grid, std::span<const double> matrix);
  static MirrorKernel dense_block(const Grid& grid, std::size_t row_begin, std::size_t rows,
                                  std::size_t col_begin, std::size_t cols,
                                  std::vector<double> values);

  [[nodiscard]] const Grid& grid() const { return grid_; }
  [[nodiscard]] bool is_separable() const;
  [[nodiscard]] const SeparableKernel& as_separable() const;
  [[nodiscard]] const DenseKernel& as_dense() const;

  /// Separable -> dense with the same 1/dx delta convention; dense returns itself.
  [[nodiscard]] MirrorKernel to_dense() const;

  /// Coupling rate bounding the ODE generator: max row/column sum of |Omega| dx.
  [[nodiscard]] double max_rate() const;
  /// Site range [first, last] coupled on the right-moving (row) side and on the
  /// left-moving (column) side. Both are empty (first > last) for a zero kernel.
  [[nodiscard]] std::pair<long, long> row_sites() const;
  [[nodiscard]] std::pair<long, long> col_sites() const;
  [[nodiscard]] bool is_zero() const;

 private:
  MirrorKernel(Grid grid, std::variant<SeparableKernel, DenseKernel> data);

  Grid grid_;
  std::variant<SeparableKernel, DenseKernel> data_;
};

/// Gaussian separable profile exp(-x^2 / (2 width^2)) truncated to |x| <= half_cells dx
/// and scaled so that (1/c) sum Omega dx = angle.
MirrorKernel gaussian_mirror(const Grid& grid, double width, std::size_t half_cells, double angle,
                             const UnitSystem& units);
/// Constant profile over 2 half_cells + 1 sites centred on x = 0 with total angle `angle`.
MirrorKernel box_mirror(const Grid& grid, std::size_t half_cells, double angle,
                        const UnitSystem& units);

/// Complex scattering angle per lattice wavenumber.
struct ScatteringSpectrum {
  Grid grid;
  std::vector<Complex> xi;
};

/// Xi_k = (i/c) sum_{j,j'} Omega_{jj'} e^{i k (x_j + x_j')} dx^2, all k at once by a
/// DFT over the diagonal sums x + x'. Separable kernels collapse to the
/// k-independent Xi = (i/c) sum_j Omega(x_j) dx.
ScatteringSpectrum xi_spectrum(const MirrorKernel& kernel, const UnitSystem& units);

/// Columns k, Re Xi, Im Xi, |Xi|, sin^2|Xi|, cos^2|Xi|.
void write_spectrum_csv(std::ostream& out, const ScatteringSpectrum& spectrum);

/// 2x2 matrix acting on (alpha_{+1}(k), alpha_{-1}(k)).
struct Unitary2 {
  Complex m00, m01, m10, m11;
};

/// exp(-i G) with G = [[0, conj(xi)], [xi, 0]]:
///   [[cos|xi|, -i conj(xi) sin|xi|/|xi|], [-i xi sin|xi|/|xi|, cos|xi|]].
Unitary2 scattering_unitary(Complex xi);

/// Closed-form scattering operator. For every (k, circular lambda) the pair
/// (alpha_{+1}, alpha_{-1}) at that k is multiplied by scattering_unitary(Xi_k);
/// nothing else mixes. Linear-basis input is converted and restored.
AmplitudeField apply_scattering(const AmplitudeField& field, const ScatteringSpectrum& spectrum);

enum class MirrorIntegrator {
  Auto,         ///< closed-form rotation for separable kernels, RK4 otherwise
  RungeKutta4,  ///< classical RK4 on the interaction-picture ODEs
  ClosedForm,   ///< separable kernels only
};

struct MirrorEvolveOptions {
  std::size_t steps = 0;  ///< RK4 steps; 0 selects the minimum allowed by the stability rule
  MirrorIntegrator integrator = MirrorIntegrator::Auto;
};

/// Minimum RK4 step count: max(10 rate |T|, 4 c |T| / dx), rounded up.
std::size_t minimum_mirror_steps(const MirrorKernel& kernel, const UnitSystem& units,
                                 double duration);

/// Interaction-picture evolution of flat-kernel position amplitudes between
/// t_start and t_end:
///   dA_{+1}(x)/dt  = -sum_{x'} Omega_{(x+ct)(x'-ct)} A_{-1}(x') dx
///   dA_{-1}(x')/dt = +sum_{x}  Omega_{(x+ct)(x'-ct)} A_{+1}(x) dx
/// Omega at off-lattice arguments is interpolated linearly along the characteristic
/// (both arguments move by the same c t). Sites the moving kernel never reaches are
/// left bit-for-bit untouched. Throws PreconditionViolation when RK4 steps are below
/// minimum_mirror_steps.
AmplitudeField evolve_mirror(const AmplitudeField& field, const MirrorKernel& kernel,
                             const UnitSystem& units, double t_start, double t_end,
                             const MirrorEvolveOptions& options = {});

/// Xi(x, t) = int_0^t Omega(x + c t') dt' for a separable kernel, exact for the
/// piecewise-linear interpolant (cumulative trapezoid on lattice nodes).
/// Xi(x, infinity) = (1/c) int_x^infinity Omega(u) du.
double xi_profile(const MirrorKernel& kernel, double x, double t, const UnitSystem& units);

struct EquivalenceReport {
  std::array<double, kChannelCount> channel_discrepancy{};  ///< max |A_scatter - A_ode| per channel
  double max_discrepancy = 0.0;
  double energy_in_right = 0.0, energy_in_left = 0.0;
  double scatter_right = 0.0, scatter_left = 0.0;  ///< energies after apply_scattering
  double ode_right = 0.0, ode_left = 0.0;          ///< energies after evolve_mirror
  bool separable = false;
  double tolerance = 0.0;  ///< 1e-6 for separable kernels, 0 (diagnostic only) for dense
  [[nodiscard]] bool passed() const { return !separable || max_discrepancy <= tolerance; }
};

/// Compares apply_scattering(xi_spectrum(kernel)) with evolve_mirror over [0, horizon].
/// Input is the interaction-picture state at t = 0 in momentum representation; all
/// packets must be incoming and clear of the mirror at t = 0 and t = horizon,
/// otherwise PreconditionViolation. Energies use the sqrt(|k|) kernel.
EquivalenceReport scattering_equivalence_check(const AmplitudeField& field,
                                               const MirrorKernel& kernel,
                                               const UnitSystem& units, double horizon,
                                               const MirrorEvolveOptions& options = {});

/// Time-independent coupling restricted to k > 0,
///   H = sum_lambda int_0^inf dk [hbar Omega_k a_{1 lambda}(k) a^dag_{-1 lambda}(k) + H.c.],
/// applied for `duration`. Modes with k <= 0 are untouched. Being diagonal in k it
/// cannot tell incoming from outgoing packets.
AmplitudeField evolve_positive_only_effective(const AmplitudeField& field,
                                              std::span<const Complex> omega_k,
                                              double duration);

}  // namespace locfield
