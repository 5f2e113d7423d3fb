#include "locfield/mirror.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "fft.hpp"
#include "locfield/errors.hpp"
#include "locfield/observables.hpp"
#include "locfield/transforms.hpp"

namespace locfield {

// ---------------------------------------------------------------------------
// Kernel construction
// ---------------------------------------------------------------------------

double DenseKernel::at(long row, long col) const {
  const long r = row - static_cast<long>(row_begin);
  const long c = col - static_cast<long>(col_begin);
  if (r < 0 || c < 0 || r >= static_cast<long>(rows) || c >= static_cast<long>(cols)) return 0.0;
  return values[static_cast<std::size_t>(r) * cols + static_cast<std::size_t>(c)];
}

MirrorKernel::MirrorKernel(Grid grid, std::variant<SeparableKernel, DenseKernel> data)
    : grid_(grid), data_(std::move(data)) {}

MirrorKernel MirrorKernel::separable(const Grid& grid, std::vector<double> omega) {
  if (omega.size() != grid.size()) throw InvalidArgument("separable profile size != grid size");
  SeparableKernel sep;
  sep.begin = omega.size();
  sep.end = 0;
  for (std::size_t j = 0; j < omega.size(); ++j) {
    if (!std::isfinite(omega[j])) throw InvalidArgument("mirror coupling must be finite");
    if (omega[j] != 0.0) {
      sep.begin = std::min(sep.begin, j);
      sep.end = j + 1;
    }
  }
  if (sep.end == 0) sep.begin = 0;
  if (sep.end > sep.begin && (sep.begin == 0 || sep.end >= omega.size())) {
    throw InvalidArgument("mirror support must stay away from the lattice edge sites");
  }
  sep.omega = std::move(omega);
  return MirrorKernel(grid, std::move(sep));
}

MirrorKernel MirrorKernel::dense(const Grid& grid, std::span<const double> matrix) {
  const std::size_t n = grid.size();
  if (matrix.size() != n * n) throw InvalidArgument("dense kernel must be n x n");
  std::size_t r0 = n, r1 = 0, c0 = n, c1 = 0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const double v = matrix[r * n + c];
      if (!std::isfinite(v)) throw InvalidArgument("mirror coupling must be finite");
      if (v != 0.0) {
        r0 = std::min(r0, r);
        r1 = std::max(r1, r + 1);
        c0 = std::min(c0, c);
        c1 = std::max(c1, c + 1);
      }
    }
  }
  if (r1 == 0) return dense_block(grid, 0, 0, 0, 0, {});
  std::vector<double> block((r1 - r0) * (c1 - c0));
  for (std::size_t r = r0; r < r1; ++r) {
    for (std::size_t c = c0; c < c1; ++c) block[(r - r0) * (c1 - c0) + (c - c0)] = matrix[r * n + c];
  }
  return dense_block(grid, r0, r1 - r0, c0, c1 - c0, std::move(block));
}

MirrorKernel MirrorKernel::dense_block(const Grid& grid, std::size_t row_begin, std::size_t rows,
                                       std::size_t col_begin, std::size_t cols,
                                       std::vector<double> values) {
  if (values.size() != rows * cols) throw InvalidArgument("dense block size mismatch");
  if (row_begin + rows > grid.size() || col_begin + cols > grid.size()) {
    throw InvalidArgument("dense block exceeds the grid");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("mirror coupling must be finite");
  }
  return MirrorKernel(grid, DenseKernel{grid.size(), row_begin, rows, col_begin, cols,
                                        std::move(values)});
}

bool MirrorKernel::is_separable() const {
  return std::holds_alternative<SeparableKernel>(data_);
}

const SeparableKernel& MirrorKernel::as_separable() const {
  if (!is_separable()) throw RepresentationMismatch("mirror kernel is dense");
  return std::get<SeparableKernel>(data_);
}

const DenseKernel& MirrorKernel::as_dense() const {
  if (is_separable()) throw RepresentationMismatch("mirror kernel is separable");
  return std::get<DenseKernel>(data_);
}

MirrorKernel MirrorKernel::to_dense() const {
  if (!is_separable()) return *this;
  const SeparableKernel& sep = as_separable();
  const std::size_t n = grid_.size();
  if (sep.end <= sep.begin) return dense_block(grid_, 0, 0, 0, 0, {});
  const std::size_t width = sep.end - sep.begin;
  const std::size_t col_begin = n - (sep.end - 1);
  std::vector<double> block(width * width, 0.0);
  for (std::size_t j = sep.begin; j < sep.end; ++j) {
    const std::size_t r = j - sep.begin;
    const std::size_t c = grid_.mirrored_x_index(j) - col_begin;
    block[r * width + c] = sep.omega[j] / grid_.dx();
  }
  return dense_block(grid_, sep.begin, width, col_begin, width, std::move(block));
}

double MirrorKernel::max_rate() const {
  if (is_separable()) {
    double worst = 0.0;
    for (double v : as_separable().omega) worst = std::max(worst, std::abs(v));
    return worst;
  }
  const DenseKernel& d = as_dense();
  double worst = 0.0;
  for (std::size_t r = 0; r < d.rows; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < d.cols; ++c) sum += std::abs(d.values[r * d.cols + c]);
    worst = std::max(worst, sum);
  }
  for (std::size_t c = 0; c < d.cols; ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < d.rows; ++r) sum += std::abs(d.values[r * d.cols + c]);
    worst = std::max(worst, sum);
  }
  return worst * grid_.dx();
}

std::pair<long, long> MirrorKernel::row_sites() const {
  if (is_separable()) {
    const auto& s = as_separable();
    return {static_cast<long>(s.begin), static_cast<long>(s.end) - 1};
  }
  const auto& d = as_dense();
  return {static_cast<long>(d.row_begin), static_cast<long>(d.row_begin + d.rows) - 1};
}

std::pair<long, long> MirrorKernel::col_sites() const {
  if (is_separable()) {
    const auto& s = as_separable();
    if (s.end <= s.begin) return {0, -1};
    const long n = static_cast<long>(grid_.size());
    return {n - (static_cast<long>(s.end) - 1), n - static_cast<long>(s.begin)};
  }
  const auto& d = as_dense();
  return {static_cast<long>(d.col_begin), static_cast<long>(d.col_begin + d.cols) - 1};
}

bool MirrorKernel::is_zero() const {
  if (is_separable()) return as_separable().end <= as_separable().begin;
  const auto& d = as_dense();
  return std::all_of(d.values.begin(), d.values.end(), [](double v) { return v == 0.0; });
}

namespace {

MirrorKernel scaled_profile(const Grid& grid, std::vector<double> shape, double angle,
                            const UnitSystem& units) {
  double sum = 0.0;
  for (double v : shape) sum += v;
  sum *= grid.dx() / units.c;
  if (!(sum > 0.0)) throw InvalidArgument("mirror profile has no weight");
  for (double& v : shape) v *= angle / sum;
  return MirrorKernel::separable(grid, std::move(shape));
}

}  // namespace

MirrorKernel gaussian_mirror(const Grid& grid, double width, std::size_t half_cells, double angle,
                             const UnitSystem& units) {
  if (!(width > 0.0)) throw InvalidArgument("mirror width must be positive");
  if (half_cells + 2 > grid.size() / 2) throw InvalidArgument("mirror wider than the grid");
  std::vector<double> shape(grid.size(), 0.0);
  const std::size_t mid = grid.center();
  for (std::size_t j = mid - half_cells; j <= mid + half_cells; ++j) {
    const double x = grid.x(j);
    shape[j] = std::exp(-0.5 * x * x / (width * width));
  }
  return scaled_profile(grid, std::move(shape), angle, units);
}

MirrorKernel box_mirror(const Grid& grid, std::size_t half_cells, double angle,
                        const UnitSystem& units) {
  if (half_cells + 2 > grid.size() / 2) throw InvalidArgument("mirror wider than the grid");
  std::vector<double> shape(grid.size(), 0.0);
  const std::size_t mid = grid.center();
  for (std::size_t j = mid - half_cells; j <= mid + half_cells; ++j) shape[j] = 1.0;
  return scaled_profile(grid, std::move(shape), angle, units);
}

// ---------------------------------------------------------------------------
// Scattering spectrum and closed-form scattering operator
// ---------------------------------------------------------------------------

ScatteringSpectrum xi_spectrum(const MirrorKernel& kernel, const UnitSystem& units) {
  const Grid& grid = kernel.grid();
  const std::size_t n = grid.size();
  ScatteringSpectrum out{grid, std::vector<Complex>(n)};
  const Complex i_over_c{0.0, 1.0 / units.c};

  if (kernel.is_separable()) {
    double sum = 0.0;
    for (double v : kernel.as_separable().omega) sum += v;
    std::fill(out.xi.begin(), out.xi.end(), i_over_c * sum * grid.dx());
    return out;
  }

  // x_j + x_j' = (j + j' - n) dx; on lattice k the phase is n-periodic in j + j',
  // so fold the anti-diagonal sums modulo n:
  //   Xi_m = (i/c) dx^2 sum_r D_r (-1)^r e^{2 pi i m r / n}.
  const DenseKernel& d = kernel.as_dense();
  std::vector<Complex> folded(n);
  for (std::size_t r = 0; r < d.rows; ++r) {
    for (std::size_t c = 0; c < d.cols; ++c) {
      const std::size_t q = (d.row_begin + r + d.col_begin + c) % n;
      folded[q] += d.values[r * d.cols + c];
    }
  }
  for (std::size_t q = 1; q < n; q += 2) folded[q] = -folded[q];
  detail::dft(folded, out.xi, +1);
  const Complex scale = i_over_c * grid.dx() * grid.dx();
  for (Complex& v : out.xi) v *= scale;
  return out;
}

void write_spectrum_csv(std::ostream& out, const ScatteringSpectrum& spectrum) {
  out << "k,re_xi,im_xi,abs_xi,reflectance,transmittance\n";
  out << std::setprecision(17);
  for (std::size_t m = 0; m < spectrum.xi.size(); ++m) {
    const Complex xi = spectrum.xi[m];
    const double r = std::abs(xi);
    const double sn = std::sin(r);
    const double cs = std::cos(r);
    out << spectrum.grid.k(m) << ',' << xi.real() << ',' << xi.imag() << ',' << r << ','
        << sn * sn << ',' << cs * cs << '\n';
  }
}

Unitary2 scattering_unitary(Complex xi) {
  const double r = std::abs(xi);
  const double cs = std::cos(r);
  const double sinc = r == 0.0 ? 1.0 : std::sin(r) / r;
  const Complex minus_i{0.0, -1.0};
  return {cs, minus_i * std::conj(xi) * sinc, minus_i * xi * sinc, cs};
}

namespace {

template <class PerMode>
AmplitudeField rotate_direction_pairs(const AmplitudeField& field, PerMode&& per_mode) {
  if (field.representation() != Representation::Momentum) {
    throw RepresentationMismatch("scattering acts on momentum amplitudes");
  }
  AmplitudeField work = to_circular(field);
  for (Polarization p : kPolarizations) {
    auto right = work.channel(Direction::Right, p);
    auto left = work.channel(Direction::Left, p);
    for (std::size_t m = 0; m < work.size(); ++m) {
      const auto u = per_mode(m);
      if (!u) continue;
      const Complex a = right[m];
      const Complex b = left[m];
      right[m] = u->m00 * a + u->m01 * b;
      left[m] = u->m10 * a + u->m11 * b;
    }
  }
  return field.basis() == PolarizationBasis::Linear ? to_linear(work) : work;
}

}  // namespace

AmplitudeField apply_scattering(const AmplitudeField& field, const ScatteringSpectrum& spectrum) {
  if (!(spectrum.grid == field.grid())) throw InvalidArgument("spectrum grid mismatch");
  return rotate_direction_pairs(field, [&](std::size_t m) -> std::optional<Unitary2> {
    if (spectrum.xi[m] == Complex{0.0, 0.0}) return std::nullopt;
    return scattering_unitary(spectrum.xi[m]);
  });
}

AmplitudeField evolve_positive_only_effective(const AmplitudeField& field,
                                              std::span<const Complex> omega_k,
                                              double duration) {
  if (omega_k.size() != field.size()) throw InvalidArgument("coupling size != grid size");
  const Grid& grid = field.grid();
  return rotate_direction_pairs(field, [&](std::size_t m) -> std::optional<Unitary2> {
    if (grid.k(m) <= 0.0 || omega_k[m] == Complex{0.0, 0.0}) return std::nullopt;
    return scattering_unitary(omega_k[m] * duration);
  });
}

// ---------------------------------------------------------------------------
// Interaction-picture dynamics
// ---------------------------------------------------------------------------

namespace {

// Running integral of the piecewise-linear interpolant of a separable profile.
class ProfileIntegral {
 public:
  explicit ProfileIntegral(const MirrorKernel& kernel)
      : grid_(kernel.grid()), omega_(kernel.as_separable().omega), cumulative_(omega_.size()) {
    for (std::size_t j = 1; j < omega_.size(); ++j) {
      cumulative_[j] = cumulative_[j - 1] + 0.5 * grid_.dx() * (omega_[j - 1] + omega_[j]);
    }
  }

  /// int_{x_0}^{u} Omega.
  [[nodiscard]] double at(double u) const {
    const double pos = u / grid_.dx() + static_cast<double>(grid_.center());
    if (pos <= 0.0) return 0.0;
    const double last = static_cast<double>(omega_.size() - 1);
    if (pos >= last) return cumulative_.back();
    const auto j = static_cast<std::size_t>(std::floor(pos));
    const double fr = pos - static_cast<double>(j);
    return cumulative_[j] +
           grid_.dx() * (omega_[j] * fr + 0.5 * (omega_[j + 1] - omega_[j]) * fr * fr);
  }

 private:
  Grid grid_;
  const std::vector<double>& omega_;
  std::vector<double> cumulative_;
};

void require_flat_position(const AmplitudeField& field) {
  if (field.representation() != Representation::Position ||
      field.kernel().kind != KernelKind::Flat) {
    throw RepresentationMismatch(
        "mirror dynamics act on flat-kernel (truly local) position amplitudes");
  }
}

void evolve_closed_form(AmplitudeField& work, const MirrorKernel& kernel, const UnitSystem& units,
                        double t_start, double t_end) {
  const Grid& grid = kernel.grid();
  const ProfileIntegral integral(kernel);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.x(j);
    const double theta =
        (integral.at(x + units.c * t_end) - integral.at(x + units.c * t_start)) / units.c;
    if (theta == 0.0) continue;
    const double cs = std::cos(theta);
    const double sn = std::sin(theta);
    const std::size_t partner = grid.mirrored_x_index(j);
    for (Polarization p : kPolarizations) {
      Complex& a = work.channel(Direction::Right, p)[j];
      Complex& b = work.channel(Direction::Left, p)[partner];
      const Complex a0 = a;
      a = cs * a0 - sn * b;
      b = sn * a0 + cs * b;
    }
  }
}

// Coupling Omega_{(x_j + c t)(x_j' - c t)} dx for rows x cols windows.
struct CouplingWindow {
  long row0 = 0, rows = 0, col0 = 0, cols = 0;
  std::vector<double> values;  // rows x cols

  void fill(const DenseKernel& d, double shift, double dx) {
    const double p_floor = std::floor(shift);
    const long p = static_cast<long>(p_floor);
    const double fr = shift - p_floor;
    values.assign(static_cast<std::size_t>(rows * cols), 0.0);
    for (long r = 0; r < rows; ++r) {
      const long j = row0 + r;
      for (long c = 0; c < cols; ++c) {
        const long jp = col0 + c;
        double v = (1.0 - fr) * d.at(j + p, jp - p);
        if (fr != 0.0) v += fr * d.at(j + p + 1, jp - p - 1);
        values[static_cast<std::size_t>(r * cols + c)] = v * dx;
      }
    }
  }
  [[nodiscard]] bool all_zero() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
  }
};

void evolve_rk4(AmplitudeField& work, const DenseKernel& d, const UnitSystem& units,
                double t_start, double t_end, std::size_t steps) {
  const Grid& grid = work.grid();
  const long n = static_cast<long>(grid.size());
  const double dx = grid.dx();
  const double span = t_end - t_start;
  if (d.rows == 0 || d.cols == 0) return;

  const long rb = static_cast<long>(d.row_begin);
  const long re = rb + static_cast<long>(d.rows);
  const long cb = static_cast<long>(d.col_begin);
  const long ce = cb + static_cast<long>(d.cols);

  std::array<CouplingWindow, 3> stage;  // couplings at t, t + h/2, t + h
  std::vector<Complex> y1, y2, k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b, ta, tb;

  // One classical RK4 step on [t0, t1], which must not straddle a kink of the
  // interpolated coupling.
  auto advance = [&](double t0, double t1) {
    const double h = t1 - t0;
    const double s_lo = units.c * std::min(t0, t1) / dx;
    const double s_hi = units.c * std::max(t0, t1) / dx;
    const long p_lo = static_cast<long>(std::floor(s_lo));
    const long p_hi = static_cast<long>(std::floor(s_hi));

    const long row_lo = std::max(0L, rb - p_hi - 1);
    const long row_hi = std::min(n, re - p_lo);
    const long col_lo = std::max(0L, cb + p_lo);
    const long col_hi = std::min(n, ce + p_hi + 1);
    if (row_lo >= row_hi || col_lo >= col_hi) return;

    const double times[3] = {t0, 0.5 * (t0 + t1), t1};
    bool active = false;
    for (int s = 0; s < 3; ++s) {
      stage[s].row0 = row_lo;
      stage[s].rows = row_hi - row_lo;
      stage[s].col0 = col_lo;
      stage[s].cols = col_hi - col_lo;
      stage[s].fill(d, units.c * times[s] / dx, dx);
      active = active || !stage[s].all_zero();
    }
    if (!active) return;

    const auto rows = static_cast<std::size_t>(row_hi - row_lo);
    const auto cols = static_cast<std::size_t>(col_hi - col_lo);
    // y' = f(t, y): d(right)/dt = -M left, d(left)/dt = M^T right
    auto rhs = [&](const CouplingWindow& w, const std::vector<Complex>& a,
                   const std::vector<Complex>& b, std::vector<Complex>& da,
                   std::vector<Complex>& db) {
      da.assign(rows, Complex{});
      db.assign(cols, Complex{});
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
          const double m = w.values[r * cols + c];
          if (m == 0.0) continue;
          da[r] -= m * b[c];
          db[c] += m * a[r];
        }
      }
    };

    for (Polarization p : kPolarizations) {
      auto right = work.channel(Direction::Right, p);
      auto left = work.channel(Direction::Left, p);
      y1.assign(right.begin() + row_lo, right.begin() + row_hi);
      y2.assign(left.begin() + col_lo, left.begin() + col_hi);

      rhs(stage[0], y1, y2, k1a, k1b);
      ta.resize(rows);
      tb.resize(cols);
      for (std::size_t r = 0; r < rows; ++r) ta[r] = y1[r] + 0.5 * h * k1a[r];
      for (std::size_t c = 0; c < cols; ++c) tb[c] = y2[c] + 0.5 * h * k1b[c];
      rhs(stage[1], ta, tb, k2a, k2b);
      for (std::size_t r = 0; r < rows; ++r) ta[r] = y1[r] + 0.5 * h * k2a[r];
      for (std::size_t c = 0; c < cols; ++c) tb[c] = y2[c] + 0.5 * h * k2b[c];
      rhs(stage[1], ta, tb, k3a, k3b);
      for (std::size_t r = 0; r < rows; ++r) ta[r] = y1[r] + h * k3a[r];
      for (std::size_t c = 0; c < cols; ++c) tb[c] = y2[c] + h * k3b[c];
      rhs(stage[2], ta, tb, k4a, k4b);

      for (std::size_t r = 0; r < rows; ++r) {
        const Complex inc = (h / 6.0) * (k1a[r] + 2.0 * k2a[r] + 2.0 * k3a[r] + k4a[r]);
        if (inc != Complex{}) right[static_cast<std::size_t>(row_lo) + r] = y1[r] + inc;
      }
      for (std::size_t c = 0; c < cols; ++c) {
        const Complex inc = (h / 6.0) * (k1b[c] + 2.0 * k2b[c] + 2.0 * k3b[c] + k4b[c]);
        if (inc != Complex{}) left[static_cast<std::size_t>(col_lo) + c] = y2[c] + inc;
      }
    }
  };

  // The coupling is piecewise linear in t with kinks wherever c t / dx is an
  // integer. Steps that straddle a kink are split there so RK4 keeps order 4
  // for windows that are not aligned with dx / c.
  const double tiny = 1e-12 * dx / units.c;
  for (std::size_t step = 0; step < steps; ++step) {
    const double t0 = t_start + span * static_cast<double>(step) / static_cast<double>(steps);
    const double t1 = t_start + span * static_cast<double>(step + 1) / static_cast<double>(steps);
    const double s0 = units.c * t0 / dx;
    const double s1 = units.c * t1 / dx;
    const double dir = s1 > s0 ? 1.0 : -1.0;
    double from = t0;
    for (double m = dir > 0 ? std::floor(s0) + 1.0 : std::ceil(s0) - 1.0; dir * (s1 - m) > 0.0;
         m += dir) {
      const double kink = m * dx / units.c;
      if (std::abs(kink - from) > tiny && std::abs(t1 - kink) > tiny) {
        advance(from, kink);
        from = kink;
      }
    }
    advance(from, t1);
  }
}

}  // namespace

std::size_t minimum_mirror_steps(const MirrorKernel& kernel, const UnitSystem& units,
                                 double duration) {
  const double span = std::abs(duration);
  const double by_rate = 10.0 * kernel.max_rate() * span;
  const double by_sweep = 4.0 * units.c * span / kernel.grid().dx();
  return static_cast<std::size_t>(std::ceil(std::max({by_rate, by_sweep, 1.0}) - 1e-9));
}

AmplitudeField evolve_mirror(const AmplitudeField& field, const MirrorKernel& kernel,
                             const UnitSystem& units, double t_start, double t_end,
                             const MirrorEvolveOptions& options) {
  require_flat_position(field);
  if (!(kernel.grid() == field.grid())) throw InvalidArgument("mirror kernel grid mismatch");
  if (t_start == t_end || kernel.is_zero()) return field;

  MirrorIntegrator integrator = options.integrator;
  if (integrator == MirrorIntegrator::Auto) {
    integrator = kernel.is_separable() ? MirrorIntegrator::ClosedForm : MirrorIntegrator::RungeKutta4;
  }

  AmplitudeField work = to_circular(field);
  if (integrator == MirrorIntegrator::ClosedForm) {
    if (!kernel.is_separable()) {
      throw InvalidArgument("closed-form mirror evolution needs a separable kernel");
    }
    evolve_closed_form(work, kernel, units, t_start, t_end);
  } else {
    const std::size_t minimum = minimum_mirror_steps(kernel, units, t_end - t_start);
    const std::size_t steps = options.steps == 0 ? minimum : options.steps;
    if (steps < minimum) {
      std::ostringstream msg;
      msg << "RK4 mirror evolution needs at least " << minimum << " steps, got " << steps;
      throw PreconditionViolation(msg.str());
    }
    const MirrorKernel dense = kernel.to_dense();
    evolve_rk4(work, dense.as_dense(), units, t_start, t_end, steps);
  }
  return field.basis() == PolarizationBasis::Linear ? to_linear(work) : work;
}

double xi_profile(const MirrorKernel& kernel, double x, double t, const UnitSystem& units) {
  const ProfileIntegral integral(kernel);
  return (integral.at(x + units.c * t) - integral.at(x)) / units.c;
}

// ---------------------------------------------------------------------------
// Closed form vs. time-resolved cross-check
// ---------------------------------------------------------------------------

namespace {

void check_clear_of_mirror(const AmplitudeField& position, const MirrorKernel& kernel,
                           const UnitSystem& units, double horizon) {
  if (kernel.is_zero()) return;
  const Grid& grid = position.grid();
  double peak = 0.0;
  for (const Complex& v : position.data()) peak = std::max(peak, std::abs(v));
  const double threshold = 1e-9 * peak;
  const double reach = units.c * horizon;

  const auto [r_first, r_last] = kernel.row_sites();
  const auto [c_first, c_last] = kernel.col_sites();
  const double row_lo = grid.x(static_cast<std::size_t>(r_first)) - grid.dx();
  const double row_hi = grid.x(static_cast<std::size_t>(r_last)) + grid.dx();
  const double col_lo = grid.x(static_cast<std::size_t>(c_first)) - grid.dx();
  const double col_hi = grid.x(static_cast<std::size_t>(c_last)) + grid.dx();

  for (Polarization p : kPolarizations) {
    auto right = position.channel(Direction::Right, p);
    auto left = position.channel(Direction::Left, p);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double x = grid.x(j);
      // A right-mover at x meets the kernel rows when x + c t enters [row_lo, row_hi].
      if (std::abs(right[j]) > threshold && !(x < row_lo && x + reach > row_hi)) {
        std::ostringstream msg;
        msg << "right-moving amplitude at x = " << x
            << " is not an incoming packet that clears the mirror within the horizon";
        throw PreconditionViolation(msg.str());
      }
      // A left-mover at x' meets the kernel columns when x' - c t enters [col_lo, col_hi].
      if (std::abs(left[j]) > threshold && !(x > col_hi && x - reach < col_lo)) {
        std::ostringstream msg;
        msg << "left-moving amplitude at x = " << x
            << " is not an incoming packet that clears the mirror within the horizon";
        throw PreconditionViolation(msg.str());
      }
    }
  }
}

}  // namespace

EquivalenceReport scattering_equivalence_check(const AmplitudeField& field,
                                               const MirrorKernel& kernel,
                                               const UnitSystem& units, double horizon,
                                               const MirrorEvolveOptions& options) {
  if (field.representation() != Representation::Momentum) {
    throw RepresentationMismatch("equivalence check expects momentum amplitudes at t = 0");
  }
  if (!(horizon > 0.0)) throw InvalidArgument("horizon must be positive");
  const KernelSpec flat = KernelSpec::flat();
  const AmplitudeField initial = to_position(field, flat);
  check_clear_of_mirror(initial, kernel, units, horizon);

  const AmplitudeField by_scatter =
      to_position(apply_scattering(field, xi_spectrum(kernel, units)), flat);
  const AmplitudeField by_ode = evolve_mirror(initial, kernel, units, 0.0, horizon, options);

  EquivalenceReport report;
  report.separable = kernel.is_separable();
  report.tolerance = report.separable ? 1e-6 : 0.0;
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    auto a = by_scatter.channel(c);
    auto b = by_ode.channel(c);
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
    report.channel_discrepancy[c] = worst;
    report.max_discrepancy = std::max(report.max_discrepancy, worst);
  }

  const KernelSpec energy_kernel = KernelSpec::sqrt_abs_k();
  report.energy_in_right = energy_of_direction(field, energy_kernel, units, Direction::Right);
  report.energy_in_left = energy_of_direction(field, energy_kernel, units, Direction::Left);
  const AmplitudeField scatter_k = to_momentum(by_scatter);
  const AmplitudeField ode_k = to_momentum(by_ode);
  report.scatter_right = energy_of_direction(scatter_k, energy_kernel, units, Direction::Right);
  report.scatter_left = energy_of_direction(scatter_k, energy_kernel, units, Direction::Left);
  report.ode_right = energy_of_direction(ode_k, energy_kernel, units, Direction::Right);
  report.ode_left = energy_of_direction(ode_k, energy_kernel, units, Direction::Left);
  return report;
}

}  // namespace locfield
