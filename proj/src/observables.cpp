#include "locfield/observables.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "locfield/errors.hpp"
#include "locfield/propagation.hpp"
#include "locfield/transforms.hpp"

namespace locfield {

namespace {

void require_field_observable_input(const AmplitudeField& field) {
  if (field.representation() != Representation::Position ||
      field.kernel().kind != KernelKind::SqrtAbsK) {
    throw RepresentationMismatch(
        "E/B observables are defined on the sqrt(|k|) position representation; "
        "convert with to_position(field, KernelSpec::sqrt_abs_k()) or change_kernel first");
  }
  if (field.interpretation() != Interpretation::CoherentAmplitude) {
    throw RepresentationMismatch("field observables assume coherent-amplitude amplitudes");
  }
}

// Linear map a(x) -> (E, B); skips validation so it can be reused on derivatives.
FieldProfiles assemble_profiles(const AmplitudeField& position, const UnitSystem& units) {
  const AmplitudeField lin = to_linear(position);
  const Grid& grid = lin.grid();
  const std::size_t n = grid.size();
  const double scale = units.field_scale();
  FieldProfiles out;
  out.x = grid.x_values();
  out.e_y.assign(n, 0.0);
  out.e_z.assign(n, 0.0);
  out.b_y.assign(n, 0.0);
  out.b_z.assign(n, 0.0);
  out.energy_density.assign(n, 0.0);
  for (Direction s : kDirections) {
    const double sd = sign_of(s);
    auto h = lin.channel(s, kH);
    auto v = lin.channel(s, kV);
    for (std::size_t j = 0; j < n; ++j) {
      const double xi_h = std::numbers::sqrt2 * h[j].real();
      const double xi_v = std::numbers::sqrt2 * v[j].real();
      out.e_y[j] += scale * xi_h;
      out.e_z[j] += scale * xi_v;
      out.b_y[j] -= sd / units.c * scale * xi_v;
      out.b_z[j] += sd / units.c * scale * xi_h;
      out.energy_density[j] += units.hbar * units.c * (xi_h * xi_h + xi_v * xi_v);
    }
  }
  return out;
}

double energy_sum(const AmplitudeField& field, const KernelSpec& kernel, const UnitSystem& units,
                  const Direction* only) {
  if (field.representation() != Representation::Momentum) {
    throw RepresentationMismatch("energy_total expects momentum amplitudes");
  }
  // The anomalous term pairs k with -k per linear polarization; it is not
  // invariant under the circular basis change.
  const AmplitudeField lin = to_linear(field);
  const Grid& grid = lin.grid();
  const std::size_t n = grid.size();
  std::vector<Complex> f(n);
  for (std::size_t m = 0; m < n; ++m) f[m] = kernel.value(grid.k(m));

  double total = 0.0;
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    if (only != nullptr && channel_direction(c) != *only) continue;
    auto alpha = lin.channel(c);
    for (std::size_t m = 0; m < n; ++m) {
      double term = std::norm(f[m]) * std::norm(alpha[m]);
      if (auto partner = grid.negated_k_index(m)) {
        term += (f[m] * f[*partner] * alpha[m] * alpha[*partner]).real();
      }
      total += term;
    }
  }
  return 2.0 * std::numbers::pi * units.hbar * units.c * grid.dk() * total;
}

}  // namespace

FieldProfiles field_profiles(const AmplitudeField& field, const UnitSystem& units) {
  require_field_observable_input(field);
  return assemble_profiles(field, units);
}

std::vector<double> energy_density(const AmplitudeField& field, const UnitSystem& units) {
  require_field_observable_input(field);
  return assemble_profiles(field, units).energy_density;
}

std::vector<double> energy_density_from_fields(const FieldProfiles& p, const UnitSystem& units) {
  std::vector<double> out(p.x.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double e2 = p.e_y[j] * p.e_y[j] + p.e_z[j] * p.e_z[j];
    const double b2 = p.b_y[j] * p.b_y[j] + p.b_z[j] * p.b_z[j];
    out[j] = 0.5 * units.area * (units.epsilon * e2 + b2 / units.mu);
  }
  return out;
}

double energy_total(const AmplitudeField& field, const KernelSpec& kernel,
                    const UnitSystem& units) {
  return energy_sum(field, kernel, units, nullptr);
}

double energy_of_direction(const AmplitudeField& field, const KernelSpec& kernel,
                           const UnitSystem& units, Direction s) {
  return energy_sum(field, kernel, units, &s);
}

MaxwellReport maxwell_residual(const AmplitudeField& field, const UnitSystem& units,
                               double dt_probe, const KernelSpec& kernel) {
  if (field.representation() != Representation::Momentum) {
    throw RepresentationMismatch("maxwell_residual expects momentum amplitudes");
  }
  if (!(dt_probe > 0.0)) throw InvalidArgument("dt_probe must be positive");
  const Grid& grid = field.grid();
  const std::size_t n = grid.size();

  const FieldProfiles now = assemble_profiles(to_position(field, kernel), units);
  const FieldProfiles later = assemble_profiles(
      to_position(evolve_free(field, dt_probe, units), kernel), units);
  const FieldProfiles earlier = assemble_profiles(
      to_position(evolve_free(field, -dt_probe, units), kernel), units);

  // d/dx a_s(x) = sum_m f(k_m) (i s k_m) e^{i s k_m x} alpha_s(k_m) dk
  AmplitudeField spectral = field;
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    const double sd = sign_of(channel_direction(c));
    auto chan = spectral.channel(c);
    for (std::size_t m = 0; m < n; ++m) chan[m] *= Complex{0.0, sd * grid.k(m)};
  }
  const FieldProfiles dx = assemble_profiles(to_position(spectral, kernel), units);

  const double inv = 1.0 / (2.0 * dt_probe);
  const double eps_mu = units.epsilon * units.mu;
  MaxwellReport report;
  double peak_e = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double de_y = (later.e_y[j] - earlier.e_y[j]) * inv;
    const double de_z = (later.e_z[j] - earlier.e_z[j]) * inv;
    const double db_y = (later.b_y[j] - earlier.b_y[j]) * inv;
    const double db_z = (later.b_z[j] - earlier.b_z[j]) * inv;
    // curl E = -dB/dt:  -dE_z/dx = -dB_y/dt,  dE_y/dx = -dB_z/dt
    // curl B = eps mu dE/dt:  -dB_z/dx = eps mu dE_y/dt,  dB_y/dx = eps mu dE_z/dt
    const double r = std::max({std::abs(-dx.e_z[j] + db_y), std::abs(dx.e_y[j] + db_z),
                               std::abs(-dx.b_z[j] - eps_mu * de_y),
                               std::abs(dx.b_y[j] - eps_mu * de_z)});
    report.residual = std::max(report.residual, r);
    peak_e = std::max({peak_e, std::hypot(now.e_y[j], now.e_z[j])});
  }
  report.scale = peak_e / grid.dx();

  double edge = 0.0;
  double all = 0.0;
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    auto chan = field.channel(c);
    for (std::size_t m = 0; m < n; ++m) {
      const double w = std::norm(chan[m]);
      all += w;
      if (std::abs(grid.k(m)) > 0.8 * grid.k_max()) edge += w;
    }
  }
  report.band_edge_fraction = all > 0.0 ? edge / all : 0.0;
  report.band_edge = report.band_edge_fraction > 1e-6;
  return report;
}

void write_profiles_csv(std::ostream& out, const FieldProfiles& p, const UnitSystem& units,
                        const KernelSpec& kernel) {
  out << "# units: hbar=" << units.hbar << " c=" << units.c << " epsilon=" << units.epsilon
      << " mu=" << units.mu << " area=" << units.area << '\n';
  out << "# kernel: " << to_string(kernel.kind) << " phase=" << kernel.phase << '\n';
  out << "x,E_y,E_z,B_y,B_z,u\n";
  out << std::setprecision(17);
  for (std::size_t j = 0; j < p.x.size(); ++j) {
    out << p.x[j] << ',' << p.e_y[j] << ',' << p.e_z[j] << ',' << p.b_y[j] << ',' << p.b_z[j]
        << ',' << p.energy_density[j] << '\n';
  }
}

}  // namespace locfield
