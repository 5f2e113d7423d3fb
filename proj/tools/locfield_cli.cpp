// Command-line front end: scenario runs plus thin wrappers over library operations.
//
// Exit status: 0 success, 1 failed run / failed check / warning under --strict,
// 2 invalid input (usage, scenario schema, file format).

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "locfield/errors.hpp"
#include "locfield/io.hpp"
#include "locfield/mirror.hpp"
#include "locfield/observables.hpp"
#include "locfield/propagation.hpp"
#include "locfield/transforms.hpp"
#include "scenario.hpp"

namespace fs = std::filesystem;
using namespace locfield;

namespace {

constexpr int kFailed = 1;
constexpr int kInvalid = 2;

struct StrictAbort {};

struct Common {
  std::string out_dir;
  unsigned threads = 1;
  bool strict = false;

  // Flag wins over the environment, which wins over "out".
  fs::path resolved_out_dir() const {
    if (!out_dir.empty()) return out_dir;
    if (const char* env = std::getenv("LOCFIELD_OUT_DIR"); env != nullptr && *env != '\0') return env;
    return "out";
  }
};

struct KernelSource {
  std::string csv;
  std::string dense;
  std::size_t n = 0;
  double dx = 0.0;

  MirrorKernel load(const std::optional<Grid>& grid) const {
    if (!csv.empty() == !dense.empty()) throw InvalidArgument("give exactly one of --kernel or --dense-kernel");
    if (!dense.empty()) {
      std::ifstream in(dense, std::ios::binary);
      if (!in) throw FormatError("cannot open " + dense);
      MirrorKernel k = read_dense_kernel_binary(in);
      if (grid && !(k.grid() == *grid)) throw FormatError(dense + ": grid differs from the state");
      return k;
    }
    std::ifstream in(csv);
    if (!in) throw FormatError("cannot open " + csv);
    if (grid) return read_separable_kernel_csv(in, *grid);
    if (n == 0) throw InvalidArgument("a separable kernel needs --n and --dx (or a state)");
    return read_separable_kernel_csv(in, make_grid(n, dx));
  }
};

void add_kernel_options(CLI::App* cmd, KernelSource& k, bool with_grid) {
  cmd->add_option("--kernel", k.csv, "separable mirror profile, CSV rows x,omega");
  cmd->add_option("--dense-kernel", k.dense, "dense mirror matrix, binary");
  if (with_grid) {
    cmd->add_option("--n", k.n, "grid points for a CSV kernel");
    cmd->add_option("--dx", k.dx, "grid spacing for a CSV kernel");
  }
}

UnitSystem units_from(const std::string& scenario_path) {
  return scenario_path.empty() ? natural_units() : scenario::load_scenario(scenario_path).units;
}

fs::path output_path(const std::string& requested, const Common& common, const char* fallback) {
  if (!requested.empty()) return requested;
  const fs::path dir = common.resolved_out_dir();
  fs::create_directories(dir);
  return dir / fallback;
}

void emit_warning(const scenario::Warning& w, bool strict) {
  std::cerr << scenario::warning_json(w) << '\n';
  if (strict) throw StrictAbort{};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"locfield: localised-photon field simulations"};
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--out-dir", common.out_dir, "output directory (env LOCFIELD_OUT_DIR, default ./out)");
  app.add_option("--threads", common.threads, "worker threads for independent runs")
      ->check(CLI::PositiveNumber);
  app.add_flag("--strict", common.strict, "treat numerical warnings as errors");

  std::string scenario_path;
  auto* run = app.add_subcommand("run", "execute a scenario schedule");
  run->add_option("--scenario", scenario_path, "scenario TOML")->required();

  auto* check = app.add_subcommand("check", "equivalence and consistency gates for a scenario");
  check->add_option("--scenario", scenario_path, "scenario TOML")->required();

  std::string state_path, out_path;
  double time = 0.0;
  auto* propagate = app.add_subcommand("propagate", "free evolution of a momentum state");
  propagate->add_option("--state", state_path, "input state")->required();
  propagate->add_option("--time", time, "duration")->required();
  propagate->add_option("--out", out_path, "output state (default <out-dir>/state.bin)");
  propagate->add_option("--scenario", scenario_path, "take units from this scenario");

  KernelSource kernel;
  auto* scatter = app.add_subcommand("scatter", "apply the closed-form scattering operator");
  scatter->add_option("--state", state_path, "input momentum state")->required();
  scatter->add_option("--out", out_path, "output state (default <out-dir>/state.bin)");
  scatter->add_option("--scenario", scenario_path, "take units from this scenario");
  add_kernel_options(scatter, kernel, false);

  auto* spectrum = app.add_subcommand("spectrum", "scattering angle per wavenumber as CSV");
  spectrum->add_option("--out", out_path, "output CSV (default <out-dir>/spectrum.csv)");
  spectrum->add_option("--scenario", scenario_path, "take units from this scenario");
  add_kernel_options(spectrum, kernel, true);

  double t_start = 0.0, t_end = 0.0;
  std::size_t steps = 0;
  std::string integrator = "auto";
  auto* mirror = app.add_subcommand("mirror-evolve", "interaction-picture mirror evolution");
  mirror->add_option("--state", state_path, "input state, momentum or flat-kernel position")->required();
  mirror->add_option("--t-start", t_start, "window start")->required();
  mirror->add_option("--t-end", t_end, "window end")->required();
  mirror->add_option("--steps", steps, "RK4 steps (0: stability minimum)");
  mirror->add_option("--integrator", integrator, "auto, rk4 or closed_form")
      ->check(CLI::IsMember({"auto", "rk4", "closed_form"}));
  mirror->add_option("--out", out_path, "output state (default <out-dir>/state.bin)");
  mirror->add_option("--scenario", scenario_path, "take units from this scenario");
  add_kernel_options(mirror, kernel, false);

  double phase = 0.0;
  auto* observables = app.add_subcommand("observables", "field and energy profiles of a state");
  observables->add_option("--state", state_path, "input state")->required();
  observables->add_option("--phase", phase, "phase of the sqrt(|k|) kernel");
  observables->add_option("--out", out_path, "output CSV (default <out-dir>/profiles.csv)");
  observables->add_option("--scenario", scenario_path, "take units from this scenario");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInvalid;
  }

  try {
    if (*run) {
      const scenario::Scenario s = scenario::load_scenario(scenario_path);
      scenario::RunOptions opts;
      opts.out_dir = common.resolved_out_dir();
      opts.threads = common.threads;
      opts.on_warning = [&](const scenario::Warning& w) { emit_warning(w, common.strict); };
      const scenario::RunResult r = scenario::run_scenario(s, opts);
      for (const fs::path& f : r.files) std::cout << f.string() << '\n';
      return 0;
    }
    if (*check) {
      const scenario::Scenario s = scenario::load_scenario(scenario_path);
      const auto rows = scenario::check_scenario(s);
      bool ok = true;
      std::printf("%-22s %-12s %-10s %s\n", "gate", "value", "tolerance", "result");
      for (const auto& row : rows) {
        std::printf("%-22s %-12.3e %-10.1e %s%s%s\n", row.gate.c_str(), row.value, row.tolerance,
                    row.passed ? "PASS" : "FAIL", row.note.empty() ? "" : "  ", row.note.c_str());
        ok = ok && row.passed;
      }
      return ok ? 0 : kFailed;
    }
    if (*propagate) {
      const AmplitudeField in = load_state(state_path);
      if (in.representation() != Representation::Momentum) {
        throw RepresentationMismatch("propagate needs a momentum state");
      }
      const fs::path out = output_path(out_path, common, "state.bin");
      save_state(out, evolve_free(in, time, units_from(scenario_path)));
      std::cout << out.string() << '\n';
      return 0;
    }
    if (*scatter) {
      const AmplitudeField in = load_state(state_path);
      const MirrorKernel k = kernel.load(in.grid());
      const fs::path out = output_path(out_path, common, "state.bin");
      save_state(out, apply_scattering(in, xi_spectrum(k, units_from(scenario_path))));
      std::cout << out.string() << '\n';
      return 0;
    }
    if (*spectrum) {
      std::optional<Grid> grid;
      if (!scenario_path.empty() && kernel.csv.empty() && kernel.dense.empty()) {
        const scenario::Scenario s = scenario::load_scenario(scenario_path);
        const fs::path out = output_path(out_path, common, "spectrum.csv");
        std::ofstream f(out);
        write_spectrum_csv(f, xi_spectrum(scenario::build_mirror(s), s.units));
        std::cout << out.string() << '\n';
        return 0;
      }
      const MirrorKernel k = kernel.load(grid);
      const fs::path out = output_path(out_path, common, "spectrum.csv");
      std::ofstream f(out);
      write_spectrum_csv(f, xi_spectrum(k, units_from(scenario_path)));
      std::cout << out.string() << '\n';
      return 0;
    }
    if (*mirror) {
      const AmplitudeField in = load_state(state_path);
      const MirrorKernel k = kernel.load(in.grid());
      MirrorEvolveOptions opts;
      opts.steps = steps;
      opts.integrator = integrator == "rk4"           ? MirrorIntegrator::RungeKutta4
                        : integrator == "closed_form" ? MirrorIntegrator::ClosedForm
                                                      : MirrorIntegrator::Auto;
      const bool momentum = in.representation() == Representation::Momentum;
      const AmplitudeField pos = momentum ? to_position(in, KernelSpec::flat()) : in;
      AmplitudeField result = evolve_mirror(pos, k, units_from(scenario_path), t_start, t_end, opts);
      if (momentum) result = to_momentum(result);
      const fs::path out = output_path(out_path, common, "state.bin");
      save_state(out, result);
      std::cout << out.string() << '\n';
      return 0;
    }
    if (*observables) {
      const AmplitudeField in = load_state(state_path);
      const KernelSpec kernel_spec = KernelSpec::sqrt_abs_k(phase);
      const AmplitudeField momentum =
          in.representation() == Representation::Momentum ? in : to_momentum(in);
      const UnitSystem units = units_from(scenario_path);
      const MaxwellReport mx = maxwell_residual(momentum, units, 0.01 * momentum.grid().dx() / units.c,
                                                kernel_spec);
      if (mx.band_edge) {
        emit_warning({"band_edge", state_path, 0.0,
                      "weight beyond 0.8 k_max " + std::to_string(mx.band_edge_fraction)},
                     common.strict);
      }
      const fs::path out = output_path(out_path, common, "profiles.csv");
      std::ofstream f(out);
      write_profiles_csv(f, field_profiles(to_position(momentum, kernel_spec), units), units, kernel_spec);
      std::printf("E_total %.17g\nE_right %.17g\nE_left %.17g\n",
                  energy_total(momentum, kernel_spec, units),
                  energy_of_direction(momentum, kernel_spec, units, Direction::Right),
                  energy_of_direction(momentum, kernel_spec, units, Direction::Left));
      std::cout << out.string() << '\n';
      return 0;
    }
  } catch (const StrictAbort&) {
    std::cerr << "locfield: aborted by --strict\n";
    return kFailed;
  } catch (const scenario::SchemaError& e) {
    std::cerr << e.what() << '\n';
    return kInvalid;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kInvalid;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
  return kInvalid;
}
