#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "locfield/field_state.hpp"
#include "locfield/mirror.hpp"
#include "locfield/units.hpp"

namespace locfield::scenario {

/// Invalid scenario file. what() is already "file:line:column: message".
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PacketShape { Gaussian, BandFlat };

struct PacketSpec {
  std::string name;
  PacketShape shape = PacketShape::Gaussian;
  Direction direction = Direction::Right;
  Polarization polarization = kH;
  PolarizationBasis basis = PolarizationBasis::Linear;
  double center = 0.0;
  double width = 1.0;    // gaussian only
  double carrier = 0.0;  // gaussian only
  Complex amplitude{1.0, 0.0};
};

enum class MirrorShape { Gaussian, Box, SeparableCsv, DenseBinary };

struct MirrorSpec {
  MirrorShape shape = MirrorShape::Gaussian;
  double width = 0.0;
  std::size_t half_cells = 0;
  double angle = 0.0;
  std::filesystem::path file;  // resolved against the scenario directory
};

enum class StepKind { Free, Scatter, Mirror, Snapshot };

struct Step {
  StepKind kind = StepKind::Snapshot;
  double duration = 0.0;
  std::string label;
  MirrorEvolveOptions mirror;
};

enum class StateFormat { Binary, Ndjson, None };

struct OutputSpec {
  bool ledger = true;
  bool profiles = true;
  bool spectrum = true;
  StateFormat states = StateFormat::Binary;
};

struct CheckSpec {
  double horizon = 0.0;
  std::size_t steps = 0;
};

struct Scenario {
  std::string origin;  // file name used in messages
  std::string name;
  Grid grid;
  UnitSystem units;
  double kernel_phase = 0.0;  // phase of the sqrt(|k|) kernel used for profiles and energies
  std::vector<PacketSpec> packets;
  std::optional<MirrorSpec> mirror;
  std::vector<Step> schedule;
  OutputSpec output;
  std::optional<CheckSpec> check;
};

Scenario load_scenario(const std::filesystem::path& path);
/// `origin` names the source in error messages; relative kernel files resolve against `base_dir`.
Scenario parse_scenario(std::string_view text, const std::string& origin,
                        const std::filesystem::path& base_dir);

/// Builds the mirror kernel; throws FormatError for unreadable kernel files.
MirrorKernel build_mirror(const Scenario& scenario);

struct Warning {
  std::string kind;  // "wrap_around", "band_edge", "off_lattice_center"
  std::string label;
  double time = 0.0;
  std::string detail;
};

/// One JSON object, no trailing newline.
std::string warning_json(const Warning& warning);

struct LedgerRow {
  std::size_t snapshot = 0;
  std::string label;
  double time = 0.0;
  std::string packet;  // packet name, or "total"
  double energy = 0.0, energy_right = 0.0, energy_left = 0.0;
  double reflected_fraction = 0.0;
  std::optional<double> interference;  // total rows only: E(total) - sum E(packet)
};

struct SnapshotSummary {
  std::string label;
  double time = 0.0;
  double superposition_error = 0.0;  // max |total - sum of single-packet runs|
  double superposition_scale = 0.0;  // max |total|
};

struct RunOptions {
  std::filesystem::path out_dir = "out";
  unsigned threads = 1;
  /// Called in deterministic order; may throw to abort the run.
  std::function<void(const Warning&)> on_warning;
};

struct RunResult {
  std::vector<LedgerRow> ledger;
  std::vector<SnapshotSummary> snapshots;
  std::vector<Warning> warnings;
  std::vector<std::filesystem::path> files;
};

/// Runs the schedule in the Schroedinger picture; mirror windows and scattering
/// events are applied to the interaction-picture state and converted back.
/// Every packet is also evolved on its own so the ledger can attribute energy
/// and the superposition error can be reported.
RunResult run_scenario(const Scenario& scenario, const RunOptions& options);

struct CheckRow {
  std::string gate;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string note;
};

/// Scattering-equivalence and self-consistency gates on the initial state.
std::vector<CheckRow> check_scenario(const Scenario& scenario);

/// Total initial state (momentum, linear basis) and the per-packet pieces.
std::vector<AmplitudeField> initial_packets(const Scenario& scenario,
                                            std::vector<Warning>* warnings = nullptr);

}  // namespace locfield::scenario
