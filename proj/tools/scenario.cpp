#include "scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>
#include <toml.hpp>

#include "locfield/errors.hpp"
#include "locfield/io.hpp"
#include "locfield/observables.hpp"
#include "locfield/propagation.hpp"
#include "locfield/transforms.hpp"

namespace locfield::scenario {
namespace {

namespace fs = std::filesystem;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------- schema

class Reader {
 public:
  Reader(std::string origin, fs::path base) : origin_(std::move(origin)), base_(std::move(base)) {}

  [[noreturn]] void fail(const toml::source_region& at, const std::string& message) const {
    std::ostringstream out;
    out << origin_ << ':' << at.begin.line << ':' << at.begin.column << ": " << message;
    throw SchemaError(out.str());
  }

  void only_keys(const toml::table& t, std::initializer_list<std::string_view> allowed,
                 std::string_view section) const {
    for (auto&& [key, node] : t) {
      if (std::find(allowed.begin(), allowed.end(), key.str()) == allowed.end()) {
        fail(node.source(), "unknown key '" + std::string(key.str()) + "' in " +
                                std::string(section));
      }
    }
  }

  const toml::table* table(const toml::table& parent, std::string_view key) const {
    const toml::node* n = parent.get(key);
    if (n == nullptr) return nullptr;
    if (!n->is_table()) fail(n->source(), "'" + std::string(key) + "' must be a table");
    return n->as_table();
  }

  std::vector<const toml::table*> tables(const toml::table& parent, std::string_view key) const {
    std::vector<const toml::table*> out;
    const toml::node* n = parent.get(key);
    if (n == nullptr) return out;
    const toml::array* arr = n->as_array();
    if (arr == nullptr) fail(n->source(), "'" + std::string(key) + "' must be an array of tables");
    for (const toml::node& item : *arr) {
      if (!item.is_table()) fail(item.source(), "entries of '" + std::string(key) + "' must be tables");
      out.push_back(item.as_table());
    }
    return out;
  }

  double number(const toml::table& t, std::string_view key, std::optional<double> fallback,
                std::string_view section) const {
    const toml::node* n = t.get(key);
    if (n == nullptr) {
      if (fallback) return *fallback;
      fail(t.source(), "missing key '" + std::string(key) + "' in " + std::string(section));
    }
    double v = 0.0;
    if (const auto* f = n->as_floating_point()) {
      v = f->get();
    } else if (const auto* i = n->as_integer()) {
      v = static_cast<double>(i->get());
    } else {
      fail(n->source(), "'" + std::string(key) + "' must be a number");
    }
    if (!std::isfinite(v)) fail(n->source(), "'" + std::string(key) + "' must be finite");
    return v;
  }

  std::size_t count(const toml::table& t, std::string_view key, std::optional<std::size_t> fallback,
                    std::string_view section) const {
    const toml::node* n = t.get(key);
    if (n == nullptr) {
      if (fallback) return *fallback;
      fail(t.source(), "missing key '" + std::string(key) + "' in " + std::string(section));
    }
    const auto* i = n->as_integer();
    if (i == nullptr || i->get() < 0) {
      fail(n->source(), "'" + std::string(key) + "' must be a non-negative integer");
    }
    return static_cast<std::size_t>(i->get());
  }

  std::string text(const toml::table& t, std::string_view key, std::optional<std::string> fallback,
                   std::string_view section) const {
    const toml::node* n = t.get(key);
    if (n == nullptr) {
      if (fallback) return *fallback;
      fail(t.source(), "missing key '" + std::string(key) + "' in " + std::string(section));
    }
    const auto* s = n->as_string();
    if (s == nullptr) fail(n->source(), "'" + std::string(key) + "' must be a string");
    return s->get();
  }

  bool flag(const toml::table& t, std::string_view key, bool fallback) const {
    const toml::node* n = t.get(key);
    if (n == nullptr) return fallback;
    const auto* b = n->as_boolean();
    if (b == nullptr) fail(n->source(), "'" + std::string(key) + "' must be true or false");
    return b->get();
  }

  // Names end up in file names and CSV cells.
  std::string identifier(const toml::table& t, std::string_view key, std::string fallback,
                         std::string_view section) const {
    std::string s = text(t, key, fallback, section);
    const bool ok = !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    });
    if (!ok) fail(t.get(key)->source(), "'" + s + "' may only use letters, digits, '_', '-', '.'");
    return s;
  }

  fs::path resolve(const fs::path& p) const { return p.is_absolute() ? p : base_ / p; }

 private:
  std::string origin_;
  fs::path base_;
};

template <class T>
T choose(const Reader& r, const toml::table& t, std::string_view key, std::optional<std::string> fallback,
         std::string_view section, std::initializer_list<std::pair<std::string_view, T>> options) {
  const std::string value = r.text(t, key, std::move(fallback), section);
  for (const auto& [name, v] : options) {
    if (name == value) return v;
  }
  std::string allowed;
  for (const auto& [name, v] : options) allowed += (allowed.empty() ? "" : ", ") + std::string(name);
  r.fail(t.get(key)->source(), "'" + std::string(key) + "' must be one of: " + allowed);
}

PlacedPacket make_packet(const Grid& grid, const PacketSpec& p) {
  if (p.shape == PacketShape::BandFlat) {
    return band_flat_packet(grid, p.direction, p.polarization, p.center, p.amplitude, p.basis);
  }
  return {gaussian_packet(grid, p.direction, p.polarization, p.center, p.width, p.carrier,
                          p.amplitude, p.basis),
          p.center, false};
}

Complex read_amplitude(const Reader& r, const toml::table& t) {
  const toml::node* n = t.get("amplitude");
  if (n == nullptr) return {1.0, 0.0};
  if (const auto* arr = n->as_array()) {
    if (arr->size() != 2) r.fail(n->source(), "'amplitude' array must be [re, im]");
    double re = 0.0, im = 0.0;
    for (int i = 0; i < 2; ++i) {
      const toml::node& v = (*arr)[static_cast<std::size_t>(i)];
      if (!v.is_number()) r.fail(v.source(), "'amplitude' entries must be numbers");
      (i == 0 ? re : im) = v.value<double>().value();
    }
    return {re, im};
  }
  return {r.number(t, "amplitude", std::nullopt, "[[packet]]"), 0.0};
}

}  // namespace

// ---------------------------------------------------------------- loading

Scenario parse_scenario(std::string_view text, const std::string& origin, const fs::path& base_dir) {
  const Reader r(origin, base_dir);
  toml::table root;
  try {
    root = toml::parse(text, origin);
  } catch (const toml::parse_error& e) {
    r.fail(e.source(), std::string(e.description()));
  }
  r.only_keys(root, {"name", "grid", "units", "kernel", "packet", "mirror", "schedule", "output", "check"},
              "the top level");

  Scenario s;
  s.origin = origin;
  s.name = r.identifier(root, "name", "scenario", "the top level");

  const toml::table* grid = r.table(root, "grid");
  if (grid == nullptr) r.fail(root.source(), "missing [grid] table");
  r.only_keys(*grid, {"n", "dx"}, "[grid]");
  try {
    s.grid = make_grid(r.count(*grid, "n", std::nullopt, "[grid]"),
                       r.number(*grid, "dx", std::nullopt, "[grid]"));
  } catch (const InvalidArgument& e) {
    r.fail(grid->source(), e.what());
  }

  if (const toml::table* u = r.table(root, "units")) {
    r.only_keys(*u, {"hbar", "c", "epsilon", "mu", "area"}, "[units]");
    try {
      s.units = make_units(r.number(*u, "hbar", 1.0, "[units]"), r.number(*u, "c", 1.0, "[units]"),
                           r.number(*u, "epsilon", 1.0, "[units]"), r.number(*u, "mu", 1.0, "[units]"),
                           r.number(*u, "area", 1.0, "[units]"));
    } catch (const InvalidArgument& e) {
      r.fail(u->source(), e.what());
    }
  }

  if (const toml::table* k = r.table(root, "kernel")) {
    r.only_keys(*k, {"phase"}, "[kernel]");
    s.kernel_phase = r.number(*k, "phase", 0.0, "[kernel]");
  }

  std::set<std::string> names;
  for (const toml::table* t : r.tables(root, "packet")) {
    r.only_keys(*t, {"name", "shape", "direction", "polarization", "center", "width", "carrier", "amplitude"},
                "[[packet]]");
    PacketSpec p;
    p.name = r.identifier(*t, "name", "packet" + std::to_string(s.packets.size()), "[[packet]]");
    if (p.name == "total" || !names.insert(p.name).second) {
      r.fail(t->source(), "packet name '" + p.name + "' is reserved or already used");
    }
    p.shape = choose<PacketShape>(r, *t, "shape", "gaussian", "[[packet]]",
                                  {{"gaussian", PacketShape::Gaussian}, {"band_flat", PacketShape::BandFlat}});
    p.direction = choose<Direction>(r, *t, "direction", std::nullopt, "[[packet]]",
                                    {{"right", Direction::Right}, {"left", Direction::Left}});
    const auto [pol, basis] = choose<std::pair<Polarization, PolarizationBasis>>(
        r, *t, "polarization", "H", "[[packet]]",
        {{"H", {kH, PolarizationBasis::Linear}},
         {"V", {kV, PolarizationBasis::Linear}},
         {"+", {kPlus, PolarizationBasis::Circular}},
         {"-", {kMinus, PolarizationBasis::Circular}}});
    p.polarization = pol;
    p.basis = basis;
    p.center = r.number(*t, "center", std::nullopt, "[[packet]]");
    if (p.shape == PacketShape::Gaussian) {
      p.width = r.number(*t, "width", std::nullopt, "[[packet]]");
      p.carrier = r.number(*t, "carrier", 0.0, "[[packet]]");
    } else if (t->contains("width") || t->contains("carrier")) {
      r.fail(t->source(), "band_flat packets take no width or carrier");
    }
    p.amplitude = read_amplitude(r, *t);
    try {
      (void)make_packet(s.grid, p);
    } catch (const std::exception& e) {
      r.fail(t->source(), std::string("packet '") + p.name + "': " + e.what());
    }
    s.packets.push_back(std::move(p));
  }

  if (const toml::table* m = r.table(root, "mirror")) {
    MirrorSpec spec;
    spec.shape = choose<MirrorShape>(r, *m, "shape", std::nullopt, "[mirror]",
                                     {{"gaussian", MirrorShape::Gaussian},
                                      {"box", MirrorShape::Box},
                                      {"separable_csv", MirrorShape::SeparableCsv},
                                      {"dense_binary", MirrorShape::DenseBinary}});
    switch (spec.shape) {
      case MirrorShape::Gaussian:
        r.only_keys(*m, {"shape", "width", "half_cells", "angle"}, "[mirror]");
        spec.width = r.number(*m, "width", std::nullopt, "[mirror]");
        [[fallthrough]];
      case MirrorShape::Box:
        if (spec.shape == MirrorShape::Box) r.only_keys(*m, {"shape", "half_cells", "angle"}, "[mirror]");
        spec.half_cells = r.count(*m, "half_cells", std::nullopt, "[mirror]");
        spec.angle = r.number(*m, "angle", std::nullopt, "[mirror]");
        break;
      case MirrorShape::SeparableCsv:
      case MirrorShape::DenseBinary:
        r.only_keys(*m, {"shape", "file"}, "[mirror]");
        spec.file = r.resolve(r.text(*m, "file", std::nullopt, "[mirror]"));
        break;
    }
    s.mirror = spec;
    try {
      (void)build_mirror(s);
    } catch (const std::exception& e) {
      r.fail(m->source(), std::string("mirror: ") + e.what());
    }
  }

  std::set<std::string> labels{"initial"};
  for (const toml::table* t : r.tables(root, "schedule")) {
    Step step;
    step.kind = choose<StepKind>(r, *t, "action", std::nullopt, "[[schedule]]",
                                 {{"free", StepKind::Free},
                                  {"scatter", StepKind::Scatter},
                                  {"mirror", StepKind::Mirror},
                                  {"snapshot", StepKind::Snapshot}});
    switch (step.kind) {
      case StepKind::Free:
        r.only_keys(*t, {"action", "duration"}, "a free step");
        step.duration = r.number(*t, "duration", std::nullopt, "a free step");
        if (step.duration < 0.0) r.fail(t->source(), "durations must be non-negative");
        break;
      case StepKind::Scatter:
        r.only_keys(*t, {"action"}, "a scatter step");
        break;
      case StepKind::Mirror:
        r.only_keys(*t, {"action", "duration", "steps", "integrator"}, "a mirror step");
        step.duration = r.number(*t, "duration", std::nullopt, "a mirror step");
        if (!(step.duration > 0.0)) r.fail(t->source(), "mirror windows need a positive duration");
        step.mirror.steps = r.count(*t, "steps", 0, "a mirror step");
        step.mirror.integrator = choose<MirrorIntegrator>(
            r, *t, "integrator", "auto", "a mirror step",
            {{"auto", MirrorIntegrator::Auto},
             {"rk4", MirrorIntegrator::RungeKutta4},
             {"closed_form", MirrorIntegrator::ClosedForm}});
        break;
      case StepKind::Snapshot:
        r.only_keys(*t, {"action", "label"}, "a snapshot step");
        step.label = r.identifier(*t, "label", "snapshot" + std::to_string(s.schedule.size()),
                                  "a snapshot step");
        if (!labels.insert(step.label).second) {
          r.fail(t->source(), "snapshot label '" + step.label + "' is reserved or already used");
        }
        break;
    }
    if ((step.kind == StepKind::Scatter || step.kind == StepKind::Mirror) && !s.mirror) {
      r.fail(t->source(), "this step needs a [mirror] table");
    }
    if (step.kind == StepKind::Mirror && s.mirror) {
      const MirrorKernel k = build_mirror(s);
      if (step.mirror.integrator == MirrorIntegrator::ClosedForm && !k.is_separable()) {
        r.fail(t->source(), "closed_form needs a separable mirror");
      }
      if (step.mirror.steps != 0 &&
          step.mirror.steps < minimum_mirror_steps(k, s.units, step.duration)) {
        r.fail(t->get("steps")->source(),
               "steps below the stability minimum of " +
                   std::to_string(minimum_mirror_steps(k, s.units, step.duration)));
      }
    }
    s.schedule.push_back(std::move(step));
  }

  if (const toml::table* o = r.table(root, "output")) {
    r.only_keys(*o, {"ledger", "profiles", "spectrum", "states"}, "[output]");
    s.output.ledger = r.flag(*o, "ledger", true);
    s.output.profiles = r.flag(*o, "profiles", true);
    s.output.spectrum = r.flag(*o, "spectrum", true);
    s.output.states = choose<StateFormat>(r, *o, "states", "binary", "[output]",
                                          {{"binary", StateFormat::Binary},
                                           {"ndjson", StateFormat::Ndjson},
                                           {"none", StateFormat::None}});
  }

  if (const toml::table* c = r.table(root, "check")) {
    r.only_keys(*c, {"horizon", "steps"}, "[check]");
    CheckSpec check;
    check.horizon = r.number(*c, "horizon", std::nullopt, "[check]");
    if (!(check.horizon > 0.0)) r.fail(c->source(), "horizon must be positive");
    check.steps = r.count(*c, "steps", 0, "[check]");
    s.check = check;
  }
  return s;
}

Scenario load_scenario(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError(path.string() + ":0:0: cannot open scenario file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), path.string(), path.parent_path());
}

MirrorKernel build_mirror(const Scenario& s) {
  if (!s.mirror) throw InvalidArgument("scenario has no mirror");
  const MirrorSpec& m = *s.mirror;
  switch (m.shape) {
    case MirrorShape::Gaussian:
      return gaussian_mirror(s.grid, m.width, m.half_cells, m.angle, s.units);
    case MirrorShape::Box:
      return box_mirror(s.grid, m.half_cells, m.angle, s.units);
    case MirrorShape::SeparableCsv: {
      std::ifstream in(m.file);
      if (!in) throw FormatError("cannot open " + m.file.string());
      return read_separable_kernel_csv(in, s.grid);
    }
    case MirrorShape::DenseBinary: {
      std::ifstream in(m.file, std::ios::binary);
      if (!in) throw FormatError("cannot open " + m.file.string());
      MirrorKernel k = read_dense_kernel_binary(in);
      if (!(k.grid() == s.grid)) throw FormatError(m.file.string() + ": grid differs from [grid]");
      return k;
    }
  }
  throw InvalidArgument("unknown mirror shape");
}

std::string warning_json(const Warning& w) {
  const nlohmann::json j{{"warning", w.kind}, {"label", w.label}, {"time", w.time}, {"detail", w.detail}};
  return j.dump();
}

std::vector<AmplitudeField> initial_packets(const Scenario& s, std::vector<Warning>* warnings) {
  std::vector<AmplitudeField> out;
  for (const PacketSpec& p : s.packets) {
    PlacedPacket placed = make_packet(s.grid, p);
    if (placed.snapped && warnings != nullptr) {
      warnings->push_back({"off_lattice_center", p.name, 0.0,
                           "center " + num(p.center) + " placed at " + num(placed.center)});
    }
    out.push_back(to_linear(placed.field));
  }
  return out;
}

// ---------------------------------------------------------------- running

namespace {

struct Engine {
  const Scenario& s;
  std::optional<MirrorKernel> kernel;
  std::optional<ScatteringSpectrum> spectrum;

  // States at "initial" and at every snapshot step, Schroedinger picture.
  std::vector<AmplitudeField> run(AmplitudeField psi) const {
    std::vector<AmplitudeField> shots{psi};
    double t = 0.0;
    for (const Step& step : s.schedule) {
      switch (step.kind) {
        case StepKind::Free:
          psi = evolve_free(psi, step.duration, s.units);
          t += step.duration;
          break;
        case StepKind::Scatter:
          psi = evolve_free(apply_scattering(evolve_free(psi, -t, s.units), *spectrum), t, s.units);
          break;
        case StepKind::Mirror: {
          const AmplitudeField inter = to_position(evolve_free(psi, -t, s.units), KernelSpec::flat());
          const AmplitudeField out =
              evolve_mirror(inter, *kernel, s.units, t, t + step.duration, step.mirror);
          t += step.duration;
          psi = evolve_free(to_momentum(out), t, s.units);
          break;
        }
        case StepKind::Snapshot:
          shots.push_back(psi);
          break;
      }
    }
    return shots;
  }
};

template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& body) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned extra = std::min<std::size_t>(threads, count) > 1
                             ? static_cast<unsigned>(std::min<std::size_t>(threads, count)) - 1
                             : 0u;
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < extra; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double max_abs(std::span<const Complex> v) {
  double m = 0.0;
  for (const Complex& z : v) m = std::max(m, std::abs(z));
  return m;
}

// Periodic wrap: amplitude near either end of the box, relative to the peak.
double edge_ratio(const AmplitudeField& psi) {
  const AmplitudeField pos = to_position(psi, KernelSpec::flat());
  const std::size_t n = psi.size();
  const std::size_t edge = std::max<std::size_t>(4, n / 64);
  double peak = 0.0, at_edge = 0.0;
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    const auto chan = pos.channel(c);
    for (std::size_t j = 0; j < n; ++j) {
      const double a = std::abs(chan[j]);
      peak = std::max(peak, a);
      if (j < edge || j >= n - edge) at_edge = std::max(at_edge, a);
    }
  }
  return peak > 0.0 ? at_edge / peak : 0.0;
}

// Same rule as the Maxwell check: share of weight beyond 0.8 k_max.
double band_edge_fraction(const AmplitudeField& psi) {
  const Grid& g = psi.grid();
  double all = 0.0, edge = 0.0;
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    const auto chan = psi.channel(c);
    for (std::size_t m = 0; m < g.size(); ++m) {
      const double w = std::norm(chan[m]);
      all += w;
      if (std::abs(g.k(m)) > 0.8 * g.k_max()) edge += w;
    }
  }
  return all > 0.0 ? edge / all : 0.0;
}

std::string file_tag(std::size_t index, const std::string& label) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%03zu_", index);
  return buf + label;
}

}  // namespace

RunResult run_scenario(const Scenario& s, const RunOptions& options) {
  RunResult result;
  auto warn = [&](Warning w) {
    if (options.on_warning) options.on_warning(w);
    result.warnings.push_back(std::move(w));
  };

  std::vector<Warning> placement;
  const std::vector<AmplitudeField> packets = initial_packets(s, &placement);
  for (Warning& w : placement) warn(std::move(w));

  AmplitudeField total = AmplitudeField::momentum(s.grid);
  for (const AmplitudeField& p : packets) total += p;

  Engine engine{s, std::nullopt, std::nullopt};
  if (s.mirror) {
    engine.kernel = build_mirror(s);
    engine.spectrum = xi_spectrum(*engine.kernel, s.units);
  }

  // Job 0 is the full state; with several packets each one also runs alone.
  const std::size_t jobs = packets.size() > 1 ? packets.size() + 1 : 1;
  std::vector<std::vector<AmplitudeField>> shots(jobs);
  parallel_for(jobs, std::max(1u, options.threads),
               [&](std::size_t i) { shots[i] = engine.run(i == 0 ? total : packets[i - 1]); });

  std::vector<std::pair<std::string, double>> stamps{{"initial", 0.0}};
  double t = 0.0;
  for (const Step& step : s.schedule) {
    if (step.kind == StepKind::Free || step.kind == StepKind::Mirror) t += step.duration;
    if (step.kind == StepKind::Snapshot) stamps.emplace_back(step.label, t);
  }

  fs::create_directories(options.out_dir);
  const KernelSpec energy_kernel = KernelSpec::sqrt_abs_k(s.kernel_phase);
  std::vector<double> initial_energy(packets.size(), 0.0);

  for (std::size_t i = 0; i < stamps.size(); ++i) {
    const auto& [label, time] = stamps[i];
    const AmplitudeField& psi = shots[0][i];

    if (const double r = edge_ratio(psi); r > 1e-6) {
      warn({"wrap_around", label, time, "edge/peak amplitude " + num(r)});
    }
    if (const double f = band_edge_fraction(psi); f > 1e-6) {
      warn({"band_edge", label, time, "weight beyond 0.8 k_max " + num(f)});
    }

    LedgerRow row_total;
    row_total.snapshot = i;
    row_total.label = label;
    row_total.time = time;
    row_total.packet = "total";
    row_total.energy_right = energy_of_direction(psi, energy_kernel, s.units, Direction::Right);
    row_total.energy_left = energy_of_direction(psi, energy_kernel, s.units, Direction::Left);
    row_total.energy = row_total.energy_right + row_total.energy_left;

    AmplitudeField sum = psi.zeros_like();
    double sum_energy = 0.0, reflected = 0.0, incident = 0.0;
    std::vector<LedgerRow> rows;
    for (std::size_t p = 0; p < packets.size(); ++p) {
      const AmplitudeField& piece = jobs == 1 ? psi : shots[p + 1][i];
      sum += piece;
      LedgerRow row = row_total;
      row.packet = s.packets[p].name;
      row.energy_right = energy_of_direction(piece, energy_kernel, s.units, Direction::Right);
      row.energy_left = energy_of_direction(piece, energy_kernel, s.units, Direction::Left);
      row.energy = row.energy_right + row.energy_left;
      if (i == 0) initial_energy[p] = row.energy;
      const double back =
          s.packets[p].direction == Direction::Right ? row.energy_left : row.energy_right;
      row.reflected_fraction = initial_energy[p] > 0.0 ? back / initial_energy[p] : 0.0;
      sum_energy += row.energy;
      reflected += back;
      incident += initial_energy[p];
      rows.push_back(std::move(row));
    }
    row_total.reflected_fraction = incident > 0.0 ? reflected / incident : 0.0;
    row_total.interference = row_total.energy - sum_energy;
    result.ledger.push_back(row_total);
    for (LedgerRow& r : rows) result.ledger.push_back(std::move(r));

    AmplitudeField diff = psi;
    diff -= sum;
    result.snapshots.push_back({label, time, max_abs(diff.data()), max_abs(psi.data())});

    const std::string tag = file_tag(i, label);
    if (s.output.profiles) {
      const fs::path path = options.out_dir / (tag + "_profiles.csv");
      std::ofstream out(path);
      write_profiles_csv(out, field_profiles(to_position(psi, energy_kernel), s.units), s.units,
                         energy_kernel);
      result.files.push_back(path);
    }
    if (s.output.states != StateFormat::None) {
      const fs::path path =
          options.out_dir / (tag + (s.output.states == StateFormat::Ndjson ? "_state.ndjson" : "_state.bin"));
      save_state(path, psi);
      result.files.push_back(path);
    }
  }

  if (s.output.ledger) {
    const fs::path path = options.out_dir / "ledger.csv";
    std::ofstream out(path);
    out << "snapshot,label,time,packet,E_total,E_right,E_left,reflected_fraction,interference\n";
    for (const LedgerRow& r : result.ledger) {
      out << r.snapshot << ',' << r.label << ',' << num(r.time) << ',' << r.packet << ','
          << num(r.energy) << ',' << num(r.energy_right) << ',' << num(r.energy_left) << ','
          << num(r.reflected_fraction) << ',' << (r.interference ? num(*r.interference) : "") << '\n';
    }
    result.files.push_back(path);

    const fs::path sup = options.out_dir / "superposition.csv";
    std::ofstream out2(sup);
    out2 << "snapshot,label,time,max_abs_error,max_abs_total\n";
    for (std::size_t i = 0; i < result.snapshots.size(); ++i) {
      const SnapshotSummary& r = result.snapshots[i];
      out2 << i << ',' << r.label << ',' << num(r.time) << ',' << num(r.superposition_error) << ','
           << num(r.superposition_scale) << '\n';
    }
    result.files.push_back(sup);
  }
  if (s.output.spectrum && engine.spectrum) {
    const fs::path path = options.out_dir / "spectrum.csv";
    std::ofstream out(path);
    write_spectrum_csv(out, *engine.spectrum);
    result.files.push_back(path);
  }
  return result;
}

// ---------------------------------------------------------------- checks

std::vector<CheckRow> check_scenario(const Scenario& s) {
  if (!s.mirror) throw SchemaError(s.origin + ":1:1: check needs a [mirror] table");
  if (!s.check) throw SchemaError(s.origin + ":1:1: check needs a [check] table with a horizon");
  if (s.packets.empty()) throw SchemaError(s.origin + ":1:1: check needs at least one [[packet]]");

  std::vector<CheckRow> rows;
  const MirrorKernel kernel = build_mirror(s);
  const ScatteringSpectrum spectrum = xi_spectrum(kernel, s.units);

  double defect = 0.0;
  for (const Complex& xi : spectrum.xi) {
    const Unitary2 u = scattering_unitary(xi);
    const Complex g00 = std::conj(u.m00) * u.m00 + std::conj(u.m10) * u.m10 - 1.0;
    const Complex g01 = std::conj(u.m00) * u.m01 + std::conj(u.m10) * u.m11;
    const Complex g11 = std::conj(u.m01) * u.m01 + std::conj(u.m11) * u.m11 - 1.0;
    defect = std::max({defect, std::abs(g00), std::abs(g01), std::abs(g11)});
  }
  rows.push_back({"scattering_unitarity", defect, 1e-14, defect <= 1e-14, ""});

  AmplitudeField total = AmplitudeField::momentum(s.grid);
  for (const AmplitudeField& p : initial_packets(s)) total += p;

  MirrorEvolveOptions opts;
  opts.steps = s.check->steps;
  try {
    const EquivalenceReport r = scattering_equivalence_check(total, kernel, s.units, s.check->horizon, opts);
    rows.push_back({"scatter_vs_mirror", r.max_discrepancy, r.tolerance, r.passed(),
                    r.separable ? "" : "dense kernel: diagnostic only"});
    const double in = r.energy_in_right + r.energy_in_left;
    const double drift_s = std::abs(r.scatter_right + r.scatter_left - in) / in;
    const double drift_o = std::abs(r.ode_right + r.ode_left - in) / in;
    rows.push_back({"energy_after_scatter", drift_s, 1e-12, drift_s <= 1e-12, "relative"});
    rows.push_back({"energy_after_mirror", drift_o, 1e-6, drift_o <= 1e-6, "relative"});
  } catch (const PreconditionViolation& e) {
    rows.push_back({"scatter_vs_mirror", 0.0, 0.0, false, e.what()});
  }

  if (kernel.is_separable()) {
    const AmplitudeField pos = to_position(total, KernelSpec::flat());
    MirrorEvolveOptions closed{0, MirrorIntegrator::ClosedForm};
    MirrorEvolveOptions rk{std::max(s.check->steps, 4 * minimum_mirror_steps(kernel, s.units, s.check->horizon)),
                           MirrorIntegrator::RungeKutta4};
    const AmplitudeField a = evolve_mirror(pos, kernel, s.units, 0.0, s.check->horizon, closed);
    const AmplitudeField b = evolve_mirror(pos, kernel, s.units, 0.0, s.check->horizon, rk);
    const double d = max_abs_difference(a, b) / std::max(max_abs(pos.data()), 1e-300);
    rows.push_back({"closed_form_vs_rk4", d, 1e-6, d <= 1e-6, "relative to peak amplitude"});
  }
  return rows;
}

}  // namespace locfield::scenario
