#include "locfield/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "locfield/errors.hpp"

namespace locfield {

static_assert(std::endian::native == std::endian::little,
              "binary formats are written in host order and assume little-endian");

namespace {

using nlohmann::json;

constexpr char kMagic[4] = {'L', 'F', 'L', 'D'};
constexpr std::uint32_t kVersion = 1;

std::string rep_name(Representation r) {
  return r == Representation::Momentum ? "momentum" : "position";
}
std::string basis_name(PolarizationBasis b) {
  return b == PolarizationBasis::Linear ? "linear" : "circular";
}
std::string interp_name(Interpretation i) {
  return i == Interpretation::CoherentAmplitude ? "coherent" : "single_excitation";
}

Representation parse_rep(const std::string& s) {
  if (s == "momentum") return Representation::Momentum;
  if (s == "position") return Representation::Position;
  throw FormatError("unknown representation '" + s + "'");
}
PolarizationBasis parse_basis(const std::string& s) {
  if (s == "linear") return PolarizationBasis::Linear;
  if (s == "circular") return PolarizationBasis::Circular;
  throw FormatError("unknown polarization basis '" + s + "'");
}
Interpretation parse_interp(const std::string& s) {
  if (s == "coherent") return Interpretation::CoherentAmplitude;
  if (s == "single_excitation") return Interpretation::SingleExcitation;
  throw FormatError("unknown interpretation '" + s + "'");
}

KernelSpec make_kernel(KernelKind kind, double phase) {
  switch (kind) {
    case KernelKind::Flat: return KernelSpec::flat(phase);
    case KernelKind::SqrtAbsK: return KernelSpec::sqrt_abs_k(phase);
    case KernelKind::StandardPositiveOnly: return KernelSpec::standard_positive_only();
  }
  throw FormatError("unknown kernel kind");
}

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw FormatError("truncated binary file");
  return v;
}

Grid grid_from_header(std::uint64_t n, double dx) {
  try {
    return make_grid(static_cast<std::size_t>(n), dx);
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("bad grid in header: ") + e.what());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// State files
// ---------------------------------------------------------------------------

void write_state_ndjson(std::ostream& out, const AmplitudeField& field) {
  const json header = {{"format", "locfield-state"},
                       {"version", kVersion},
                       {"n", field.size()},
                       {"dx", field.grid().dx()},
                       {"representation", rep_name(field.representation())},
                       {"kernel", std::string(to_string(field.kernel().kind))},
                       {"phase", field.kernel().phase},
                       {"basis", basis_name(field.basis())},
                       {"interpretation", interp_name(field.interpretation())}};
  out << header.dump() << '\n';
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    auto chan = field.channel(c);
    for (std::size_t j = 0; j < chan.size(); ++j) {
      const json rec = {{"channel", c}, {"index", j}, {"re", chan[j].real()}, {"im", chan[j].imag()}};
      out << rec.dump() << '\n';
    }
  }
}

AmplitudeField read_state_ndjson(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  auto parse = [&]() {
    try {
      return json::parse(line);
    } catch (const json::exception& e) {
      throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
    }
  };
  if (!next()) throw FormatError("empty state file");
  AmplitudeField field;
  std::vector<bool> seen;
  try {
    const json h = parse();
    if (h.value("format", "") != "locfield-state") throw FormatError("line 1: not a state header");
    if (h.at("version").get<std::uint32_t>() != kVersion) {
      throw FormatError("line 1: unsupported version");
    }
    const Grid grid = grid_from_header(h.at("n").get<std::uint64_t>(), h.at("dx").get<double>());
    const KernelSpec kernel = make_kernel(parse_kernel_kind(h.at("kernel").get<std::string>()),
                                          h.at("phase").get<double>());
    field = AmplitudeField(grid, parse_rep(h.at("representation").get<std::string>()), kernel,
                           parse_basis(h.at("basis").get<std::string>()),
                           parse_interp(h.at("interpretation").get<std::string>()));
    seen.assign(kChannelCount * grid.size(), false);
    while (next()) {
      const json rec = parse();
      const auto c = rec.at("channel").get<std::size_t>();
      const auto j = rec.at("index").get<std::size_t>();
      if (c >= kChannelCount || j >= grid.size()) {
        throw FormatError("line " + std::to_string(line_no) + ": record out of range");
      }
      field.channel(c)[j] = Complex{rec.at("re").get<double>(), rec.at("im").get<double>()};
      seen[c * grid.size() + j] = true;
    }
  } catch (const json::exception& e) {
    throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
  }
  for (bool s : seen) {
    if (!s) throw FormatError("state file is missing amplitude records");
  }
  return field;
}

void write_state_binary(std::ostream& out, const AmplitudeField& field) {
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kVersion);
  put<std::uint64_t>(out, field.size());
  put<double>(out, field.grid().dx());
  put<std::uint8_t>(out, static_cast<std::uint8_t>(field.representation()));
  put<std::uint8_t>(out, static_cast<std::uint8_t>(field.kernel().kind));
  put<std::uint8_t>(out, static_cast<std::uint8_t>(field.basis()));
  put<std::uint8_t>(out, static_cast<std::uint8_t>(field.interpretation()));
  put<double>(out, field.kernel().phase);
  for (const Complex& v : field.data()) {
    put<double>(out, v.real());
    put<double>(out, v.imag());
  }
}

AmplitudeField read_state_binary(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError("not a binary state file");
  }
  if (get<std::uint32_t>(in) != kVersion) throw FormatError("unsupported binary version");
  const auto n = get<std::uint64_t>(in);
  const auto dx = get<double>(in);
  const auto rep = get<std::uint8_t>(in);
  const auto kind = get<std::uint8_t>(in);
  const auto basis = get<std::uint8_t>(in);
  const auto interp = get<std::uint8_t>(in);
  const auto phase = get<double>(in);
  if (rep > 1 || kind > 2 || basis > 1 || interp > 1) throw FormatError("bad tag in header");
  KernelSpec kernel;
  try {
    kernel = make_kernel(static_cast<KernelKind>(kind), phase);
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("bad kernel in header: ") + e.what());
  }
  AmplitudeField field(grid_from_header(n, dx), static_cast<Representation>(rep), kernel,
                       static_cast<PolarizationBasis>(basis), static_cast<Interpretation>(interp));
  for (Complex& v : field.data()) {
    const double re = get<double>(in);
    const double im = get<double>(in);
    v = Complex{re, im};
  }
  return field;
}

namespace {
bool is_text_state(const std::filesystem::path& path) {
  const auto ext = path.extension();
  return ext == ".ndjson" || ext == ".jsonl";
}
}  // namespace

void save_state(const std::filesystem::path& path, const AmplitudeField& field) {
  const bool text = is_text_state(path);
  std::ofstream out(path, text ? std::ios::out : std::ios::out | std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  if (text) {
    write_state_ndjson(out, field);
  } else {
    write_state_binary(out, field);
  }
  if (!out) throw FormatError("write failed: " + path.string());
}

AmplitudeField load_state(const std::filesystem::path& path) {
  const bool text = is_text_state(path);
  std::ifstream in(path, text ? std::ios::in : std::ios::in | std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return text ? read_state_ndjson(in) : read_state_binary(in);
}

// ---------------------------------------------------------------------------
// Mirror kernels
// ---------------------------------------------------------------------------

MirrorKernel read_separable_kernel_csv(std::istream& in, const Grid& grid) {
  std::vector<double> omega(grid.size(), 0.0);
  std::string line;
  std::size_t line_no = 0;
  bool any = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw FormatError("line " + std::to_string(line_no) + ": expected 'x,omega'");
    }
    double x = 0.0, w = 0.0;
    std::istringstream xs(line.substr(0, comma)), ws(line.substr(comma + 1));
    if (!(xs >> x) || !(ws >> w)) {
      if (!any) continue;  // header row
      throw FormatError("line " + std::to_string(line_no) + ": not a number");
    }
    any = true;
    std::size_t j = 0;
    try {
      j = grid.nearest_x_index(x);
    } catch (const InvalidArgument&) {
      throw FormatError("line " + std::to_string(line_no) + ": x outside the grid");
    }
    if (std::abs(grid.x(j) - x) > 1e-9 * grid.dx()) {
      throw FormatError("line " + std::to_string(line_no) + ": x is not a lattice site");
    }
    omega[j] = w;
  }
  try {
    return MirrorKernel::separable(grid, std::move(omega));
  } catch (const InvalidArgument& e) {
    throw FormatError(e.what());
  }
}

void write_separable_kernel_csv(std::ostream& out, const MirrorKernel& kernel) {
  const auto& sep = kernel.as_separable();
  out << "x,omega\n" << std::setprecision(17);
  for (std::size_t j = sep.begin; j < sep.end; ++j) {
    out << kernel.grid().x(j) << ',' << sep.omega[j] << '\n';
  }
}

MirrorKernel read_dense_kernel_binary(std::istream& in) {
  const auto n = get<std::uint64_t>(in);
  const auto dx = get<double>(in);
  const Grid grid = grid_from_header(n, dx);
  std::vector<double> matrix(grid.size() * grid.size());
  for (double& v : matrix) v = get<double>(in);
  try {
    return MirrorKernel::dense(grid, matrix);
  } catch (const InvalidArgument& e) {
    throw FormatError(e.what());
  }
}

void write_dense_kernel_binary(std::ostream& out, const MirrorKernel& kernel) {
  const MirrorKernel dense = kernel.to_dense();
  const DenseKernel& d = dense.as_dense();
  const auto n = static_cast<long>(kernel.grid().size());
  put<std::uint64_t>(out, static_cast<std::uint64_t>(n));
  put<double>(out, kernel.grid().dx());
  for (long r = 0; r < n; ++r) {
    for (long c = 0; c < n; ++c) put<double>(out, d.at(r, c));
  }
}

}  // namespace locfield
