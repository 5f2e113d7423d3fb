#pragma once

#include <filesystem>
#include <iosfwd>

#include "locfield/field_state.hpp"
#include "locfield/mirror.hpp"

namespace locfield {

// State files.
//
// NDJSON: one header object
//   {"format":"locfield-state","version":1,"n":..,"dx":..,"representation":..,
//    "kernel":..,"phase":..,"basis":..,"interpretation":..}
// followed by one {"channel":c,"index":j,"re":..,"im":..} record per amplitude,
// channels ordered as in AmplitudeField storage.
//
// Binary (little-endian):
//   char[4] "LFLD" | u32 version | u64 n | f64 dx | u8 representation | u8 kernel
//   | u8 basis | u8 interpretation | f64 phase | 4 n x (f64 re, f64 im)
void write_state_ndjson(std::ostream& out, const AmplitudeField& field);
AmplitudeField read_state_ndjson(std::istream& in);
void write_state_binary(std::ostream& out, const AmplitudeField& field);
AmplitudeField read_state_binary(std::istream& in);

/// Dispatch on extension: ".ndjson"/".jsonl" text, anything else binary.
void save_state(const std::filesystem::path& path, const AmplitudeField& field);
AmplitudeField load_state(const std::filesystem::path& path);

/// Separable kernel as CSV rows "x,omega" (optional header line, '#' comments).
/// Every x must sit on a lattice site within 1e-9 dx; unlisted sites are zero.
MirrorKernel read_separable_kernel_csv(std::istream& in, const Grid& grid);
void write_separable_kernel_csv(std::ostream& out, const MirrorKernel& kernel);

/// Dense kernel: u64 n | f64 dx | n x n f64 row-major, little-endian.
MirrorKernel read_dense_kernel_binary(std::istream& in);
void write_dense_kernel_binary(std::ostream& out, const MirrorKernel& kernel);

}  // namespace locfield
