#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fdmimo::io {

/// Writes to `<path>.tmp` and renames over `path`, so readers never observe a
/// half-written file.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view contents);

std::string read_file(const std::filesystem::path& path);

/// Little-endian float64 packing regardless of host byte order.
std::string pack_f64le(std::span<const double> values);
std::vector<double> unpack_f64le(std::string_view bytes);

/// Shortest round-trip decimal form; stable across runs.
std::string format_double(double v);

}  // namespace fdmimo::io
