#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace topcap {

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string_view trim(std::string_view s) noexcept;
std::vector<std::string_view> split(std::string_view s, char sep);

/// Parses the whole of `s` as a double; throws InvalidArgument otherwise.
/// Accepts "inf" / "-inf".
double parse_double(std::string_view s);
long long parse_int(std::string_view s);

/// %.17g formatting, with "inf" for +infinity.
std::string format_double(double x);

/// 64-bit FNV-1a; used for input fingerprints in run manifests.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::string hex64(std::uint64_t v);

}  // namespace topcap
