#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace xrp {

// FNV-1a, 64 bit. Used for config hashes and checkpoint checksums.
inline constexpr uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
inline constexpr uint64_t kFnvPrime = 0x100000001b3ULL;

inline uint64_t fnv1a64(std::string_view s, uint64_t h = kFnvOffset) {
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::string to_hex(uint64_t v, int digits = 16);

// Locale-independent numeric formatting (snprintf with the C numeric rules).
std::string fmt_double(double v, int precision);   // fixed, "%.*f"
std::string fmt_general(double v, int precision);  // shortest, "%.*g"

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::string read_text_file(const std::filesystem::path& path);

// Writes via a temp file in the same directory plus rename-into-place, so
// concurrent writers of the same target cannot interleave.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace xrp
