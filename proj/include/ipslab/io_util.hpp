#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ipslab {

// Formats with 17 significant digits so the value round-trips exactly.
std::string format_double(double v);

// FNV-1a 64-bit hash, used to fingerprint configs inside artifacts.
std::uint64_t fnv1a64(std::string_view data);

// 16 lowercase hex digits, zero padded.
std::string hash_hex(std::uint64_t h);

// Minimal CSV: plain comma-separated tokens with no quoting or escaping;
// callers must not put commas or newlines inside tokens. A nonempty stamp
// is written first as a '#' comment line; read_csv skips comment lines.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows,
               const std::string& stamp = "");
std::vector<std::vector<std::string>> read_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace ipslab
