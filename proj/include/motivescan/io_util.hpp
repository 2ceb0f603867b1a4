#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace motivescan {

// --- number <-> text ------------------------------------------------------

// Shortest decimal string that round-trips to exactly the same double
// (std::to_chars with no precision argument). Used everywhere we persist
// floating point so that re-reading a file reproduces bit-identical values.
std::string format_double(double value);

// Fixed-precision formatting for report columns (always includes the point,
// e.g. 3 -> "12.345").
std::string format_fixed(double value, int precision);

// Strict parsers: the whole string must be consumed, else MotiveError.
double parse_double(std::string_view text, std::string_view what);
long long parse_int(std::string_view text, std::string_view what);

// --- small string helpers ---------------------------------------------------

std::vector<std::string> split(std::string_view text, char sep);
std::vector<std::string> split_whitespace(std::string_view text);
std::string_view trim(std::string_view text);
bool starts_with(std::string_view text, std::string_view prefix);

// --- files ------------------------------------------------------------------

std::string read_file(const std::string& path);
std::vector<std::string> read_lines(const std::string& path);

// Writes a file atomically: the content goes to "<path>.tmp.<pid>" first and
// is renamed over the target only after a successful flush, so a crash or
// error never leaves a half-written artifact behind.
void write_file_atomic(const std::string& path, const std::string& content);

// --- fingerprints -----------------------------------------------------------

// FNV-1a 64-bit over a byte string. Stable across platforms; used to
// fingerprint model checkpoints and lexicon files so reports can verify that
// two runs used the same artifacts.
std::uint64_t fnv1a64(std::string_view bytes);
std::string fingerprint_hex(std::uint64_t fp);

}  // namespace motivescan
