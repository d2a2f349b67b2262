// Deterministic formatting, CSV primitives, atomic file writes.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace zipfian {

/// Shortest round-trip decimal form of a double, locale-independent.
/// Golden outputs depend on this being stable.
std::string format_double(double value);

double parse_double(std::string_view text);
std::int64_t parse_int64(std::string_view text);

/// RFC-4180-style quoting, applied only when the field needs it.
std::string csv_quote(std::string_view field);

/// Splits one CSV record honoring quoted fields. Throws ParseError on
/// unbalanced quotes; `line` is used for the error position.
std::vector<std::string> csv_split(std::string_view record, int line);

/// Splits text into lines, dropping a single trailing newline.
std::vector<std::string_view> split_lines(std::string_view text);

std::string read_file(const std::filesystem::path& path);

/// Writes via a temp file in the same directory plus rename, so an
/// interrupted run never leaves a partial file at the target path.
void atomic_write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace zipfian
