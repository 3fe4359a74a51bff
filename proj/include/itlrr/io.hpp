#pragma once

// On-disk formats.
//
// Cube file ("ITC1"):
//   bytes 0..3   magic "ITC1"
//   then         rows, cols, bands as uint64 little-endian
//   then         rows*cols*bands IEEE-754 binary64 little-endian values, band
//                fastest, then column, then row
// A text fallback with one "r,c,b,value" line per entry is accepted on read
// (dims are max index + 1; '#' lines are comments).
//
// Label file: CSV of non-negative integers, one line per image row, or
// "ITL1" + rows, cols as uint64 LE + rows*cols int32 LE labels.

#include "itlrr/cube.hpp"
#include "itlrr/regions.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace itlrr {

struct Decomposition;

[[nodiscard]] std::string encode_cube(const Cube& c);
[[nodiscard]] Cube decode_cube(std::string_view bytes);
[[nodiscard]] Cube parse_cube_csv(std::string_view text);

[[nodiscard]] Cube read_cube(const std::filesystem::path& path);
void write_cube(const std::filesystem::path& path, const Cube& c);

[[nodiscard]] std::string encode_labels_csv(const LabelMap& lm);
[[nodiscard]] std::string encode_labels_binary(const LabelMap& lm);
[[nodiscard]] LabelMap decode_labels(std::string_view bytes);

// Writes binary when the extension is ".itl", CSV otherwise.
void write_labels(const std::filesystem::path& path, const LabelMap& lm);

[[nodiscard]] std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

// "# converged=<bool> iterations=<n>" then "iter,residual,mu[,objective]" and one
// row per iteration. Values use %.17g.
[[nodiscard]] std::string encode_trace_csv(const Decomposition& d);

}  // namespace itlrr
