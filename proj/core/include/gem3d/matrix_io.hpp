#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gem3d/types.hpp"

namespace gem3d {

// Matrix text format: one row per line, whitespace-separated decimal
// integers. Blank lines and lines starting with '#' are ignored.

/// Throws SimError(Parse) on malformed tokens, SimError(Range) on elements
/// above 15, SimError(Shape) if the matrix is not square or its dimension
/// differs from expected_n.
MatrixTile parse_matrix(std::string_view text, std::optional<std::size_t> expected_n,
                        Layer layer = Layer::A_SRAM);
MatrixTile load_matrix(const std::filesystem::path& path,
                       std::optional<std::size_t> expected_n, Layer layer = Layer::A_SRAM);

/// Unvalidated integer rows (used for count matrices and activation vectors).
std::vector<std::vector<std::uint64_t>> parse_integer_rows(std::string_view text);

std::string format_matrix(const MatrixTile& tile, std::string_view header = {});
std::string format_rows(const std::vector<std::vector<std::uint64_t>>& rows,
                        std::string_view header = {});

/// Zero-pads a rows x cols matrix to max(rows, cols) square.
std::vector<std::vector<unsigned>> pad_to_square(std::vector<std::vector<unsigned>> rows);

void write_text_file(const std::filesystem::path& path, std::string_view contents);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace gem3d
