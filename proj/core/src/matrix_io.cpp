#include "gem3d/matrix_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "gem3d/errors.hpp"

namespace gem3d {

namespace {

bool is_skippable(std::string_view line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string_view::npos || line[first] == '#';
}

std::vector<std::uint64_t> parse_row(std::string_view line, std::size_t line_no) {
  std::vector<std::uint64_t> row;
  std::size_t pos = 0;
  while (pos < line.size()) {
    pos = line.find_first_not_of(" \t\r", pos);
    if (pos == std::string_view::npos) break;
    std::size_t end = line.find_first_of(" \t\r", pos);
    if (end == std::string_view::npos) end = line.size();
    const std::string_view token = line.substr(pos, end - pos);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec == std::errc::result_out_of_range) {
      throw SimError(ErrorKind::Range, "line " + std::to_string(line_no) + ": element '" +
                                           std::string(token) + "' out of range");
    }
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw SimError(ErrorKind::Parse, "line " + std::to_string(line_no) +
                                           ": malformed element '" + std::string(token) + "'");
    }
    row.push_back(value);
    pos = end;
  }
  return row;
}

}  // namespace

std::vector<std::vector<std::uint64_t>> parse_integer_rows(std::string_view text) {
  std::vector<std::vector<std::uint64_t>> rows;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    const std::string_view line = text.substr(start, end - start);
    if (!is_skippable(line)) rows.push_back(parse_row(line, line_no));
    start = end + 1;
  }
  return rows;
}

MatrixTile parse_matrix(std::string_view text, std::optional<std::size_t> expected_n,
                        Layer layer) {
  const auto raw = parse_integer_rows(text);
  std::vector<std::vector<unsigned>> rows;
  rows.reserve(raw.size());
  for (const auto& r : raw) {
    std::vector<unsigned> row;
    row.reserve(r.size());
    for (std::uint64_t v : r) {
      if (v > Nibble::kMax) {
        throw SimError(ErrorKind::Range,
                       "element " + std::to_string(v) + " exceeds 4-bit range 0..15");
      }
      row.push_back(static_cast<unsigned>(v));
    }
    rows.push_back(std::move(row));
  }
  if (expected_n && rows.size() != *expected_n) {
    throw SimError(ErrorKind::Shape, "matrix has " + std::to_string(rows.size()) +
                                         " rows, expected n=" + std::to_string(*expected_n));
  }
  return MatrixTile(rows, layer);
}

MatrixTile load_matrix(const std::filesystem::path& path,
                       std::optional<std::size_t> expected_n, Layer layer) {
  return parse_matrix(read_text_file(path), expected_n, layer);
}

std::string format_matrix(const MatrixTile& tile, std::string_view header) {
  std::vector<std::vector<std::uint64_t>> rows(tile.n());
  for (std::size_t r = 0; r < tile.n(); ++r) {
    for (std::size_t c = 0; c < tile.n(); ++c) rows[r].push_back(tile.at(r, c).value());
  }
  return format_rows(rows, header);
}

std::string format_rows(const std::vector<std::vector<std::uint64_t>>& rows,
                        std::string_view header) {
  std::string out;
  if (!header.empty()) {
    if (header.front() != '#') out += "# ";
    out += header;
    out += '\n';
  }
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ' ';
      out += std::to_string(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::vector<std::vector<unsigned>> pad_to_square(std::vector<std::vector<unsigned>> rows) {
  std::size_t cols = 0;
  for (const auto& r : rows) cols = std::max(cols, r.size());
  const std::size_t n = std::max(rows.size(), cols);
  rows.resize(n);
  for (auto& r : rows) r.resize(n, 0u);
  return rows;
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SimError(ErrorKind::Io, "cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw SimError(ErrorKind::Io, "failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SimError(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace gem3d
