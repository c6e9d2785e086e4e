#include "gem3d/types.hpp"

#include <algorithm>
#include <string>

#include "gem3d/errors.hpp"

namespace gem3d {

Nibble::Nibble(unsigned value) {
  if (value > kMax) {
    throw SimError(ErrorKind::Range,
                   "element " + std::to_string(value) + " exceeds 4-bit range 0..15");
  }
  value_ = static_cast<std::uint8_t>(value);
}

std::string_view to_string(Layer layer) {
  return layer == Layer::A_SRAM ? "A_SRAM" : "B_EDRAM";
}

std::string_view to_string(AnalogSource source) {
  switch (source) {
    case AnalogSource::DAC: return "DAC";
    case AnalogSource::MUL: return "MUL";
    case AnalogSource::ADD: return "ADD";
  }
  return "?";
}

MatrixTile::MatrixTile(std::size_t n, Layer layer) : elems_(n), layer_(layer) {
  if (n < kMinN) {
    throw SimError(ErrorKind::Shape,
                   "tile dimension " + std::to_string(n) + " is below the minimum of 2");
  }
}

MatrixTile::MatrixTile(const std::vector<std::vector<unsigned>>& rows, Layer layer)
    : elems_(rows.size()), layer_(layer) {
  const std::size_t n = rows.size();
  if (n < kMinN) {
    throw SimError(ErrorKind::Shape,
                   "tile dimension " + std::to_string(n) + " is below the minimum of 2");
  }
  for (std::size_t r = 0; r < n; ++r) {
    if (rows[r].size() != n) {
      throw SimError(ErrorKind::Shape, "row " + std::to_string(r) + " has " +
                                           std::to_string(rows[r].size()) +
                                           " elements, expected " + std::to_string(n));
    }
    for (std::size_t c = 0; c < n; ++c) {
      elems_(r, c) = Nibble(rows[r][c]);
    }
  }
}

MatrixTile transposed(const MatrixTile& tile) {
  MatrixTile out(tile.n(), tile.layer());
  for (std::size_t r = 0; r < tile.n(); ++r) {
    for (std::size_t c = 0; c < tile.n(); ++c) out.set({c, r}, tile.at(r, c));
  }
  return out;
}

double clamp_unit(double level) { return std::clamp(level, 0.0, 1.0); }

}  // namespace gem3d
