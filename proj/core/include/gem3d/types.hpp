#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace gem3d {

/// 4-bit matrix element as stored in one array word.
class Nibble {
 public:
  static constexpr std::uint8_t kMax = 15;

  constexpr Nibble() = default;
  /// Throws SimError(Range) if value > 15.
  explicit Nibble(unsigned value);

  constexpr std::uint8_t value() const noexcept { return value_; }
  constexpr bool bit(unsigned position) const noexcept {
    return ((value_ >> position) & 1u) != 0;
  }

  friend constexpr auto operator<=>(Nibble, Nibble) = default;

 private:
  std::uint8_t value_ = 0;
};

/// 8-bit word of a layer-B MA-eDRAM cell group (LFSR state storage).
using Byte = std::uint8_t;

/// Row/column position inside a tile, zero-based.
struct Coord {
  std::size_t row = 0;
  std::size_t col = 0;

  friend constexpr auto operator<=>(const Coord&, const Coord&) = default;
};

enum class Layer { A_SRAM, B_EDRAM };

std::string_view to_string(Layer layer);

/// Dense row-major square grid.
template <typename T>
class Grid {
 public:
  Grid() = default;
  explicit Grid(std::size_t n, T fill = T{}) : n_(n), cells_(n * n, fill) {}

  std::size_t n() const noexcept { return n_; }

  T& operator()(std::size_t r, std::size_t c) { return cells_[r * n_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return cells_[r * n_ + c];
  }
  T& operator[](Coord at) { return (*this)(at.row, at.col); }
  const T& operator[](Coord at) const { return (*this)(at.row, at.col); }

  bool contains(Coord at) const noexcept { return at.row < n_ && at.col < n_; }

  auto begin() { return cells_.begin(); }
  auto end() { return cells_.end(); }
  auto begin() const { return cells_.begin(); }
  auto end() const { return cells_.end(); }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<T> cells_;
};

/// N x N matrix of 4-bit elements resident in one layer's subarray.
class MatrixTile {
 public:
  static constexpr std::size_t kMinN = 2;

  /// Zero-filled tile. Throws SimError(Shape) if n < 2.
  MatrixTile(std::size_t n, Layer layer);
  /// Throws SimError(Shape) for non-square or n < 2, SimError(Range) for
  /// elements above 15.
  MatrixTile(const std::vector<std::vector<unsigned>>& rows, Layer layer);

  std::size_t n() const noexcept { return elems_.n(); }
  Layer layer() const noexcept { return layer_; }
  void set_layer(Layer layer) noexcept { layer_ = layer; }

  Nibble at(std::size_t r, std::size_t c) const { return elems_(r, c); }
  Nibble operator[](Coord at) const { return elems_[at]; }
  void set(Coord at, Nibble value) { elems_[at] = value; }

  const Grid<Nibble>& elems() const noexcept { return elems_; }

  /// Element-wise equality, ignoring the layer tag.
  bool same_values(const MatrixTile& other) const { return elems_ == other.elems_; }

  friend bool operator==(const MatrixTile&, const MatrixTile&) = default;

 private:
  Grid<Nibble> elems_;
  Layer layer_;
};

MatrixTile transposed(const MatrixTile& tile);

enum class AnalogSource { DAC, MUL, ADD };

std::string_view to_string(AnalogSource source);

/// Normalized analog level, 0 = ground, 1 = full scale of the producing
/// stage. noise_sigma records the standard deviation that was applied
/// (0 for a noiseless sample).
struct AnalogSample {
  double level = 0.0;
  double noise_sigma = 0.0;
  AnalogSource source = AnalogSource::DAC;
  bool noise_applied = false;
};

double clamp_unit(double level);

}  // namespace gem3d
