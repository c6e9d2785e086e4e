#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "gem3d/types.hpp"

namespace gem3d {

/// Which wordline runs along which axis.
///   ReadByColumn: RWL per column, WWL per row (T-SRAM, layer A).
///   ReadByRow:    RWL per row, WWL per column (T-eDRAM, layer B).
enum class WordlineOrientation { ReadByColumn, ReadByRow };

/// Connectivity model of a transposable crossbar.
///
/// Each cell (r,c) owns one segment of its row's horizontal R line and one
/// segment of the row's W line. Blocker 1 is the transmission gate between
/// horizontally adjacent segments (set at the left segment); when on it joins
/// both the R and W segments. Blocker 2 gates the cross wire that feeds the
/// W segment of (r,c) from the R segment of its mirror cell (c,r); it is
/// indexed by the destination cell and does not exist on the diagonal.
/// 3D bonds reach a cell's W node directly and bypass the segments.
///
/// A cycle is legal iff every connected net has at most one driver. A cell
/// whose WWL is asserted is written iff its W net has exactly one driver
/// (or a 3D bond delivers to it); an undriven W net leaves the cell alone.
class TransposeArray {
 public:
  TransposeArray(MatrixTile tile, WordlineOrientation orientation);
  virtual ~TransposeArray() = default;

  TransposeArray(const TransposeArray&) = default;
  TransposeArray& operator=(const TransposeArray&) = default;

  std::size_t n() const noexcept { return tile_.n(); }
  const MatrixTile& tile() const noexcept { return tile_; }
  WordlineOrientation orientation() const noexcept { return orientation_; }

  bool blocker1(Coord segment) const { return blocker1_[segment] != 0; }
  bool blocker2(Coord destination) const { return blocker2_[destination] != 0; }
  void set_blocker1(Coord segment, bool on);
  void set_blocker2(Coord destination, bool on);
  void set_all_blockers(bool blocker1_on, bool blocker2_on);

  /// Index of the RWL / WWL line that selects a cell.
  std::size_t rwl_line(Coord cell) const {
    return orientation_ == WordlineOrientation::ReadByColumn ? cell.col : cell.row;
  }
  std::size_t wwl_line(Coord cell) const {
    return orientation_ == WordlineOrientation::ReadByColumn ? cell.row : cell.col;
  }

  /// Wordlines asserted during the most recent cycle.
  const std::vector<bool>& rwl() const noexcept { return rwl_; }
  const std::vector<bool>& wwl() const noexcept { return wwl_; }

  /// Number of times each cell has been written since construction.
  const Grid<std::uint32_t>& write_counts() const noexcept { return write_counts_; }

  struct CycleDrive {
    std::vector<bool> rwl;
    std::vector<bool> wwl;
    /// Values driven onto R segments by peripheral drivers.
    std::map<Coord, Nibble> r_segment_injections;
    /// Values delivered straight to W nodes through 3D bonds.
    std::map<Coord, Nibble> bond_writes;
  };

  struct CycleOutcome {
    std::map<Coord, Nibble> reads;
    std::map<Coord, Nibble> writes;
  };

  /// Resolves one cycle against the current blocker state without mutating
  /// cell contents. Throws SimError(Contention) if a net has two drivers and
  /// SimError(Unreachable) if a 3D bond targets a cell whose WWL is low.
  CycleOutcome evaluate(const CycleDrive& drive) const;

  /// Applies writes and records the asserted wordlines.
  void commit(const CycleDrive& drive, const std::map<Coord, Nibble>& writes);

 protected:
  virtual void on_written(Coord) {}

 private:
  MatrixTile tile_;
  WordlineOrientation orientation_;
  Grid<std::uint8_t> blocker1_;
  Grid<std::uint8_t> blocker2_;
  std::vector<bool> rwl_;
  std::vector<bool> wwl_;
  Grid<std::uint32_t> write_counts_;
};

/// Layer A transposable SRAM subarray.
class TSramArray : public TransposeArray {
 public:
  explicit TSramArray(MatrixTile tile);
};

/// Layer B transposable eDRAM subarray. Tracks cycles since each word was
/// last written or refreshed.
class TEdramArray : public TransposeArray {
 public:
  static constexpr std::uint64_t kDefaultRetentionLimit = 10000;

  explicit TEdramArray(MatrixTile tile,
                       std::uint64_t retention_limit_cycles = kDefaultRetentionLimit);

  std::uint64_t retention_limit() const noexcept { return retention_limit_; }
  const Grid<std::uint64_t>& retention_counters() const noexcept { return retention_; }

  /// Advances every retention counter.
  void tick(std::uint64_t cycles = 1);
  /// Throws SimError(Retention) if any word has outlived the limit.
  void check_retention() const;

 protected:
  void on_written(Coord cell) override;

 private:
  friend void refresh(TEdramArray& array);

  std::uint64_t retention_limit_;
  Grid<std::uint64_t> retention_;
};

/// Per-bit-cell 3D bonds used by one inter-layer transfer.
struct Via3dMap {
  std::vector<std::pair<Coord, Coord>> pairs;  // (source cell, destination cell)

  /// Throws SimError(ViaMap) if the map is not injective either way or a
  /// pair lies outside an n x n tile.
  void validate(std::size_t n) const;

  static Via3dMap upper_diagonal(std::size_t n);
  static Via3dMap lower_diagonal(std::size_t n);
};

enum class SwapDirection { LowerToUpper, UpperToLower };

/// Reads cells through their RWLs. Every cell on an asserted RWL drives its
/// R segment, so the blocker state must keep those drivers apart.
std::map<Coord, Nibble> parallel_read(TransposeArray& array, std::span<const Coord> cells);

/// Writes explicit values through the blocker-2 cross wires: the value for
/// (r,c) is driven onto the R segment of (c,r) and must reach (r,c) through
/// an enabled blocker 2. Throws Unreachable, Overlap (two targets on one
/// net) or CollateralWrite (a non-target cell would also be written).
void parallel_write(TransposeArray& array, const std::map<Coord, Nibble>& assignments);

/// One internal-shift cycle for index k (zero-based, 0 <= k <= n-2).
/// LowerToUpper copies (i,k) -> (k,i) for all i > k; UpperToLower copies
/// (k,i) -> (i,k). Sets blockers itself. Returns the number of copies.
std::size_t intra_column_swap_step(TransposeArray& array, std::size_t k,
                                   SwapDirection direction);

/// Copies each via source cell of src into its paired cell of dst in one
/// cycle. Turns all blockers of both arrays off. Returns the pair count.
std::size_t inter_layer_transfer(TransposeArray& src, TransposeArray& dst,
                                 const Via3dMap& via);

/// Resets retention counters. Throws SimError(Retention) if a counter already
/// exceeded the limit (the data would have been lost).
void refresh(TEdramArray& array);

}  // namespace gem3d
