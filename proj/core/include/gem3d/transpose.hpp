#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "gem3d/arrays.hpp"
#include "gem3d/config.hpp"
#include "gem3d/ledger.hpp"

namespace gem3d {

enum class TransferDirection { AToB, BToA };

struct TransferOp {
  TransferDirection direction;
  Via3dMap via;
};

struct SwapOp {
  Layer layer;
  std::size_t k;
  SwapDirection direction;
};

using TransposeMicroOp = std::variant<TransferOp, SwapOp>;

/// Micro-ops issued in one clock cycle.
struct TransposeCycle {
  std::string phase;
  std::vector<TransposeMicroOp> ops;
};

/// Cycle-by-cycle plan for an in-situ transpose:
///   cycle 0        upper triangle A -> B over 3D bonds
///   cycles 1..n-1  column k of A lower->upper paired with row k of B
///                  upper->lower, both in the same cycle
///   cycle n        lower triangle B -> A over 3D bonds
struct TransposeSchedule {
  std::size_t n = 0;
  std::vector<TransposeCycle> cycles;

  std::size_t cycle_count() const noexcept { return cycles.size(); }
};

/// Throws SimError(Shape) for n < 2. The returned schedule has already been
/// dry-run against blank arrays.
TransposeSchedule compile_transpose(std::size_t n);

/// One line per cycle, e.g. "cycle 1 internal_swap: swap A k=0 lower->upper (3 copies)".
std::string dump_schedule(const TransposeSchedule& schedule);

struct TransposeRun {
  TSramArray layer_a;
  TEdramArray layer_b;
  CostLedger ledger;
};

/// Runs the schedule. Layer B's residual contents are left in place. Array
/// contention and retention errors propagate as SimError.
TransposeRun execute_transpose(TSramArray layer_a, TEdramArray layer_b,
                               const TransposeSchedule& schedule, const TileConfig& config);

/// Loads tile into fresh arrays (layer B zero-filled) and transposes it.
TransposeRun transpose_tile(const MatrixTile& tile, const TileConfig& config);

/// Word-level operations performed by an n x n transpose (n * n * 4 bits).
std::uint64_t transpose_ops(std::size_t n);

}  // namespace gem3d
