#include "gem3d/transpose.hpp"

#include <fmt/format.h>

#include "gem3d/errors.hpp"

namespace gem3d {

namespace {

constexpr const char* kPhaseAToB = "xfer_a_to_b";
constexpr const char* kPhaseSwap = "internal_swap";
constexpr const char* kPhaseBToA = "xfer_b_to_a";

struct OpRunner {
  TSramArray& a;
  TEdramArray& b;
  CostLedger* ledger;
  const TileConfig* config;

  std::size_t operator()(const TransferOp& op) {
    if (op.direction == TransferDirection::AToB) {
      const std::size_t pairs = inter_layer_transfer(a, b, op.via);
      if (ledger) {
        ledger->charge(*config, "transpose.xfer_a_to_b.read", pairs);
        ledger->charge(*config, "transpose.xfer_a_to_b.write", pairs);
        ledger->note("wwl_overdrive_cycles.layer_b");
      }
      return pairs;
    }
    const std::size_t pairs = inter_layer_transfer(b, a, op.via);
    if (ledger) {
      ledger->charge(*config, "transpose.xfer_b_to_a.read", pairs);
      ledger->charge(*config, "transpose.xfer_b_to_a.write", pairs);
      ledger->note("wwl_overdrive_cycles.layer_a");
    }
    return pairs;
  }

  std::size_t operator()(const SwapOp& op) {
    if (op.layer == Layer::A_SRAM) {
      const std::size_t copies = intra_column_swap_step(a, op.k, op.direction);
      if (ledger) {
        ledger->charge(*config, "transpose.swap_a", copies);
        ledger->note("wwl_overdrive_cycles.layer_a");
      }
      return copies;
    }
    const std::size_t copies = intra_column_swap_step(b, op.k, op.direction);
    if (ledger) {
      ledger->charge(*config, "transpose.swap_b", copies);
      ledger->note("wwl_overdrive_cycles.layer_b");
    }
    return copies;
  }
};

void run_cycles(TSramArray& a, TEdramArray& b, const TransposeSchedule& schedule,
                CostLedger* ledger, const TileConfig* config) {
  OpRunner runner{a, b, ledger, config};
  for (const auto& cycle : schedule.cycles) {
    for (const auto& op : cycle.ops) std::visit(runner, op);
    b.tick();
    b.check_retention();
    if (ledger) ledger->add_phase(cycle.phase, 1, config->clock_period_transpose_s);
  }
}

}  // namespace

TransposeSchedule compile_transpose(std::size_t n) {
  if (n < MatrixTile::kMinN) {
    throw SimError(ErrorKind::Shape, fmt::format("transpose needs n >= 2, got {}", n));
  }
  TransposeSchedule s;
  s.n = n;
  s.cycles.push_back(
      {kPhaseAToB, {TransferOp{TransferDirection::AToB, Via3dMap::upper_diagonal(n)}}});
  for (std::size_t k = 0; k + 1 < n; ++k) {
    s.cycles.push_back({kPhaseSwap,
                        {SwapOp{Layer::A_SRAM, k, SwapDirection::LowerToUpper},
                         SwapOp{Layer::B_EDRAM, k, SwapDirection::UpperToLower}}});
  }
  s.cycles.push_back(
      {kPhaseBToA, {TransferOp{TransferDirection::BToA, Via3dMap::lower_diagonal(n)}}});

  // Legality dry run on blank arrays.
  TSramArray a(MatrixTile(n, Layer::A_SRAM));
  TEdramArray b(MatrixTile(n, Layer::B_EDRAM));
  run_cycles(a, b, s, nullptr, nullptr);
  return s;
}

std::string dump_schedule(const TransposeSchedule& schedule) {
  std::string out = fmt::format("# transpose schedule n={} cycles={}\n", schedule.n,
                                schedule.cycle_count());
  for (std::size_t i = 0; i < schedule.cycles.size(); ++i) {
    const auto& cycle = schedule.cycles[i];
    out += fmt::format("cycle {} {}:", i, cycle.phase);
    bool first = true;
    for (const auto& op : cycle.ops) {
      out += first ? " " : " | ";
      first = false;
      if (const auto* t = std::get_if<TransferOp>(&op)) {
        out += fmt::format("xfer {} pairs={}",
                           t->direction == TransferDirection::AToB ? "A->B" : "B->A",
                           t->via.pairs.size());
      } else {
        const auto& sw = std::get<SwapOp>(op);
        out += fmt::format("swap {} k={} {} ({} copies)",
                           sw.layer == Layer::A_SRAM ? "A" : "B", sw.k,
                           sw.direction == SwapDirection::LowerToUpper ? "lower->upper"
                                                                       : "upper->lower",
                           schedule.n - 1 - sw.k);
      }
    }
    out += '\n';
  }
  return out;
}

TransposeRun execute_transpose(TSramArray layer_a, TEdramArray layer_b,
                               const TransposeSchedule& schedule, const TileConfig& config) {
  if (layer_a.n() != schedule.n || layer_b.n() != schedule.n) {
    throw SimError(ErrorKind::Shape,
                   fmt::format("schedule is for n={} but arrays are {}x{} and {}x{}",
                               schedule.n, layer_a.n(), layer_a.n(), layer_b.n(), layer_b.n()));
  }
  CostLedger ledger;
  run_cycles(layer_a, layer_b, schedule, &ledger, &config);
  return TransposeRun{std::move(layer_a), std::move(layer_b), std::move(ledger)};
}

TransposeRun transpose_tile(const MatrixTile& tile, const TileConfig& config) {
  const auto schedule = compile_transpose(tile.n());
  return execute_transpose(
      TSramArray(tile),
      TEdramArray(MatrixTile(tile.n(), Layer::B_EDRAM), config.edram_retention_limit_cycles),
      schedule, config);
}

std::uint64_t transpose_ops(std::size_t n) { return static_cast<std::uint64_t>(n) * n * 4; }

}  // namespace gem3d
