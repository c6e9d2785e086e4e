#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gem3d/config.hpp"
#include "gem3d/ledger.hpp"
#include "gem3d/lfsr.hpp"
#include "gem3d/rng.hpp"
#include "gem3d/types.hpp"
#include "gem3d/word_pipeline.hpp"

namespace gem3d {

/// Operand placement of an element-wise job. Each layer-A word pair holds
/// a(i,j) in the upper nibble and b(i,j) in the lower nibble ("stored next
/// to each other"); for multiplication b is also mirrored into the LSB
/// nibble of the layer-B word that later becomes the LFSR counter.
struct EwiseLayout {
  Grid<Byte> layer_a_pairs;
  Grid<Byte> layer_b_words;
};

EwiseLayout map_operands(EwiseOp op, const MatrixTile& a, const MatrixTile& b);

/// The seven phases of an element-wise job, in order.
std::span<const std::string_view> ewise_phase_plan();

struct EwiseJob {
  EwiseOp op = EwiseOp::Add;
  MatrixTile a;
  MatrixTile b;
  /// Run even if the pipeline bank has not been calibrated.
  bool allow_uncalibrated = false;
};

/// One word pipeline per element position, each with its own comparator.
class PipelineBank {
 public:
  /// Draws one static comparator offset per word from
  /// N(0, comparator_offset_sigma_lsb), rounded to whole counts.
  static PipelineBank create(EwiseOp op, std::size_t n, const TileConfig& config,
                             std::shared_ptr<const LfsrLut> lut, RandomStream& rng);
  /// Bank with explicit per-word offsets (tests, fault injection).
  PipelineBank(EwiseOp op, std::size_t n, std::shared_ptr<const LfsrLut> lut,
               const Grid<double>& offsets);

  EwiseOp op() const noexcept { return op_; }
  std::size_t n() const noexcept { return n_; }
  WordPipeline& word(Coord at) { return words_[at.row * n_ + at.col]; }
  const WordPipeline& word(Coord at) const { return words_[at.row * n_ + at.col]; }

  /// Calibrates every word with the input that ideally yields known_count.
  void calibrate_all(unsigned known_count);
  bool all_calibrated() const;

 private:
  EwiseOp op_;
  std::size_t n_;
  std::vector<WordPipeline> words_;
};

struct EwiseResult {
  EwiseOp op = EwiseOp::Add;
  EwiseLayout layout;
  /// Decoded 6-bit counts and the raw LFSR codes left in layer B.
  Grid<std::uint8_t> counts;
  Grid<Byte> codes;
  /// Counts mapped back to operand units (a+b for addition, count for
  /// multiplication).
  Grid<std::uint16_t> values;
  CostLedger ledger;
};

/// Throws SimError(Shape) on operand mismatch and SimError(Uncalibrated)
/// unless the bank is calibrated or the job allows otherwise.
EwiseResult run_ewise(const EwiseJob& job, const PipelineBank& bank, const TileConfig& config,
                      RandomStream& rng);

/// Convenience: builds the LUT and bank, calibrates, runs.
EwiseResult run_ewise(const EwiseJob& job, const TileConfig& config, RandomStream& rng);

/// Operations in one element-wise job: 8 per element (4-bit x 4-bit).
std::uint64_t ewise_ops(std::size_t n);

struct MacJob {
  MatrixTile weights;
  /// Row enables, each 0 or 1.
  std::vector<unsigned> activations;
  bool quantize = true;
};

struct MacResult {
  /// Exact integer column sums (the noiseless analog value in units).
  std::vector<std::uint64_t> column_sums;
  /// Normalized analog column levels, noise included.
  std::vector<double> levels;
  std::vector<std::uint8_t> counts;
  std::vector<Byte> codes;
  /// 15 x active rows.
  std::uint64_t full_scale = 0;
  CostLedger ledger;
};

/// Throws SimError(Argument) on a non-binary activation and SimError(Shape)
/// if the activation vector length differs from n.
MacResult run_mac(const MacJob& job, const TileConfig& config, const LfsrLut& lut,
                  RandomStream& rng);

/// Job description file (JSON):
///   {"op": "mul"|"add"|"mac", "a": path, "b": path, "act": path,
///    "out": dir, "trials": count, "seed": value}
/// Relative paths resolve against the job file's directory.
struct JobDescription {
  std::string op;
  std::optional<std::filesystem::path> a, b, act, out;
  std::optional<std::uint64_t> trials, seed;
};

JobDescription load_job(const std::filesystem::path& path);

}  // namespace gem3d
