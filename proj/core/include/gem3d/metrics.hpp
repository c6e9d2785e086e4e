#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gem3d/analog.hpp"
#include "gem3d/config.hpp"
#include "gem3d/ledger.hpp"
#include "gem3d/rng.hpp"
#include "gem3d/word_pipeline.hpp"

namespace gem3d {

struct ThroughputReport {
  std::uint64_t ops_count = 0;
  double latency_s = 0.0;
  double energy_j = 0.0;
  double gops = 0.0;
  double gops_per_w = 0.0;
};

/// Throws SimError(Argument) for non-positive latency or energy.
ThroughputReport throughput(std::uint64_t ops_count, double latency_s, double energy_j);

/// Four significant figures, e.g. "15.52", "436.7", "0.0001234".
std::string sig4(double value);

struct EnobReport {
  double rms_error_lsb = 0.0;
  double enob_bits = 0.0;
  std::uint64_t conversions = 0;
  std::string method = "ramp-histogram";
};

/// Level-domain noise sigma an element-wise conversion sees for a DAC noise
/// of dac_sigma_lsb (addition: two DACs averaged; multiplication: full-scale
/// b, one DAC).
double ewise_level_sigma(EwiseOp op, double dac_sigma_lsb);

/// Sweeps a uniform grid of grid_points_per_lsb points per count over 0..63
/// through the pipeline, adding N(0, level_sigma) to each input, `trials`
/// times. enob = log2(64 / (rms * sqrt(12))). Throws SimError(Argument) if
/// trials < 100.
EnobReport estimate_enob(const WordPipeline& pipeline, double level_sigma, std::size_t trials,
                         unsigned grid_points_per_lsb, RandomStream& rng);

/// DAC noise (LSB) at which the addition path's ENOB reaches the published
/// 4.78 bits, found by fit_enob_sigma() with seed 42, 100 trials and 16
/// grid points per LSB.
inline constexpr double kEnobFitDacSigmaLsb = 0.2057;
inline constexpr double kPublishedEnobBits = 4.78;

/// Bisection on the addition path's DAC sigma for a target ENOB. Each probe
/// reuses the same random stream seed so the objective is deterministic.
double fit_enob_sigma(double target_bits, std::uint64_t seed, std::size_t trials,
                      unsigned grid_points_per_lsb, const LfsrLut& lut);

struct LinearityRow {
  unsigned ideal = 0;  ///< operand-domain value (a+b or a*b)
  double expected = 0.0;
  double mean = 0.0;
  double std = 0.0;
  std::uint64_t samples = 0;
};

/// Streaming per-ideal-level statistics. Merging is order-dependent only in
/// floating-point rounding, so callers merge in stream_id order.
class LinearityAccumulator {
 public:
  void add(unsigned ideal, double expected, double measured);
  void merge(const LinearityAccumulator& other);
  std::vector<LinearityRow> rows() const;

 private:
  struct Acc {
    double expected = 0.0;
    double sum = 0.0;
    double sum_sq = 0.0;
    std::uint64_t n = 0;
  };
  std::map<unsigned, Acc> acc_;
};

/// Ideal output of a conversion in the units the sweep reports: the sum for
/// addition, round(a*b*63/225) for multiplication.
double ideal_output(EwiseOp op, unsigned a, unsigned b);

/// Runs every (a, b) operand pair `trials` times through a calibrated
/// pipeline, drawing DAC noise per conversion.
LinearityAccumulator linearity_sweep(const WordPipeline& pipeline, const DacModel& dac,
                                     const MultiplierModel& multiplier, std::size_t trials,
                                     RandomStream& rng);

struct EnergyShare {
  std::string phase;
  Layer layer = Layer::A_SRAM;
  double joules = 0.0;
  double fraction = 0.0;
};

/// Energy grouped by (phase, layer) in first-charged order. Throws
/// SimError(Argument) on an empty or zero-energy ledger.
std::vector<EnergyShare> energy_rollup(const CostLedger& ledger);
/// Energy grouped by layer only.
std::vector<EnergyShare> layer_rollup(const CostLedger& ledger);

/// Signal margin between DAC codes `code` and `code + 1`, in DAC LSB, over
/// `draws` independent noisy conversions of each.
std::vector<double> signal_margin_samples(const DacModel& dac, unsigned code,
                                          std::size_t draws, RandomStream& rng);

/// Kolmogorov-Smirnov statistic of samples against a reference CDF.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Per-trial Monte-Carlo outcome: one addition and one multiplication word
/// with fresh comparator offsets, calibrated, swept over all operand pairs.
struct McTrialResult {
  std::uint64_t trial = 0;
  LinearityAccumulator add;
  LinearityAccumulator mul;
  int add_offset = 0;
  int mul_offset = 0;
  /// Conversions whose calibrated noiseless output differs from the
  /// zero-offset conversion.
  std::uint64_t calibration_mismatches = 0;
};

McTrialResult run_mc_trial(const TileConfig& config, std::shared_ptr<const LfsrLut> lut,
                           std::uint64_t seed, std::uint64_t trial);

}  // namespace gem3d
