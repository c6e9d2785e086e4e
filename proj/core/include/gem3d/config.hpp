#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gem3d/types.hpp"

namespace gem3d {

/// Monte-Carlo mismatch knobs.
///
/// dac_sigma_lsb is the per-conversion Gaussian noise of one 4-bit DAC in
/// units of its own LSB (1/15 of DAC full scale). comparator_offset_sigma_lsb
/// is the static comparator offset spread in ADC counts (1/63 of full scale).
struct VariationConfig {
  double dac_sigma_lsb = 0.0;
  double comparator_offset_sigma_lsb = 0.0;
  std::uint64_t rng_seed = 42;

  friend bool operator==(const VariationConfig&, const VariationConfig&) = default;
};

/// One entry of the per-event energy catalogue.
struct EnergyEventInfo {
  std::string_view key;
  std::string_view phase;
  Layer layer;
};

/// Every energy event the simulator can charge, in ledger order.
std::span<const EnergyEventInfo> energy_event_catalogue();
const EnergyEventInfo& energy_event(std::string_view key);

struct TileConfig {
  std::size_t n = 32;
  double clock_period_transpose_s = 8e-9;
  double adc_cycle_add_s = 3e-9;
  double adc_cycle_mul_s = 6e-9;
  /// Total time of all non-conversion phases of one element-wise job.
  double phase_overhead_add_s = 102e-9;
  double phase_overhead_mul_s = 204e-9;
  /// Joules per event, keyed by energy_event_catalogue() keys.
  std::map<std::string, double> energy_table;
  /// LFSR feedback positions, 1-based (Q1..Q8).
  std::vector<unsigned> lfsr_taps = {1, 3, 4, 5};
  VariationConfig variation;

  std::uint64_t edram_retention_limit_cycles = 10000;
  double multiplier_gain_error = 0.0;
  double multiplier_offset_lsb = 0.0;
  /// Count the calibration input is expected to produce (mid-scale).
  unsigned calibration_known_count = 32;
  /// ENOB sweep density: grid points per ADC LSB.
  unsigned enob_grid_points_per_lsb = 16;

  double energy_per_event(std::string_view key) const;

  friend bool operator==(const TileConfig&, const TileConfig&) = default;
};

/// Shipped defaults: 8 ns transpose clock, 3/6 ns ADC cycles, and per-event
/// energies back-solved so that 32x32 jobs total 320.55 nJ (transpose),
/// 18.76 nJ (multiply) and 18.95 nJ (add).
TileConfig default_config();

/// Throws SimError(Config) naming the first violated constraint.
void validate(const TileConfig& config);

/// Parses a JSON document (comments allowed). Missing keys keep their
/// defaults; unknown keys at any level are an error.
TileConfig parse_config(std::string_view text);
TileConfig load_config(const std::filesystem::path& path);

/// Canonical JSON (sorted keys, round-trip doubles).
std::string to_json(const TileConfig& config);
/// FNV-1a 64 of to_json(config), as 16 hex digits.
std::string config_hash(const TileConfig& config);

/// Latency split of the element-wise non-conversion phases, as fractions of
/// phase_overhead_*_s. These are estimates; only the totals are fixed.
struct PhaseShare {
  std::string_view phase;
  double fraction;
};
std::span<const PhaseShare> ewise_overhead_shares();

}  // namespace gem3d
