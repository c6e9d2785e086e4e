#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gem3d/types.hpp"

namespace gem3d {

/// Feedback preset that XORs Q7 and Q1 into Q8. Only reaches 30 states from
/// the seed, so build_lut() rejects it.
inline constexpr std::array<unsigned, 2> kQ7Q1Taps = {7, 1};
/// Default maximal-length (255-state) feedback for the Q8 <- taps form.
inline constexpr std::array<unsigned, 4> kDefaultTaps = {1, 3, 4, 5};

inline constexpr Byte kLfsrSeed = 0b0000'0001;

/// 8-bit LFSR word. Bit k-1 of `bits` holds Qk.
struct LfsrState {
  Byte bits = kLfsrSeed;
  std::vector<unsigned> taps = {kDefaultTaps.begin(), kDefaultTaps.end()};

  bool q(unsigned position) const { return ((bits >> (position - 1)) & 1u) != 0; }
};

/// Qk <- Qk+1 for k = 1..7 and Q8 <- XOR of the tapped bits of the pre-shift
/// state. Throws SimError(Lockup) on the all-zero state.
LfsrState lfsr_step(const LfsrState& state);

/// Decode table over the first 64 states reached from the seed.
class LfsrLut {
 public:
  std::span<const unsigned> taps() const noexcept { return taps_; }

  /// State after `count` steps from the seed, count in 0..63.
  Byte encode(unsigned count) const;
  /// Count for a state among the first 64; nullopt otherwise.
  std::optional<unsigned> decode(Byte code) const;

  /// Full state sequence from the seed up to (excluding) the first repeat.
  const std::vector<Byte>& sequence() const noexcept { return sequence_; }
  /// True when the walk from the seed returns to the seed (no tail), which
  /// lets a counter be preset to states "before" the seed.
  bool pure_cycle() const noexcept { return pure_cycle_; }
  std::size_t period() const noexcept { return sequence_.size(); }

  /// State reached by advancing `steps` (may be negative) from the seed
  /// along the cycle. Requires pure_cycle() for negative steps.
  Byte state_at(long steps) const;

 private:
  friend LfsrLut build_lut(std::span<const unsigned> taps);

  std::vector<unsigned> taps_;
  std::array<Byte, 64> count_to_code_{};
  std::array<std::int16_t, 256> code_to_count_{};
  std::vector<Byte> sequence_;
  bool pure_cycle_ = false;
};

/// Enumerates the walk from seed 00000001. Throws SimError(ShortCycle) naming
/// the taps if fewer than 64 distinct states are reached.
LfsrLut build_lut(std::span<const unsigned> taps);

struct PulseCount {
  Byte code = kLfsrSeed;
  unsigned count = 0;
};

/// Steps a seeded LFSR `pulses` times and decodes the result.
PulseCount count_pulses(unsigned pulses, const LfsrLut& lut);

std::string format_bits(Byte bits);

/// 64 lines "Q8..Q1 count" for golden-file comparison.
std::string dump_lut(const LfsrLut& lut);

}  // namespace gem3d
