#include "gem3d/lfsr.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "gem3d/errors.hpp"

namespace gem3d {

LfsrState lfsr_step(const LfsrState& state) {
  if (state.bits == 0) {
    throw SimError(ErrorKind::Lockup, "LFSR is in the all-zero lockup state");
  }
  unsigned feedback = 0;
  for (unsigned t : state.taps) feedback ^= (state.bits >> (t - 1)) & 1u;
  LfsrState next = state;
  next.bits = static_cast<Byte>((state.bits >> 1) | (feedback << 7));
  return next;
}

Byte LfsrLut::encode(unsigned count) const {
  if (count >= count_to_code_.size()) {
    throw SimError(ErrorKind::Range, fmt::format("count {} outside 0..63", count));
  }
  return count_to_code_[count];
}

std::optional<unsigned> LfsrLut::decode(Byte code) const {
  const auto c = code_to_count_[code];
  if (c < 0) return std::nullopt;
  return static_cast<unsigned>(c);
}

Byte LfsrLut::state_at(long steps) const {
  const long period = static_cast<long>(sequence_.size());
  if (steps >= 0 && steps < period) return sequence_[static_cast<std::size_t>(steps)];
  if (!pure_cycle_) {
    throw SimError(ErrorKind::Calibration,
                   fmt::format("LFSR walk has a tail; cannot preset {} steps from seed", steps));
  }
  const long wrapped = ((steps % period) + period) % period;
  return sequence_[static_cast<std::size_t>(wrapped)];
}

LfsrLut build_lut(std::span<const unsigned> taps) {
  if (taps.empty()) throw SimError(ErrorKind::Config, "LFSR needs at least one tap");
  for (unsigned t : taps) {
    if (t < 1 || t > 8) throw SimError(ErrorKind::Config, "LFSR tap positions must be 1..8");
  }
  LfsrLut lut;
  lut.taps_.assign(taps.begin(), taps.end());
  lut.code_to_count_.fill(-1);

  std::array<bool, 256> seen{};
  LfsrState state{kLfsrSeed, lut.taps_};
  while (!seen[state.bits]) {
    seen[state.bits] = true;
    lut.sequence_.push_back(state.bits);
    if (state.bits == 0) break;
    state = lfsr_step(state);
  }
  if (lut.sequence_.size() < 64) {
    throw SimError(ErrorKind::ShortCycle,
                   fmt::format("taps {{{}}} reach only {} distinct states from seed 00000001, "
                               "need 64",
                               fmt::join(taps, ","), lut.sequence_.size()));
  }
  lut.pure_cycle_ = state.bits == kLfsrSeed;
  for (unsigned k = 0; k < 64; ++k) {
    lut.count_to_code_[k] = lut.sequence_[k];
    lut.code_to_count_[lut.sequence_[k]] = static_cast<std::int16_t>(k);
  }
  return lut;
}

PulseCount count_pulses(unsigned pulses, const LfsrLut& lut) {
  if (pulses > 63) throw SimError(ErrorKind::Range, fmt::format("{} pulses exceed 63", pulses));
  LfsrState state{kLfsrSeed, {lut.taps().begin(), lut.taps().end()}};
  for (unsigned i = 0; i < pulses; ++i) state = lfsr_step(state);
  return PulseCount{state.bits, *lut.decode(state.bits)};
}

std::string format_bits(Byte bits) { return fmt::format("{:08b}", bits); }

std::string dump_lut(const LfsrLut& lut) {
  std::string out;
  for (unsigned k = 0; k < 64; ++k) out += fmt::format("{} {}\n", format_bits(lut.encode(k)), k);
  return out;
}

}  // namespace gem3d
