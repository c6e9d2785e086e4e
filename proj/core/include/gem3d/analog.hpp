#pragma once

#include <array>
#include <cstdint>

#include "gem3d/rng.hpp"
#include "gem3d/types.hpp"

namespace gem3d {

/// Number of ramp crossings / LFSR count levels per conversion.
inline constexpr unsigned kAdcLevels = 64;
inline constexpr unsigned kMaxCount = kAdcLevels - 1;
/// Full-scale units of the two arithmetic modes.
inline constexpr unsigned kMulFullScale = 15 * 15;
inline constexpr unsigned kAddFullScale = 15 + 15;

/// MA-SRAM current-steering DAC. Bit k of the stored word enables a branch
/// weighted weights[k] (LSB first); the summed current is normalized so the
/// all-ones word maps to 1.
struct DacModel {
  std::array<double, 4> weights = {1.0, 2.0, 4.0, 8.0};
  /// Per-conversion Gaussian noise, in DAC LSB (1/15 of full scale).
  double noise_sigma_lsb = 0.0;

  double noiseless_level(Nibble code) const;
};

enum class ComparatorPolarity { PmosForMul, NmosForAdd };

/// Differential-pair comparator with a static input-referred offset, in ADC
/// counts. Drawn once per word per trial.
struct ComparatorModel {
  double offset_lsb = 0.0;
  ComparatorPolarity polarity = ComparatorPolarity::NmosForAdd;
};

/// Globally shared ramp: rises through full scale in exactly 64 ADC cycles.
struct RampModel {
  unsigned cycles_to_full_scale = kAdcLevels;
  bool shared = true;

  /// Ramp crossings spaced one ADC count apart.
  constexpr double counts_per_full_scale() const { return cycles_to_full_scale - 1.0; }
};

/// C2C multiplier non-idealities (both zero for the designed behavior).
struct MultiplierModel {
  double gain_error = 0.0;
  double offset_lsb = 0.0;  // ADC counts
};

AnalogSample dac_convert(Nibble code, const DacModel& model, RandomStream* rng);
AnalogSample analog_multiply(const AnalogSample& vdac, Nibble b_code,
                             const MultiplierModel& model = {});
AnalogSample analog_add(const AnalogSample& vdac_a, const AnalogSample& vdac_b);

/// Pulses counted while the sample stays above the ramp:
/// floor(level * 63 + offset + 1/2), ties toward the larger count, saturated
/// to 0..63.
unsigned delay_to_pulses(const AnalogSample& sample, const ComparatorModel& comparator,
                         const RampModel& ramp = {});

}  // namespace gem3d
