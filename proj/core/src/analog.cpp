#include "gem3d/analog.hpp"

#include <algorithm>
#include <cmath>

namespace gem3d {

namespace {

// Absorbs representation error so exact half-count ties (e.g. 5/30 * 63)
// round up as intended.
constexpr double kTieEpsilon = 1e-9;

}  // namespace

double DacModel::noiseless_level(Nibble code) const {
  double sum = 0.0;
  double full = 0.0;
  for (unsigned k = 0; k < 4; ++k) {
    full += weights[k];
    if (code.bit(k)) sum += weights[k];
  }
  return full > 0.0 ? sum / full : 0.0;
}

AnalogSample dac_convert(Nibble code, const DacModel& model, RandomStream* rng) {
  AnalogSample s;
  s.source = AnalogSource::DAC;
  s.level = model.noiseless_level(code);
  if (model.noise_sigma_lsb > 0.0 && rng != nullptr) {
    s.noise_sigma = model.noise_sigma_lsb / 15.0;
    s.level += rng->normal(0.0, s.noise_sigma);
    s.noise_applied = true;
  }
  s.level = clamp_unit(s.level);
  return s;
}

AnalogSample analog_multiply(const AnalogSample& vdac, Nibble b_code,
                             const MultiplierModel& model) {
  AnalogSample s;
  s.source = AnalogSource::MUL;
  s.noise_sigma = vdac.noise_sigma * b_code.value() / 15.0;
  s.noise_applied = vdac.noise_applied;
  s.level = vdac.level * (b_code.value() / 15.0) * (1.0 + model.gain_error) +
            model.offset_lsb / kMaxCount;
  s.level = clamp_unit(s.level);
  return s;
}

AnalogSample analog_add(const AnalogSample& vdac_a, const AnalogSample& vdac_b) {
  // Both DAC currents share one load; the sum of two full-scale words is
  // the addition full scale.
  AnalogSample s;
  s.source = AnalogSource::ADD;
  s.noise_sigma = std::hypot(vdac_a.noise_sigma, vdac_b.noise_sigma) / 2.0;
  s.noise_applied = vdac_a.noise_applied || vdac_b.noise_applied;
  s.level = clamp_unit((vdac_a.level + vdac_b.level) / 2.0);
  return s;
}

unsigned delay_to_pulses(const AnalogSample& sample, const ComparatorModel& comparator,
                         const RampModel& ramp) {
  const double crossing =
      clamp_unit(sample.level) * ramp.counts_per_full_scale() + comparator.offset_lsb;
  const double pulses = std::floor(crossing + 0.5 + kTieEpsilon);
  return static_cast<unsigned>(std::clamp(pulses, 0.0, ramp.counts_per_full_scale()));
}

}  // namespace gem3d
