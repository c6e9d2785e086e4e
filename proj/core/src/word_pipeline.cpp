#include "gem3d/word_pipeline.hpp"

#include <cmath>

#include <fmt/format.h>

#include "gem3d/errors.hpp"

namespace gem3d {

std::string_view to_string(EwiseOp op) { return op == EwiseOp::Mul ? "mul" : "add"; }

unsigned full_scale_units(EwiseOp op) {
  return op == EwiseOp::Mul ? kMulFullScale : kAddFullScale;
}

WordPipeline::WordPipeline(EwiseOp op, ComparatorModel comparator,
                           std::shared_ptr<const LfsrLut> lut, RampModel ramp)
    : op_(op), comparator_(comparator), lut_(std::move(lut)), ramp_(ramp) {
  if (!lut_) throw SimError(ErrorKind::Argument, "word pipeline needs an LFSR table");
  comparator_.polarity =
      op == EwiseOp::Mul ? ComparatorPolarity::PmosForMul : ComparatorPolarity::NmosForAdd;
}

WordPipeline::Conversion WordPipeline::convert(const AnalogSample& sample) const {
  Conversion out;
  out.pulses = delay_to_pulses(sample, comparator_, ramp_);
  // Walking the counter one pulse at a time is equivalent to indexing the
  // cycle; the table lookup keeps Monte-Carlo sweeps cheap.
  const long steps = initial_steps_ + static_cast<long>(out.pulses);
  out.code = lut_->state_at(steps);
  if (auto count = lut_->decode(out.code)) {
    out.count = *count;
  } else {
    out.count = steps < 0 ? 0 : kMaxCount;
  }
  return out;
}

unsigned WordPipeline::decode_result(unsigned count) const {
  return op_ == EwiseOp::Add ? add_count_to_sum(count) : count;
}

CalibrationRecord WordPipeline::calibrate(const AnalogSample& known_input) {
  const ComparatorModel ideal{0.0, comparator_.polarity};
  const unsigned expected = delay_to_pulses(known_input, ideal, ramp_);

  // Measure from the seed, as the uncalibrated word would.
  const unsigned pulses = delay_to_pulses(known_input, comparator_, ramp_);
  const auto measured = lut_->decode(lut_->state_at(static_cast<long>(pulses)));
  if (!measured || *measured == 0 || *measured == kMaxCount) {
    throw SimError(ErrorKind::Calibration,
                   fmt::format("calibration measurement saturated (pulses={}, expected {})",
                               pulses, expected));
  }
  CalibrationRecord rec;
  rec.known_input_count = expected;
  rec.measured_count = *measured;
  rec.offset_counts = static_cast<int>(*measured) - static_cast<int>(expected);

  initial_steps_ = -rec.offset_counts;
  initial_state_ = lut_->state_at(initial_steps_);
  calibration_ = rec;
  return rec;
}

AnalogSample known_input_for_count(unsigned count) {
  AnalogSample s;
  s.level = static_cast<double>(count) / kMaxCount;
  return s;
}

unsigned add_count_to_sum(unsigned count) {
  return static_cast<unsigned>(std::floor(count * 30.0 / kMaxCount + 0.5));
}

}  // namespace gem3d
