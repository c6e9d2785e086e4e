#pragma once

#include <memory>
#include <optional>

#include "gem3d/analog.hpp"
#include "gem3d/lfsr.hpp"

namespace gem3d {

enum class EwiseOp { Mul, Add };

std::string_view to_string(EwiseOp op);

/// Full-scale operand units (225 or 30) of an element-wise mode.
unsigned full_scale_units(EwiseOp op);

struct CalibrationRecord {
  unsigned known_input_count = 0;
  unsigned measured_count = 0;
  int offset_counts = 0;
};

/// One layer-B word's conversion chain: comparator against the shared ramp,
/// delayed clock pulses, and the 8-bit LFSR counter preset to its initial
/// reference point.
class WordPipeline {
 public:
  struct Conversion {
    unsigned pulses = 0;
    Byte code = kLfsrSeed;
    unsigned count = 0;
  };

  WordPipeline(EwiseOp op, ComparatorModel comparator, std::shared_ptr<const LfsrLut> lut,
               RampModel ramp = {});

  EwiseOp op() const noexcept { return op_; }
  const ComparatorModel& comparator() const noexcept { return comparator_; }
  const LfsrLut& lut() const noexcept { return *lut_; }
  const RampModel& ramp() const noexcept { return ramp_; }

  /// State written into the word before counting (the seed until calibrated).
  Byte initial_state() const noexcept { return initial_state_; }
  const std::optional<CalibrationRecord>& calibration() const noexcept { return calibration_; }
  bool calibrated() const noexcept { return calibration_.has_value(); }

  /// Counts pulses from the initial state and decodes the stored code.
  /// Codes that fall outside the 64-entry table (only possible when noise
  /// pushes a calibrated word past an edge) saturate to 0 or 63.
  Conversion convert(const AnalogSample& sample) const;

  /// Result in operand units: the decoded sum for addition, the raw count
  /// for multiplication.
  unsigned decode_result(unsigned count) const;

  /// Applies a known input, records the LFSR output and presets the counter
  /// so the measured code maps to the expected count. Throws
  /// SimError(Calibration) if the measurement saturates.
  CalibrationRecord calibrate(const AnalogSample& known_input);

 private:
  EwiseOp op_;
  ComparatorModel comparator_;
  std::shared_ptr<const LfsrLut> lut_;
  RampModel ramp_;
  Byte initial_state_ = kLfsrSeed;
  long initial_steps_ = 0;
  std::optional<CalibrationRecord> calibration_;
};

/// Analog level the calibration input produces for a known count.
AnalogSample known_input_for_count(unsigned count);

/// Addition decode: count spacing is 63/30, so rounding recovers the sum.
unsigned add_count_to_sum(unsigned count);

}  // namespace gem3d
