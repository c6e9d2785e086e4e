#include "gem3d/errors.hpp"

namespace gem3d {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Range: return "range";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
    case ErrorKind::Contention: return "contention";
    case ErrorKind::Unreachable: return "unreachable";
    case ErrorKind::Overlap: return "overlap";
    case ErrorKind::CollateralWrite: return "collateral_write";
    case ErrorKind::ViaMap: return "via_map";
    case ErrorKind::Retention: return "retention";
    case ErrorKind::Lockup: return "lockup";
    case ErrorKind::ShortCycle: return "short_cycle";
    case ErrorKind::Calibration: return "calibration";
    case ErrorKind::Uncalibrated: return "uncalibrated";
    case ErrorKind::Argument: return "argument";
  }
  return "unknown";
}

bool is_input_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::Range:
    case ErrorKind::Shape:
    case ErrorKind::Config:
    case ErrorKind::Io:
    case ErrorKind::Argument:
      return true;
    default:
      return false;
  }
}

}  // namespace gem3d
