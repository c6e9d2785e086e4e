#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gem3d {

/// Categories of simulator failure. The CLI maps these onto exit codes.
enum class ErrorKind {
  Parse,
  Range,
  Shape,
  Config,
  Io,
  Contention,
  Unreachable,
  Overlap,
  CollateralWrite,
  ViaMap,
  Retention,
  Lockup,
  ShortCycle,
  Calibration,
  Uncalibrated,
  Argument,
};

std::string_view to_string(ErrorKind kind);

/// True for failures caused by bad user input (files, config, flags) as
/// opposed to an illegal schedule or broken internal invariant.
bool is_input_error(ErrorKind kind);

class SimError : public std::runtime_error {
 public:
  SimError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gem3d
