#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace psqm {

enum class ErrorKind {
  CutoffTooSmall,
  NullState,
  ModeMismatch,
  MemoryBoundExceeded,
  OutOfRange,
  DegreeBoundExceeded,
  MomentOrderMissing,
  PrecisionInsufficient,
  Singular,
  NonPositiveQfi,
  ZeroMeanPhoton,
  UnsupportedOrder,
  UnknownPreset,
  ConfigInvalid,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries a kind so callers (the sweep
// runner in particular) can turn it into a flagged row instead of aborting.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& what);

}  // namespace psqm
