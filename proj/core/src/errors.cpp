#include "psqm/errors.hpp"

namespace psqm {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::CutoffTooSmall: return "CutoffTooSmall";
    case ErrorKind::NullState: return "NullState";
    case ErrorKind::ModeMismatch: return "ModeMismatch";
    case ErrorKind::MemoryBoundExceeded: return "MemoryBoundExceeded";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::DegreeBoundExceeded: return "DegreeBoundExceeded";
    case ErrorKind::MomentOrderMissing: return "MomentOrderMissing";
    case ErrorKind::PrecisionInsufficient: return "PrecisionInsufficient";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::NonPositiveQfi: return "NonPositiveQfi";
    case ErrorKind::ZeroMeanPhoton: return "ZeroMeanPhoton";
    case ErrorKind::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorKind::UnknownPreset: return "UnknownPreset";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void raise(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace psqm
