#include "resfluor/error.hpp"

namespace resfluor {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParameters: return "invalid-parameters";
    case ErrorCode::UnreachableRatio: return "unreachable-ratio";
    case ErrorCode::NoConvergence: return "no-convergence";
    case ErrorCode::DegeneratePattern: return "degenerate-pattern";
    case ErrorCode::OverflowOrder: return "overflow-order";
    case ErrorCode::UndrivenAtom: return "undriven-atom";
    case ErrorCode::TooLarge: return "too-large";
    case ErrorCode::EmptyInterval: return "empty-interval";
    case ErrorCode::ConfigInvalid: return "config-invalid";
    case ErrorCode::NonNegativeIdeal: return "non-negative-ideal";
  }
  return "unknown";
}

}  // namespace resfluor
