#include "hsr/error.hpp"

namespace hsr {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kNotPure: return "NotPure";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kTooSmall: return "TooSmall";
    case ErrorCode::kNotRgb: return "NotRGB";
    case ErrorCode::kMalformedHeader: return "MalformedHeader";
    case ErrorCode::kTruncatedData: return "TruncatedData";
    case ErrorCode::kBadAspect: return "BadAspect";
    case ErrorCode::kOutOfBounds: return "OutOfBounds";
    case ErrorCode::kEmptyMask: return "EmptyMask";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kDegenerateCorrespondences: return "DegenerateCorrespondences";
    case ErrorCode::kDivergence: return "Divergence";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

}  // namespace hsr
