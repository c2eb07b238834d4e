#include "vds/error.hpp"

namespace vds {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::AllZeroDensity: return "AllZeroDensity";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::NegativeValue: return "NegativeValue";
    case ErrorCode::InvalidDecay: return "InvalidDecay";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidPermutation: return "InvalidPermutation";
    case ErrorCode::TooManyPointsForExact: return "TooManyPointsForExact";
    case ErrorCode::DegeneratePath: return "DegeneratePath";
    case ErrorCode::InvalidStep: return "InvalidStep";
    case ErrorCode::ResolutionMismatch: return "ResolutionMismatch";
    case ErrorCode::UnreachableTarget: return "UnreachableTarget";
    case ErrorCode::InvalidSide: return "InvalidSide";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SideMismatch: return "SideMismatch";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::ZeroReference: return "ZeroReference";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace vds
