#include "srw/error.hpp"

namespace srw {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::ColumnSumMismatch: return "ColumnSumMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InvalidVector: return "InvalidVector";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidAlpha: return "InvalidAlpha";
    case ErrorCode::NotStochastic: return "NotStochastic";
    case ErrorCode::MultipleRecurrentClasses: return "MultipleRecurrentClasses";
    case ErrorCode::SolveFailed: return "SolveFailed";
    case ErrorCode::StepOutOfRange: return "StepOutOfRange";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::IdentityMatrix: return "IdentityMatrix";
    case ErrorCode::PropertyBViolation: return "PropertyBViolation";
    case ErrorCode::NotAnEquilibrium: return "NotAnEquilibrium";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::EquilibriumCrossed: return "EquilibriumCrossed";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InfiniteNLL: return "InfiniteNLL";
    case ErrorCode::AllTransitionsUnobservable: return "AllTransitionsUnobservable";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace srw
