#include "twchar/error.hpp"

namespace twchar {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ZeroAtPrecision: return "ZeroAtPrecision";
    case ErrorCode::NotAUnit: return "NotAUnit";
    case ErrorCode::MinusOneIsSquare: return "MinusOneIsSquare";
    case ErrorCode::InsufficientPrecision: return "InsufficientPrecision";
    case ErrorCode::PrecisionTooLow: return "PrecisionTooLow";
    case ErrorCode::SingularChangeOfBasis: return "SingularChangeOfBasis";
    case ErrorCode::UnknownLemma: return "UnknownLemma";
    case ErrorCode::NoGeometricTail: return "NoGeometricTail";
    case ErrorCode::NotThetaRegular: return "NotThetaRegular";
    case ErrorCode::WrongKind: return "WrongKind";
    case ErrorCode::ShapeNotInCatalog: return "ShapeNotInCatalog";
    case ErrorCode::NotCyclic: return "NotCyclic";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Inconsistent: return "Inconsistent";
  }
  return "Unknown";
}

}  // namespace twchar
