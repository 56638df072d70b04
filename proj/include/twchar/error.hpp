#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace twchar {

enum class ErrorCode {
  ZeroAtPrecision,
  NotAUnit,
  MinusOneIsSquare,
  InsufficientPrecision,
  PrecisionTooLow,
  SingularChangeOfBasis,
  UnknownLemma,
  NoGeometricTail,
  NotThetaRegular,
  WrongKind,
  ShapeNotInCatalog,
  NotCyclic,
  InvalidArgument,
  Inconsistent,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace twchar
