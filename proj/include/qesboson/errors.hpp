#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qesboson {

enum class ErrorKind {
  TruncationOverflow,
  ChargeViolation,
  NonIntegerShift,
  FractionalResidue,
  ModeTwoResidue,
  NotInvariant,
  ConvergenceFailure,
  ForwardSolveBlocked,
  InverseUndefined,
  IdentityFailure,
  NonConvergent,
  GridDisagreement,
  ParseError,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::TruncationOverflow: return "TruncationOverflow";
    case ErrorKind::ChargeViolation: return "ChargeViolation";
    case ErrorKind::NonIntegerShift: return "NonIntegerShift";
    case ErrorKind::FractionalResidue: return "FractionalResidue";
    case ErrorKind::ModeTwoResidue: return "ModeTwoResidue";
    case ErrorKind::NotInvariant: return "NotInvariant";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::ForwardSolveBlocked: return "ForwardSolveBlocked";
    case ErrorKind::InverseUndefined: return "InverseUndefined";
    case ErrorKind::IdentityFailure: return "IdentityFailure";
    case ErrorKind::NonConvergent: return "NonConvergent";
    case ErrorKind::GridDisagreement: return "GridDisagreement";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI exit-code mapping) can dispatch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qesboson
