#pragma once

#include <stdexcept>
#include <string>

namespace bfq {

enum class ErrorCode {
  Parse,
  Invalid,
  NonSquareZero,
  DanglingFace,
  BoundaryMarkingNotClosed,
  BasisMismatch,
  NotExact,
  DegenerateOmega,
  UnsupportedExponent,
  DegenerateHessian,
  InterfaceMismatch,
  NotComparable,
  IndexMismatch,
  BoundsTooLarge,
  NonConvergent,
  OrderUnavailable,
  IdentityFailed,
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Invalid: return "Invalid";
    case ErrorCode::NonSquareZero: return "NonSquareZero";
    case ErrorCode::DanglingFace: return "DanglingFace";
    case ErrorCode::BoundaryMarkingNotClosed: return "BoundaryMarkingNotClosed";
    case ErrorCode::BasisMismatch: return "BasisMismatch";
    case ErrorCode::NotExact: return "NotExact";
    case ErrorCode::DegenerateOmega: return "DegenerateOmega";
    case ErrorCode::UnsupportedExponent: return "UnsupportedExponent";
    case ErrorCode::DegenerateHessian: return "DegenerateHessian";
    case ErrorCode::InterfaceMismatch: return "InterfaceMismatch";
    case ErrorCode::NotComparable: return "NotComparable";
    case ErrorCode::IndexMismatch: return "IndexMismatch";
    case ErrorCode::BoundsTooLarge: return "BoundsTooLarge";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::OrderUnavailable: return "OrderUnavailable";
    case ErrorCode::IdentityFailed: return "IdentityFailed";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace bfq
