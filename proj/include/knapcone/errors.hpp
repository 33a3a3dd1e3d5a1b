#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace knapcone {

enum class ErrorCode {
  RankDeficient,
  ZeroDirection,
  DependentRows,
  InvalidLabel,
  OutOfRange,
  DegenerateFactor,
  SingularMatrix,
  NonIntegerExponent,
  CoincidentFactors,
  NonIntegerLeaf,
  GcdNotOne,
  AlreadySlacked,
  ZeroType,
  SlackDegenerate,
  NonGenericDirection,
  NonIntegerResult,
  NonProperFactor,
  InvalidInput,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::ZeroDirection: return "ZeroDirection";
    case ErrorCode::DependentRows: return "DependentRows";
    case ErrorCode::InvalidLabel: return "InvalidLabel";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DegenerateFactor: return "DegenerateFactor";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NonIntegerExponent: return "NonIntegerExponent";
    case ErrorCode::CoincidentFactors: return "CoincidentFactors";
    case ErrorCode::NonIntegerLeaf: return "NonIntegerLeaf";
    case ErrorCode::GcdNotOne: return "GcdNotOne";
    case ErrorCode::AlreadySlacked: return "AlreadySlacked";
    case ErrorCode::ZeroType: return "ZeroType";
    case ErrorCode::SlackDegenerate: return "SlackDegenerate";
    case ErrorCode::NonGenericDirection: return "NonGenericDirection";
    case ErrorCode::NonIntegerResult: return "NonIntegerResult";
    case ErrorCode::NonProperFactor: return "NonProperFactor";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace knapcone
