#ifndef WCBAYES_ERROR_HPP
#define WCBAYES_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace wcbayes {

enum class ErrorCode {
  InvalidInput,
  InfeasibleSequence,
  InfeasibleClass,
  InfeasibleEpsilon,
  PriorsUnequal,
  AllDegenerate,
  PreconditionViolated,
  UnsupportedRank,
  Numeric,
  NotTwoClasses,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "INVALID_INPUT";
    case ErrorCode::InfeasibleSequence: return "INFEASIBLE_SEQUENCE";
    case ErrorCode::InfeasibleClass: return "INFEASIBLE_CLASS";
    case ErrorCode::InfeasibleEpsilon: return "INFEASIBLE_EPSILON";
    case ErrorCode::PriorsUnequal: return "PRIORS_UNEQUAL";
    case ErrorCode::AllDegenerate: return "ALL_DEGENERATE";
    case ErrorCode::PreconditionViolated: return "PRECONDITION_VIOLATED";
    case ErrorCode::UnsupportedRank: return "UNSUPPORTED_RANK";
    case ErrorCode::Numeric: return "NUMERIC";
    case ErrorCode::NotTwoClasses: return "NOT_TWO_CLASSES";
  }
  return "UNKNOWN";
}

/// Exception carrying a machine-readable code; the CLI maps codes to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wcbayes

#endif
