#pragma once

#include <stdexcept>
#include <string>

namespace lastmile {

// Every failure surfaced to a caller carries one of these categories. The CLI
// maps them onto distinct exit codes.
enum class ErrorCategory {
  Parse,       // unreadable file, malformed document
  Validation,  // well-formed input violating a domain invariant
  Cap,         // exact oracle asked to exceed its size cap
  Internal,    // modeling fault, e.g. a simulation that never terminates
};

const char* to_string(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

inline Error parse_error(const std::string& msg) {
  return Error(ErrorCategory::Parse, msg);
}
inline Error validation_error(const std::string& msg) {
  return Error(ErrorCategory::Validation, msg);
}
inline Error cap_error(const std::string& msg) {
  return Error(ErrorCategory::Cap, msg);
}
inline Error internal_error(const std::string& msg) {
  return Error(ErrorCategory::Internal, msg);
}

}  // namespace lastmile
