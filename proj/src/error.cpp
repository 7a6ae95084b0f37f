#include "lastmile/error.h"

namespace lastmile {

const char* to_string(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::Parse: return "parse";
    case ErrorCategory::Validation: return "validation";
    case ErrorCategory::Cap: return "cap";
    case ErrorCategory::Internal: return "internal";
  }
  return "internal";
}

}  // namespace lastmile
