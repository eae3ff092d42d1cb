#pragma once

#include <stdexcept>
#include <string>

namespace uavplan {

enum class ErrorCategory {
  invalid_argument,
  infeasible_coverage,
  infeasible_backhaul,
  instance_too_large,
  io_error,
  schema_error,
};

inline const char* to_string(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::invalid_argument: return "invalid_argument";
    case ErrorCategory::infeasible_coverage: return "infeasible_coverage";
    case ErrorCategory::infeasible_backhaul: return "infeasible_backhaul";
    case ErrorCategory::instance_too_large: return "instance_too_large";
    case ErrorCategory::io_error: return "io_error";
    case ErrorCategory::schema_error: return "schema_error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, std::string message)
      : std::runtime_error(std::move(message)), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

}  // namespace uavplan
