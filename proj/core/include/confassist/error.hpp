#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace confassist {

enum class ErrorCode {
  invalid_document,
  schema_violation,
  duplicate_id,
  reserved_name,
  empty_collection,
  invalid_reference,
  protocol,
  not_found,
  storage,
};

std::string_view to_string(ErrorCode code);

// Raised for configuration, validation and protocol failures. The message
// always names the offending id or field.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace confassist
