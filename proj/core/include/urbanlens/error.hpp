#pragma once

#include <stdexcept>
#include <string>

namespace urbanlens {

enum class ErrorCode {
  invalid_argument,
  config,
  ingest,
  missing_layer,
  prerequisite,
  version_mismatch,
  corrupt_workspace,
  unsupported_layer,
  not_found,
  io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace urbanlens
