#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ocs {

enum class ErrorCode {
  InvalidArgument,
  UnreachableTarget,
  NoFringe,
  InsufficientData,
  ExtrapolationRefused,
  UndefinedRatio,
  NonFinite,
  Parse,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the core carries a machine-readable code; the C API
/// maps it one-to-one onto ocs_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorCode::InvalidArgument, message);
}

}  // namespace ocs
