#include "core/error.hpp"

namespace ocs {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::UnreachableTarget: return "unreachable-target";
    case ErrorCode::NoFringe: return "no-fringe";
    case ErrorCode::InsufficientData: return "insufficient-data";
    case ErrorCode::ExtrapolationRefused: return "extrapolation-refused";
    case ErrorCode::UndefinedRatio: return "undefined-ratio";
    case ErrorCode::NonFinite: return "non-finite";
    case ErrorCode::Parse: return "parse-error";
    case ErrorCode::Io: return "io-error";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace ocs
