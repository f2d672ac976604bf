#include "mhd/errors.hpp"

namespace mhd {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DensityFloor: return "DensityFloor";
    case ErrorCode::CFLViolation: return "CFLViolation";
    case ErrorCode::FoldError: return "FoldError";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::TruncatedBody: return "TruncatedBody";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace mhd
