#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mhd {

enum class ErrorCode {
  InvalidArgument,
  GridMismatch,
  NonFinite,
  DensityFloor,
  CFLViolation,
  FoldError,
  NonConvergence,
  VersionMismatch,
  TruncatedBody,
  MalformedHeader,
  ChecksumMismatch,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

}  // namespace mhd
