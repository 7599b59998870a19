#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace artrec {

// Every failure raised by the core carries one of these codes. The names are
// stable and double as machine-readable codes on the HTTP surface.
enum class ErrorCode {
  IoError,
  SchemaError,
  DuplicateId,
  NotFound,
  MalformedHeader,
  DimensionMismatch,
  UnknownPainting,
  UnknownSeed,
  EmptySeeds,
  TooManySeeds,
  IllegalTransition,
  MissingReason,
  WrongPickCount,
  NotInList,
  DuplicatePick,
  NonMonotonicTimestamp,
  DuplicateCapture,
  OutOfOrder,
  EmptyText,
  RangeError,
  IncompleteSession,
  ClassifierUnavailable,
  UnknownTheme,
  VersionConflict,
  ConfigError,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace artrec
