#include "artrec/error.hpp"

namespace artrec {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnknownPainting: return "UnknownPainting";
    case ErrorCode::UnknownSeed: return "UnknownSeed";
    case ErrorCode::EmptySeeds: return "EmptySeeds";
    case ErrorCode::TooManySeeds: return "TooManySeeds";
    case ErrorCode::IllegalTransition: return "IllegalTransition";
    case ErrorCode::MissingReason: return "MissingReason";
    case ErrorCode::WrongPickCount: return "WrongPickCount";
    case ErrorCode::NotInList: return "NotInList";
    case ErrorCode::DuplicatePick: return "DuplicatePick";
    case ErrorCode::NonMonotonicTimestamp: return "NonMonotonicTimestamp";
    case ErrorCode::DuplicateCapture: return "DuplicateCapture";
    case ErrorCode::OutOfOrder: return "OutOfOrder";
    case ErrorCode::EmptyText: return "EmptyText";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::IncompleteSession: return "IncompleteSession";
    case ErrorCode::ClassifierUnavailable: return "ClassifierUnavailable";
    case ErrorCode::UnknownTheme: return "UnknownTheme";
    case ErrorCode::VersionConflict: return "VersionConflict";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace artrec
