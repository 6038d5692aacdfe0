#include "tabletitle/error.hpp"

namespace tabletitle {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyDocument: return "EmptyDocument";
    case ErrorCode::EmptyCandidates: return "EmptyCandidates";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::TooFewRecords: return "TooFewRecords";
    case ErrorCode::InvalidId: return "InvalidId";
    case ErrorCode::EmptySource: return "EmptySource";
    case ErrorCode::AllMasked: return "AllMasked";
    case ErrorCode::ShapeError: return "ShapeError";
    case ErrorCode::NonFiniteGradient: return "NonFiniteGradient";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::BadFormat: return "BadFormat";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::Usage: return "Usage";
  }
  return "Unknown";
}

}  // namespace tabletitle
