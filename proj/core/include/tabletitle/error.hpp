#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tabletitle {

// Every failure a module can report. The CLI prints the enumerator name.
enum class ErrorCode {
  EmptyDocument,
  EmptyCandidates,
  EmptyCorpus,
  TooFewRecords,
  InvalidId,
  EmptySource,
  AllMasked,
  ShapeError,
  NonFiniteGradient,
  EmptyInput,
  LengthMismatch,
  BadFormat,
  IoError,
  Usage,
};

std::string_view error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace tabletitle
