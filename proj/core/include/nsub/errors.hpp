#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nsub {

enum class ErrorCode {
  DuplicateId,
  MissingTemporalAnchor,
  ForbiddenTemporalAnchor,
  MalformedId,
  MalformedValue,
  UnknownEntity,
  RegimeViolation,
  UnknownRelationType,
  UnknownRegime,
  SameRegime,
  MalformedSchema,
  DuplicateLayerName,
  DanglingTarget,
  NamespaceViolation,
  MalformedLine,
  SequenceGap,
  ReplayViolation,
};

std::string_view to_string(ErrorCode code);

/// Base of every error raised by the library. what() renders as
/// "<Code>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

/// Raised while reading a log. `line` is 1-based. For ReplayViolation,
/// `cause` holds the store error that the replayed event triggered.
class ImportError : public Error {
 public:
  ImportError(ErrorCode code, std::size_t line, std::string detail,
              std::optional<ErrorCode> cause = std::nullopt);

  std::size_t line() const noexcept { return line_; }
  std::optional<ErrorCode> cause() const noexcept { return cause_; }

 private:
  std::size_t line_;
  std::optional<ErrorCode> cause_;
};

}  // namespace nsub
