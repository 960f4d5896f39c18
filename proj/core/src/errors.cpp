#include "nsub/errors.hpp"

namespace nsub {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::MissingTemporalAnchor: return "MissingTemporalAnchor";
    case ErrorCode::ForbiddenTemporalAnchor: return "ForbiddenTemporalAnchor";
    case ErrorCode::MalformedId: return "MalformedId";
    case ErrorCode::MalformedValue: return "MalformedValue";
    case ErrorCode::UnknownEntity: return "UnknownEntity";
    case ErrorCode::RegimeViolation: return "RegimeViolation";
    case ErrorCode::UnknownRelationType: return "UnknownRelationType";
    case ErrorCode::UnknownRegime: return "UnknownRegime";
    case ErrorCode::SameRegime: return "SameRegime";
    case ErrorCode::MalformedSchema: return "MalformedSchema";
    case ErrorCode::DuplicateLayerName: return "DuplicateLayerName";
    case ErrorCode::DanglingTarget: return "DanglingTarget";
    case ErrorCode::NamespaceViolation: return "NamespaceViolation";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::SequenceGap: return "SequenceGap";
    case ErrorCode::ReplayViolation: return "ReplayViolation";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code),
      detail_(std::move(detail)) {}

ImportError::ImportError(ErrorCode code, std::size_t line, std::string detail,
                         std::optional<ErrorCode> cause)
    : Error(code, "line " + std::to_string(line) + ": " + detail),
      line_(line),
      cause_(cause) {}

}  // namespace nsub
