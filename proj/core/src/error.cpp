#include "extrofit/error.hpp"

namespace extrofit {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InconsistentDimension: return "InconsistentDimension";
    case ErrorCode::UnparseableNumber: return "UnparseableNumber";
    case ErrorCode::DuplicateToken: return "DuplicateToken";
    case ErrorCode::UnknownToken: return "UnknownToken";
    case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::BadDimension: return "BadDimension";
    case ErrorCode::SingularDenominator: return "SingularDenominator";
    case ErrorCode::PartitionMismatch: return "PartitionMismatch";
    case ErrorCode::DegenerateLexicon: return "DegenerateLexicon";
    case ErrorCode::NonFiniteUpdate: return "NonFiniteUpdate";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::UnparseableLine: return "UnparseableLine";
    case ErrorCode::WrongColumnCount: return "WrongColumnCount";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

Error Error::at_line(ErrorCode code, std::size_t line, const std::string& detail) {
  Error e(code, "line " + std::to_string(line) + ": " + detail);
  e.line_ = line;
  return e;
}

}  // namespace extrofit
