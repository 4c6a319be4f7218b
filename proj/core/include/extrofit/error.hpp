#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace extrofit {

enum class ErrorCode {
  EmptyInput,
  InconsistentDimension,
  UnparseableNumber,
  DuplicateToken,
  UnknownToken,
  LabelOutOfRange,
  DegenerateInput,
  RankDeficient,
  BadDimension,
  SingularDenominator,
  PartitionMismatch,
  DegenerateLexicon,
  NonFiniteUpdate,
  ShapeMismatch,
  UnparseableLine,
  WrongColumnCount,
  LengthMismatch,
  InvalidConfig,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library. what() is "<Code>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  // Source line (1-based) for parse errors, 0 otherwise.
  std::size_t line() const noexcept { return line_; }

  static Error at_line(ErrorCode code, std::size_t line, const std::string& detail);

 private:
  ErrorCode code_;
  std::size_t line_ = 0;
};

}  // namespace extrofit
