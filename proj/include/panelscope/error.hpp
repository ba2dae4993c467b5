#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace panelscope {

enum class ErrorCode {
  // panel structure
  DuplicateKeyIndex,
  MissingColumn,
  MissingKeyOrIndex,
  TooFewIndexValues,
  EmptyTable,
  ColumnCollision,
  UnknownColumn,
  TypeMismatch,
  KeyMismatch,
  // features
  EmptyInput,
  NonFiniteInput,
  AllMissingForKey,
  TooFewValues,
  DuplicateName,
  // sampling
  SizeExceedsKeys,
  FracOutOfRange,
  TooManyStrata,
  NotEnoughKeys,
  // nearness
  DegenerateKey,
  MissingFit,
  EmptyFeatures,
  NOutOfRange,
  // io
  FileNotFound,
  ParseError,
  IoError,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. `line()` is set when the error can be
/// traced back to a line of an input file.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message,
        std::optional<std::size_t> line = std::nullopt);

  /// Builds an error that points at an input record (0-based), for callers
  /// that can translate it into a file line.
  static Error for_record(ErrorCode code, std::string message, std::size_t record);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }
  std::optional<std::size_t> line() const noexcept { return line_; }
  std::optional<std::size_t> record() const noexcept { return record_; }

  /// Same error, annotated with a source line.
  Error at_line(std::size_t line) const;

 private:
  ErrorCode code_;
  std::string detail_;
  std::optional<std::size_t> line_;
  std::optional<std::size_t> record_;
};

}  // namespace panelscope
