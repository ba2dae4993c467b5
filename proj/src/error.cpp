#include "panelscope/error.hpp"

namespace panelscope {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DuplicateKeyIndex: return "DuplicateKeyIndex";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::MissingKeyOrIndex: return "MissingKeyOrIndex";
    case ErrorCode::TooFewIndexValues: return "TooFewIndexValues";
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::ColumnCollision: return "ColumnCollision";
    case ErrorCode::UnknownColumn: return "UnknownColumn";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::KeyMismatch: return "KeyMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::AllMissingForKey: return "AllMissingForKey";
    case ErrorCode::TooFewValues: return "TooFewValues";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::SizeExceedsKeys: return "SizeExceedsKeys";
    case ErrorCode::FracOutOfRange: return "FracOutOfRange";
    case ErrorCode::TooManyStrata: return "TooManyStrata";
    case ErrorCode::NotEnoughKeys: return "NotEnoughKeys";
    case ErrorCode::DegenerateKey: return "DegenerateKey";
    case ErrorCode::MissingFit: return "MissingFit";
    case ErrorCode::EmptyFeatures: return "EmptyFeatures";
    case ErrorCode::NOutOfRange: return "NOutOfRange";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

std::string compose(ErrorCode code, const std::string& message,
                    std::optional<std::size_t> line) {
  std::string out(to_string(code));
  if (line) out += " (line " + std::to_string(*line) + ")";
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, std::string message, std::optional<std::size_t> line)
    : std::runtime_error(compose(code, message, line)),
      code_(code),
      detail_(std::move(message)),
      line_(line) {}

Error Error::for_record(ErrorCode code, std::string message, std::size_t record) {
  Error e(code, std::move(message));
  e.record_ = record;
  return e;
}

Error Error::at_line(std::size_t line) const {
  Error e(code_, detail_, line);
  e.record_ = record_;
  return e;
}

}  // namespace panelscope
