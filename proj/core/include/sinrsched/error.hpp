#pragma once

#include <stdexcept>
#include <string>

namespace sinrsched {

// Every failure the library can signal, so callers (and the CLI exit-code
// mapping) can switch on the kind instead of parsing message text.
enum class ErrorKind {
  UnknownLink,
  DegenerateDistance,
  InfeasibleLink,
  InfeasibleInput,
  TooLarge,
  BadParams,
  GenerationFailed,
  ParseError,
  SchemaVersionMismatch,
  ConfigInvalid,
  MetadataMissing,
  MetricInvalid,
};

inline const char* to_string(ErrorKind k) noexcept {
  switch (k) {
    case ErrorKind::UnknownLink: return "UnknownLink";
    case ErrorKind::DegenerateDistance: return "DegenerateDistance";
    case ErrorKind::InfeasibleLink: return "InfeasibleLink";
    case ErrorKind::InfeasibleInput: return "InfeasibleInput";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::GenerationFailed: return "GenerationFailed";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::MetadataMissing: return "MetadataMissing";
    case ErrorKind::MetricInvalid: return "MetricInvalid";
  }
  return "Error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sinrsched
