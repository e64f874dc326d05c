#pragma once

#include <stdexcept>
#include <string>

namespace sic {

enum class ErrorKind {
  config,           // invalid configuration value
  argument,         // bad argument to an operation
  io,               // file cannot be opened / read / written
  format,           // malformed file header or truncated payload
  length_mismatch,  // paired sequences of unequal length
  non_finite,       // NaN/Inf where finite values are required
  structure,        // parameter layout does not match architecture
  numerical,        // singular system or similar numerical failure
  divergence,       // training loss became non-finite
  metric,           // metric undefined for the given inputs
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::config: return "config";
    case ErrorKind::argument: return "argument";
    case ErrorKind::io: return "io";
    case ErrorKind::format: return "format";
    case ErrorKind::length_mismatch: return "length_mismatch";
    case ErrorKind::non_finite: return "non_finite";
    case ErrorKind::structure: return "structure";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::metric: return "metric";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(std::string(to_string(kind)) + ": " + msg), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sic
