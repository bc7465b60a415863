#pragma once

#include <stdexcept>
#include <string>

namespace npduet {

// Two error classes, matching the CLI exit-code contract:
// validation errors (bad input, bad configuration) map to exit code 1,
// accuracy errors (a numerical guarantee cannot be met) map to exit code 2.
enum class ErrorKind { validation, accuracy };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorKind::validation, w) {}
};

struct PoleError : Error {
  explicit PoleError(const std::string& w) : Error(ErrorKind::validation, w) {}
};

struct GeometryError : Error {
  explicit GeometryError(const std::string& w) : Error(ErrorKind::validation, w) {}
};

// Near-resonant mode denominator; real admissible conductivities cannot trigger it.
struct ResonanceError : Error {
  explicit ResonanceError(const std::string& w) : Error(ErrorKind::validation, w) {}
};

// Data violates a solvability precondition (e.g. nonzero-mean flux).
struct CompatibilityError : Error {
  explicit CompatibilityError(const std::string& w) : Error(ErrorKind::validation, w) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorKind::validation, w) {}
};

struct AccuracyError : Error {
  explicit AccuracyError(const std::string& w) : Error(ErrorKind::accuracy, w) {}
};

struct LinalgError : Error {
  explicit LinalgError(const std::string& w) : Error(ErrorKind::accuracy, w) {}
};

// Requested truncation cannot represent the data to tolerance.
struct TruncationError : Error {
  TruncationError(const std::string& w, int suggested) : Error(ErrorKind::accuracy, w), suggested_order(suggested) {}
  int suggested_order;
};

}  // namespace npduet
