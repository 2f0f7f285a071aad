#pragma once

#include <stdexcept>
#include <string>

namespace qrmm {

/// Base error for the toolkit. Every subclass carries a stable one-word
/// category string so callers (and the CLI) can report machine-parsable
/// failures without inspecting message text.
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& message)
      : std::runtime_error(message), category_(std::move(category)) {}

  const std::string& category() const { return category_; }

 private:
  std::string category_;
};

/// Invalid argument values (quantile outside (0,1), non-finite input, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message) : Error("domain", message) {}
};

/// SPD factorization failed; `pivot` is the zero-based index of the
/// offending pivot.
class SingularError : public Error {
 public:
  SingularError(const std::string& message, int pivot)
      : Error("singular", message), pivot_(pivot) {}

  int pivot() const { return pivot_; }

 private:
  int pivot_;
};

/// Design matrix is rank deficient; `column` names the dependent column.
class RankError : public Error {
 public:
  RankError(const std::string& message, int column)
      : Error("rank", message), column_(column) {}

  int column() const { return column_; }

 private:
  int column_;
};

/// A pilot estimate is too close to zero to build adaptive-lasso weights,
/// or a fit degenerated (zero total loss where a log is required).
class DegenerateError : public Error {
 public:
  explicit DegenerateError(const std::string& message)
      : Error("degenerate", message) {}
};

/// Kernel bandwidth so small every weight underflowed.
class BandwidthError : public Error {
 public:
  explicit BandwidthError(const std::string& message)
      : Error("bandwidth", message) {}
};

/// Root finding / numeric inversion failed to converge.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& message)
      : Error("numeric", message) {}
};

/// Malformed input file (CSV, scenario spec).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message) : Error("parse", message) {}
};

/// Filesystem problem (missing file, unwritable output).
class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error("io", message) {}
};

}  // namespace qrmm
