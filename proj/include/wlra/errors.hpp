#ifndef WLRA_ERRORS_HPP
#define WLRA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wlra {

// Parameter errors use std::invalid_argument directly.

// Input is structurally valid but the operation is undefined on it
// (all-zero weights, zero matrix where probabilities are needed, ...).
class DegenerateInputError : public std::invalid_argument {
public:
  explicit DegenerateInputError(const std::string& msg) : std::invalid_argument(msg) {}
};

// An iterative numerical routine failed to converge or produced
// non-finite values; message carries diagnostics.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Secret recovery attempted from an approximation that is not accurate
// enough to round correctly.
class RecoveryError : public std::runtime_error {
public:
  explicit RecoveryError(const std::string& msg) : std::runtime_error(msg) {}
};

// File or stream contents do not match the expected format.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& where, long line, const std::string& msg)
      : std::runtime_error(where + ":" + std::to_string(line) + ": " + msg),
        line_(line) {}
  explicit ParseError(const std::string& msg) : std::runtime_error(msg), line_(0) {}
  long line() const { return line_; }

private:
  long line_;
};

}  // namespace wlra

#endif
