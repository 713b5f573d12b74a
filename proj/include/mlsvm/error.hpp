#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mlsvm {

/// Base class of every exception thrown by the library.
class error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Unreadable or unwritable file.
class io_error : public error {
  public:
    using error::error;
};

/// Malformed input text. line() is 1-based, 0 when not tied to a line.
class parse_error : public error {
  public:
    parse_error(const std::string& what, std::size_t line = 0)
        : error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

/// Arguments violating a documented precondition (sizes, ranges, single-class data).
class invalid_argument : public error {
  public:
    using error::error;
};

/// Feature-count mismatch between a model/dataset and its input.
class dimension_error : public invalid_argument {
  public:
    using invalid_argument::invalid_argument;
};

}  // namespace mlsvm
