#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sam {

/// Invalid configuration: bad flags, scenario fields, missing CSV columns.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A single malformed input row. `line()` is 1-based and counts the header.
class RecordError : public std::runtime_error {
public:
    RecordError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message),
          line_(line),
          detail_(message) {}

    std::size_t line() const { return line_; }
    /// The message without the line prefix.
    const std::string& detail() const { return detail_; }

private:
    std::size_t line_;
    std::string detail_;
};

/// A caller violated an operation's documented precondition.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace sam
