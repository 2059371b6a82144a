#pragma once

#include <stdexcept>
#include <string>

namespace ampsamp {

/// Error raised by parsers; carries the offending file and line when known.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& file, int line, const std::string& what)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
          file_(file), line_(line) {}
    const std::string& file() const { return file_; }
    int line() const { return line_; }

private:
    std::string file_;
    int line_;
};

/// Error raised when a documented precondition or guard is violated.
class guard_error : public std::runtime_error {
public:
    explicit guard_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ampsamp
