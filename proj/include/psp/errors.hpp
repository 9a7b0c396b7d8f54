#pragma once

#include <stdexcept>
#include <string>

namespace psp {

// Raised when input text (edge lists, CLI rationals) cannot be interpreted.
// line() is 1-based; 0 means "no specific line".
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}

    int line() const { return line_; }

private:
    int line_ = 0;
};

// Raised when an internal invariant is violated: a caller broke a precondition
// or an algorithm produced a state it proved impossible. Never raised on
// malformed user input.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace psp
