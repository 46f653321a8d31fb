#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netform {

/// A precondition on the current graph state does not hold (e.g. adding an
/// edge that already exists).
class StateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Internal data disagree with each other (e.g. a payment on a non-edge).
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// An exhaustive routine was asked to run above its size guard.
class SizeError : public std::length_error {
public:
    using std::length_error::length_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    [[nodiscard]] std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

}  // namespace netform
