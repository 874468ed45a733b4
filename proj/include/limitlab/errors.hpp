#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace limitlab {

/// Requested computation would exceed a configured resource cap.
class CapExceeded : public std::runtime_error {
public:
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

class IndexOutOfRange : public std::out_of_range {
public:
    explicit IndexOutOfRange(const std::string& what) : std::out_of_range(what) {}
};

/// Truncation of the empty string.
class EmptyTruncate : public std::runtime_error {
public:
    EmptyTruncate() : std::runtime_error("cannot truncate the empty string") {}
};

/// A finite bit source ran dry.
class SourceExhausted : public std::runtime_error {
public:
    SourceExhausted() : std::runtime_error("bit source exhausted") {}
};

/// Backtracking search exhausted every path.
class DeadEnd : public std::runtime_error {
public:
    explicit DeadEnd(const std::string& what) : std::runtime_error(what) {}
};

/// Counter-machine program failed validation (unresolved label, empty body, ...).
class MalformedProgram : public std::runtime_error {
public:
    explicit MalformedProgram(const std::string& what) : std::runtime_error(what) {}
};

/// Text could not be parsed; carries the offending position.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t position, const std::string& expected)
        : std::runtime_error("parse error at position " + std::to_string(position) +
                             ": expected " + expected),
          position_(position),
          expected_(expected) {}

    std::size_t position() const noexcept { return position_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t position_;
    std::string expected_;
};

/// An atom was evaluated without an assignment.
class UnboundAtom : public std::runtime_error {
public:
    explicit UnboundAtom(const std::string& name)
        : std::runtime_error("unbound atom: " + name), name_(name) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

} // namespace limitlab
