#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace singode {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parse failure in the expression language.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& found);

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

class UnknownIdentifier : public Error {
public:
    UnknownIdentifier(std::size_t offset, const std::string& name);

    std::size_t offset() const noexcept { return offset_; }
    const std::string& name() const noexcept { return name_; }

private:
    std::size_t offset_;
    std::string name_;
};

/// Evaluation outside the domain of a sub-expression (x/0, ln of a non-positive value, ...).
class DomainError : public Error {
public:
    DomainError(const std::string& what, std::string subexpression);

    const std::string& subexpression() const noexcept { return subexpression_; }

private:
    std::string subexpression_;
};

/// Malformed problem file; carries the 1-based line number (0 when not line specific).
class FormatError : public Error {
public:
    FormatError(std::size_t line, const std::string& what);

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Argument outside the documented range of an operation.
class RangeError : public Error {
public:
    using Error::Error;
};

}  // namespace singode
