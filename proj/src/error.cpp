#include "singode/error.hpp"

#include <sstream>

namespace singode {

namespace {

std::string syntax_message(std::size_t offset, const std::vector<std::string>& expected,
                           const std::string& found) {
    std::ostringstream os;
    os << "syntax error at offset " << offset << ": expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i > 0) os << (i + 1 == expected.size() ? " or " : ", ");
        os << expected[i];
    }
    os << ", found " << found;
    return os.str();
}

}  // namespace

SyntaxError::SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& found)
    : Error(syntax_message(offset, expected, found)), offset_(offset), expected_(std::move(expected)) {}

UnknownIdentifier::UnknownIdentifier(std::size_t offset, const std::string& name)
    : Error("unknown identifier '" + name + "' at offset " + std::to_string(offset)),
      offset_(offset),
      name_(name) {}

DomainError::DomainError(const std::string& what, std::string subexpression)
    : Error(what + " in '" + subexpression + "'"), subexpression_(std::move(subexpression)) {}

FormatError::FormatError(std::size_t line, const std::string& what)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

}  // namespace singode
