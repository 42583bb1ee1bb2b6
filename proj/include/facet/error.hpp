#ifndef FACET_ERROR_HPP
#define FACET_ERROR_HPP

#include <stdexcept>
#include <string>

namespace facet {

enum class ErrorKind {
    Parse,
    Duplicate,
    Format,
    NotFound,
    Size,
    Shape,
    Degeneracy,
    Data,
    Bound,
    Alignment,
    Coverage,
    Source,
    Config,
    Usage,
    Io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base exception for everything the library throws. The kind drives the
/// CLI exit code: Config and Usage map to 2, everything else to 1.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Parse failure in a text format; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message)
        : Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace facet

#endif
