#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dial {

/// Machine-parsable error categories, mirrored by the CLI's exit codes.
enum class ErrorCategory {
    InvalidInput,
    InvalidConfig,
    Parse,
    Io,
    Infeasible,
};

inline const char* to_string(ErrorCategory category) noexcept {
    switch (category) {
        case ErrorCategory::InvalidInput: return "invalid-input";
        case ErrorCategory::InvalidConfig: return "invalid-config";
        case ErrorCategory::Parse: return "parse-error";
        case ErrorCategory::Io: return "io-error";
        case ErrorCategory::Infeasible: return "infeasible";
    }
    return "error";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

class InvalidInputError : public Error {
public:
    explicit InvalidInputError(const std::string& message)
        : Error(ErrorCategory::InvalidInput, message) {}
};

class InvalidConfigError : public Error {
public:
    explicit InvalidConfigError(const std::string& message)
        : Error(ErrorCategory::InvalidConfig, message) {}
};

/// Carries the 1-based line number of the offending input line when the
/// format is line-oriented; 0 for binary formats.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& message) : Error(ErrorCategory::Parse, message) {}

    ParseError(const std::string& message, std::size_t line)
        : Error(ErrorCategory::Parse, message + " (line " + std::to_string(line) + ")"),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_ = 0;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& message) : Error(ErrorCategory::Io, message) {}
};

/// Raised when a selection problem admits no feasible solution. The message
/// names the binding constraint (cardinality or intersection prohibition).
class InfeasibleError : public Error {
public:
    explicit InfeasibleError(const std::string& message)
        : Error(ErrorCategory::Infeasible, message) {}
};

}  // namespace dial
