#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace decdyn {

// Error categories double as CLI exit codes: 2 parse, 3 validation, 4 fit, 5 I/O.
enum class ErrorCategory : int {
    parse = 2,
    validation = 3,
    fit = 4,
    io = 5,
};

// Base of every error thrown by the library. `code()` is a stable machine
// identity ("WrongColumnCount", "RankDeficient", ...), `what()` the human
// diagnostic naming file/row/field where applicable.
class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, std::string code, const std::string& message)
        : std::runtime_error(message), category_(category), code_(std::move(code)) {}

    [[nodiscard]] ErrorCategory category() const noexcept { return category_; }
    [[nodiscard]] const std::string& code() const noexcept { return code_; }
    [[nodiscard]] int exit_code() const noexcept { return static_cast<int>(category_); }

private:
    ErrorCategory category_;
    std::string code_;
};

class ParseError : public Error {
public:
    ParseError(std::string code, const std::string& message)
        : Error(ErrorCategory::parse, std::move(code), message) {}
};

class ValidationError : public Error {
public:
    ValidationError(std::string code, const std::string& message)
        : Error(ErrorCategory::validation, std::move(code), message) {}
};

class FitError : public Error {
public:
    FitError(std::string code, const std::string& message)
        : Error(ErrorCategory::fit, std::move(code), message) {}
};

class IoError : public Error {
public:
    IoError(std::string code, const std::string& message)
        : Error(ErrorCategory::io, std::move(code), message) {}
};

}  // namespace decdyn
