#pragma once

#include <stdexcept>
#include <string>

namespace urllc {

enum class ErrorKind { Parse, Validation, Solver, Domain, Io };

/// Base of every error raised by the library. Each kind maps onto one CLI
/// exit code so that scripted callers can tell failures apart.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    int exit_code() const noexcept {
        switch (kind_) {
        case ErrorKind::Parse: return 2;
        case ErrorKind::Validation: return 3;
        case ErrorKind::Solver: return 4;
        case ErrorKind::Domain: return 5;
        case ErrorKind::Io: return 6;
        }
        return 1;
    }

private:
    ErrorKind kind_;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

/// Inconsistent or out-of-range configuration (including invalid BLER profiles).
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& what)
        : Error(ErrorKind::Validation, field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class ParseError : public Error {
public:
    ParseError(std::string location, const std::string& what)
        : Error(ErrorKind::Parse, location + ": " + what), location_(std::move(location)) {}

    const std::string& location() const noexcept { return location_; }

private:
    std::string location_;
};

enum class SolverFailure { NoBracket, NonMonotone };

class SolverError : public Error {
public:
    SolverError(SolverFailure reason, const std::string& what)
        : Error(ErrorKind::Solver, what), reason_(reason) {}

    SolverFailure reason() const noexcept { return reason_; }

private:
    SolverFailure reason_;
};

class IoError : public Error {
public:
    IoError(std::string path, const std::string& what)
        : Error(ErrorKind::Io, path + ": " + what), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Solver: return "solver";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Io: return "io";
    }
    return "unknown";
}

} // namespace urllc
