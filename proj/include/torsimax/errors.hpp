#pragma once

#include <stdexcept>
#include <string>

namespace torsimax {

/// Machine-readable failure categories. The CLI maps these onto exit codes.
enum class ErrorKind {
    DegenerateTriangle,
    CollinearInput,
    DuplicateSites,
    ClassificationConflict,
    CornerTouching,
    ObtuseTriangle,
    ToleranceNotReached,
    NotObtuse,
    DomainError,
    NotInscribable,
    EmptyDomain,
    DegenerateBoundary,
    ResolutionTooCoarse,
    NotConverged,
    InvalidP,
    OutsideBall,
    ZeroField,
    EmptyList,
    InvalidParameters,
    EmptyResult,
    ParseError,
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorKind::CollinearInput: return "CollinearInput";
    case ErrorKind::DuplicateSites: return "DuplicateSites";
    case ErrorKind::ClassificationConflict: return "ClassificationConflict";
    case ErrorKind::CornerTouching: return "CornerTouching";
    case ErrorKind::ObtuseTriangle: return "ObtuseTriangle";
    case ErrorKind::ToleranceNotReached: return "ToleranceNotReached";
    case ErrorKind::NotObtuse: return "NotObtuse";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NotInscribable: return "NotInscribable";
    case ErrorKind::EmptyDomain: return "EmptyDomain";
    case ErrorKind::DegenerateBoundary: return "DegenerateBoundary";
    case ErrorKind::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::InvalidP: return "InvalidP";
    case ErrorKind::OutsideBall: return "OutsideBall";
    case ErrorKind::ZeroField: return "ZeroField";
    case ErrorKind::EmptyList: return "EmptyList";
    case ErrorKind::InvalidParameters: return "InvalidParameters";
    case ErrorKind::EmptyResult: return "EmptyResult";
    case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
    if (!condition) fail(kind, what);
}

} // namespace torsimax
