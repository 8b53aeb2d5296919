#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scanstat {

enum class ErrorCode {
    EmptyInput,
    OutOfUnitInterval,
    NonFiniteValue,
    DomainError,
    DegenerateLength,
    DegenerateSpan,
    EmptyWindow,
    AllDegenerate,
    IncompatibleLaw,
    DigestMismatch,
    ReplicateFailed,
    Io,
    Parse,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so the
// CLI can map it onto an exit status without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::OutOfUnitInterval: return "OutOfUnitInterval";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DegenerateLength: return "DegenerateLength";
    case ErrorCode::DegenerateSpan: return "DegenerateSpan";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::AllDegenerate: return "AllDegenerate";
    case ErrorCode::IncompatibleLaw: return "IncompatibleLaw";
    case ErrorCode::DigestMismatch: return "DigestMismatch";
    case ErrorCode::ReplicateFailed: return "ReplicateFailed";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
    }
    return "Unknown";
}

} // namespace scanstat
