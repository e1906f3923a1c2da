#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gccf {

enum class ErrorCode {
    NonPrimeModulus,
    SingularMatrix,
    Inconsistent,
    InvalidPermutation,
    LengthMismatch,
    DimensionMismatch,
    SingularCoefficientMatrix,
    InconsistentInput,
    DegenerateDenominator,
    StateSpaceTooLarge,
    OrderMismatch,
    DependentBasis,
    ParseError,
    IoError,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NonPrimeModulus: return "NonPrimeModulus";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::Inconsistent: return "Inconsistent";
    case ErrorCode::InvalidPermutation: return "InvalidPermutation";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingularCoefficientMatrix: return "SingularCoefficientMatrix";
    case ErrorCode::InconsistentInput: return "InconsistentInput";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::StateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorCode::OrderMismatch: return "OrderMismatch";
    case ErrorCode::DependentBasis: return "DependentBasis";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

} // namespace gccf
