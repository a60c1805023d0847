#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ribbonkit {

enum class ErrorCode {
    NegativeEntry,
    ZeroTotalMass,
    NonFinite,
    OutOfRange,
    TriangleViolation,
    ShapeMismatch,
    SupportViolation,
    NegativeValue,
    OverlappingSubsets,
    EmptySubset,
    IndexOutOfRange,
    NotBinary,
    BudgetExceeded,
    ConjugateOfOne,
    RegimeError,
    NonPositiveWeights,
    ConstantX,
    ConstantG,
    BracketNotStraddling,
    NonPositiveDelta,
    ExponentConstraintViolation,
    UnsupportedShape,
    ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace ribbonkit
