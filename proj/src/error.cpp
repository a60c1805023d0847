#include "ribbonkit/error.hpp"

namespace ribbonkit {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NegativeEntry: return "NegativeEntry";
        case ErrorCode::ZeroTotalMass: return "ZeroTotalMass";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::TriangleViolation: return "TriangleViolation";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::SupportViolation: return "SupportViolation";
        case ErrorCode::NegativeValue: return "NegativeValue";
        case ErrorCode::OverlappingSubsets: return "OverlappingSubsets";
        case ErrorCode::EmptySubset: return "EmptySubset";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::NotBinary: return "NotBinary";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::ConjugateOfOne: return "ConjugateOfOne";
        case ErrorCode::RegimeError: return "RegimeError";
        case ErrorCode::NonPositiveWeights: return "NonPositiveWeights";
        case ErrorCode::ConstantX: return "ConstantX";
        case ErrorCode::ConstantG: return "ConstantG";
        case ErrorCode::BracketNotStraddling: return "BracketNotStraddling";
        case ErrorCode::NonPositiveDelta: return "NonPositiveDelta";
        case ErrorCode::ExponentConstraintViolation: return "ExponentConstraintViolation";
        case ErrorCode::UnsupportedShape: return "UnsupportedShape";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

}  // namespace ribbonkit
