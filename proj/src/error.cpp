#include "pacf/error.hpp"

namespace pacf {

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::SingularSystem: return "SingularSystem";
        case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorCode::PrecisionLoss: return "PrecisionLoss";
        case ErrorCode::BitGrowthCap: return "BitGrowthCap";
        case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorCode::NotCausal: return "NotCausal";
        case ErrorCode::NotInvertible: return "NotInvertible";
        case ErrorCode::NonpositiveVariance: return "NonpositiveVariance";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::TooShort: return "TooShort";
        case ErrorCode::TooFewNonzero: return "TooFewNonzero";
        case ErrorCode::EmptyGrid: return "EmptyGrid";
        case ErrorCode::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

bool is_input_error(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NotCausal:
        case ErrorCode::NotInvertible:
        case ErrorCode::NonpositiveVariance:
        case ErrorCode::IndexOutOfRange:
        case ErrorCode::TooShort:
        case ErrorCode::TooFewNonzero:
        case ErrorCode::EmptyGrid:
        case ErrorCode::InvalidInput:
            return true;
        default:
            return false;
    }
}

}  // namespace pacf
