#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pacf {

enum class ErrorCode {
    SingularSystem,
    NotPositiveDefinite,
    PrecisionLoss,
    BitGrowthCap,
    ConvergenceFailure,
    NotCausal,
    NotInvertible,
    NonpositiveVariance,
    IndexOutOfRange,
    TooShort,
    TooFewNonzero,
    EmptyGrid,
    InvalidInput,
};

/// Stable machine-readable name, e.g. "NotCausal".
[[nodiscard]] std::string_view error_code_name(ErrorCode code) noexcept;

/// True for failures caused by the caller's input (model validation, bad
/// arguments, too-short sequences) as opposed to numeric breakdown.
[[nodiscard]] bool is_input_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace pacf
