#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pacf/scalar.hpp"

namespace pacf {

/// Symmetric Toeplitz system T x = rhs with T(i, j) = first_column[|i - j|].
struct ToeplitzSystem {
    std::vector<Scalar> first_column;
    std::vector<Scalar> rhs;

    [[nodiscard]] std::size_t size() const noexcept { return first_column.size(); }
    [[nodiscard]] const Scalar& entry(std::size_t i, std::size_t j) const {
        return first_column[i > j ? i - j : j - i];
    }
};

/// Solves a positive-definite symmetric Toeplitz system in the context's mode.
///
/// Rational mode uses plain Gaussian elimination and is exact. Float mode uses
/// the Levinson recursion, then checks ||T x - rhs||_inf <= 2^{-P/2} ||rhs||_inf.
/// Throws SingularSystem on a zero leading minor, NotPositiveDefinite on a
/// negative one, PrecisionLoss when the float residual check fails.
[[nodiscard]] std::vector<Scalar> solve_symmetric_toeplitz(const ToeplitzSystem& sys, const ScalarContext& ctx);

/// Same contract as solve_symmetric_toeplitz for several right-hand sides that
/// share one matrix; the factorization work is done once.
[[nodiscard]] std::vector<std::vector<Scalar>> solve_symmetric_toeplitz_many(
    std::span<const Scalar> first_column, const std::vector<std::vector<Scalar>>& rhs_list, const ScalarContext& ctx);

/// General dense solve A x = rhs (row-major rows). Exact in rational mode,
/// partial pivoting in float mode.
[[nodiscard]] std::vector<Scalar> solve_dense(std::vector<std::vector<Scalar>> rows, std::vector<Scalar> rhs,
                                              const ScalarContext& ctx);

/// Largest numerator/denominator bit length over the values (precision for floats).
[[nodiscard]] std::size_t max_bit_length(std::span<const Scalar> values) noexcept;

}  // namespace pacf
