#pragma once

#include <span>
#include <vector>

#include "pacf/scalar.hpp"

namespace pacf {

struct ComplexRoot {
    BigFloat re;
    BigFloat im;
    BigFloat modulus;
};

/// Roots of c_0 + c_1 z + ... + c_d z^d, sorted by modulus ascending.
///
/// Aberth-Ehrlich simultaneous iteration at 2P working bits; a root is accepted
/// once its correction is below 2^{-P} relative or its backward error is below
/// 2^{-P}. Trailing zero coefficients lower the degree; a degree-0 polynomial
/// has no roots. Throws ConvergenceFailure when the iteration stalls and
/// InvalidInput when c_0 == 0.
[[nodiscard]] std::vector<ComplexRoot> char_roots(std::span<const Scalar> coeffs, unsigned precision_bits);

}  // namespace pacf
