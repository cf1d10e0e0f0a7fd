#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pacf/arma_model.hpp"
#include "pacf/scalar.hpp"

namespace pacf {

/// Durbin-Levinson table: row n holds the order-n one-step predictor
/// coefficients phi_{n,1..n}; v_n is its prediction error variance.
class DLTable {
public:
    DLTable() = default;

    [[nodiscard]] std::size_t n_max() const noexcept { return rows_.size(); }
    [[nodiscard]] Mode mode() const noexcept { return mode_; }
    /// phi_{n,j} for 1 <= j <= n <= n_max.
    [[nodiscard]] const Scalar& phi(std::size_t n, std::size_t j) const;
    [[nodiscard]] std::span<const Scalar> row(std::size_t n) const;
    /// phi_{n,n}.
    [[nodiscard]] const Scalar& pacf(std::size_t n) const { return phi(n, n); }
    /// v_n for 0 <= n <= n_max.
    [[nodiscard]] const Scalar& v(std::size_t n) const;

    /// Continues the recursion up to `new_n_max`; `gamma` must hold gamma_0..gamma_{new_n_max}.
    void extend(const WeightSeq& gamma, std::size_t new_n_max, const ScalarContext& ctx);

private:
    friend DLTable durbin_levinson(const WeightSeq& gamma, std::size_t n_max, const ScalarContext& ctx);

    Mode mode_ = Mode::Rational;
    std::vector<std::vector<Scalar>> rows_;
    std::vector<Scalar> v_;
};

/// phi_11 = gamma_1/gamma_0,
/// phi_{n+1,n+1} = (gamma_{n+1} - sum_j phi_{n,j} gamma_{n+1-j}) / v_n,
/// phi_{n+1,j} = phi_{n,j} - phi_{n+1,n+1} phi_{n,n-j+1},
/// v_{n+1} = v_n (1 - phi_{n+1,n+1}^2).
/// Throws NotPositiveDefinite when some v_n <= 0.
[[nodiscard]] DLTable durbin_levinson(const WeightSeq& gamma, std::size_t n_max, const ScalarContext& ctx);

/// phi_11..phi_{n_max,n_max}.
[[nodiscard]] WeightSeq pacf(const WeightSeq& gamma, std::size_t n_max, const ScalarContext& ctx);
[[nodiscard]] WeightSeq pacf(const DLTable& table);

/// Coefficients of the projection of X_{t+h-1} on X_{t-1}, ..., X_{t-k}.
struct HStepCoeffs {
    std::size_t k = 0;
    std::size_t h = 0;
    std::vector<Scalar> coeffs;  // coeffs[j-1] multiplies X_{t-j}
};

/// Solves sum_j c_j gamma_{i-j} = gamma_{h-1+i}, i = 1..k.
[[nodiscard]] HStepCoeffs hstep_coeffs(const WeightSeq& gamma, std::size_t k, std::size_t h, const ScalarContext& ctx);

/// hstep_coeffs for h = 1..h_max at fixed k, sharing one factorization.
[[nodiscard]] std::vector<HStepCoeffs> hstep_coeffs_range(const WeightSeq& gamma, std::size_t k, std::size_t h_max,
                                                         const ScalarContext& ctx);

/// Projects the past value X_{t-k-h} onto X_{t-k}..X_{t-1} by its own normal
/// equations and checks the coefficients are hstep_coeffs reversed: exactly in
/// rational mode, within 2^{-P/2} (relative to the largest coefficient) in float mode.
[[nodiscard]] bool reversed_projection_check(const WeightSeq& gamma, std::size_t k, std::size_t h,
                                             const ScalarContext& ctx);

/// phi_kk - pi_k - sum_{h=1}^{H} pi_{k+h} phi^{(h)}_{k1}.
[[nodiscard]] Scalar lemma1_identity_residual(const ArmaModel& model, std::size_t k, std::size_t truncation,
                                              const ScalarContext& ctx);

/// B r^{k+H+1} / (1 - r) with r = rate_pi and
/// B = sqrt(gamma_0/sigma2) * max_n |pi_n| / r^n over n <= 2(k+H) + 64.
/// With no MA roots (r = 0) pi terminates at p: the bound is 0 once k + H >= p.
[[nodiscard]] BigFloat lemma1_residual_bound(const ArmaModel& model, std::size_t k, std::size_t truncation,
                                             unsigned precision_bits = ScalarContext::kDefaultPrecision);

struct PiTail {
    std::size_t n = 0;
    std::vector<Scalar> column;      // phi_{n+h,n}, h = 1..H
    std::vector<Scalar> telescoped;  // phi_nn - sum_{i<=h} phi_{n+i,n+i} phi_{n+i-1,i}, h = 1..H
    bool telescoped_matches = false;
};

/// Column n of rows n+1..n+H (which converges to pi_n) together with the
/// telescoped partial sums; throws IndexOutOfRange when n + H > n_max.
[[nodiscard]] PiTail pi_tail_sequence(const DLTable& dl, std::size_t n, std::size_t horizon);

/// max over k <= k_max, h <= h_max of |phi^{(h)}_{k1}| * sqrt(sigma2 / gamma_0).
[[nodiscard]] BigFloat prediction_bound_check(const ArmaModel& model, std::size_t k_max, std::size_t h_max,
                                              const ScalarContext& ctx);

}  // namespace pacf
