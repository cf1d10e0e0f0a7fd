#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "pacf/arma_model.hpp"
#include "pacf/scalar.hpp"

namespace pacf {

enum class Estimator { NthRootTail, LogRegression, Ratio };

[[nodiscard]] std::string_view estimator_name(Estimator e) noexcept;

/// Finite-N surrogate for limsup |a_n|^{1/n}.
struct RateEstimate {
    Estimator method = Estimator::NthRootTail;
    double value = 0.0;
    std::size_t window_first = 0;  // natural indices, inclusive
    std::size_t window_last = 0;
    std::size_t n_used = 0;  // nonzero terms that entered the estimate
    double r_squared = 1.0;  // log-regression fit quality (1 for other methods)
    double spread = 0.0;     // max - min of |a_n|^{1/n} over the window
};

/// Max of |a_n|^{1/n} over the trailing ceil(window * N) terms, N = seq.size().
/// Terms with |a_n| <= zero_threshold count as zero and are skipped; if none
/// remain the value is 0 with n_used 0. Throws TooShort for N < 10 and
/// InvalidInput for window outside (0, 1].
[[nodiscard]] RateEstimate rate_nth_root_tail(const WeightSeq& seq, double window,
                                              unsigned precision_bits = ScalarContext::kDefaultPrecision,
                                              const BigFloat& zero_threshold = BigFloat(53));

/// exp(slope) of the least-squares line through (n, log|a_n|) for nonzero terms
/// with first <= n <= last. Throws TooFewNonzero with fewer than two terms.
[[nodiscard]] RateEstimate rate_log_regression(const WeightSeq& seq, std::size_t first, std::size_t last,
                                               unsigned precision_bits = ScalarContext::kDefaultPrecision,
                                               const BigFloat& zero_threshold = BigFloat(53));

/// (|a_j| / |a_i|)^{1/(j-i)} for the first and last nonzero terms i < j in [first, last].
[[nodiscard]] RateEstimate rate_ratio(const WeightSeq& seq, std::size_t first, std::size_t last,
                                      unsigned precision_bits = ScalarContext::kDefaultPrecision,
                                      const BigFloat& zero_threshold = BigFloat(53));

/// max(floor, scale * |log(1 - r)| / N). Throws TooShort for N < 20.
[[nodiscard]] double tolerance_schedule(std::size_t n, double rate, double floor = 0.01, double scale = 3.0);

struct VerifyConfig {
    ScalarContext ctx;
    Estimator estimator = Estimator::NthRootTail;
    double window = 0.1;
    /// Index range for the regression/ratio estimators; defaults to [ceil(N/2), N].
    std::optional<std::pair<std::size_t, std::size_t>> range;
    double tolerance_floor = 0.01;
    double tolerance_scale = 3.0;
    std::optional<double> tolerance_override;
    /// On BitGrowthCap in rational mode, rerun in float mode at fallback_bits.
    bool float_fallback = true;
    unsigned fallback_bits = 256;
};

struct TheoremReport {
    ArmaModel model;
    std::size_t n = 0;
    Mode mode = Mode::Rational;
    unsigned precision_bits = 0;
    bool fell_back = false;
    RateEstimate rate_pacf;
    RateEstimate rate_pi;
    double rate_theoretical = 0.0;   // 1 / min |root of theta|
    double min_root_modulus_ma = 0.0;  // +inf without MA roots
    double gap_pacf_pi = 0.0;
    double gap_pacf_theoretical = 0.0;
    double gap_pi_theoretical = 0.0;
    double tolerance = 0.0;
    /// Pure AR: both sequences must vanish (exactly, or below 2^{-P/2} in float mode).
    bool terminating = false;
    bool pass = false;
    Scalar pacf_last;  // phi_NN
    Scalar pi_last;    // pi_N
};

/// Computes pi_1..pi_N and phi_11..phi_NN, estimates both decay rates and
/// compares them with each other and with 1 / min |root of theta|.
/// Throws TooShort for N < 20 and the model validation errors.
[[nodiscard]] TheoremReport verify_theorem(const ArmaModel& model, std::size_t n, const VerifyConfig& config = {});

}  // namespace pacf
