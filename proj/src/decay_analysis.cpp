#include "pacf/decay_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "pacf/error.hpp"
#include "pacf/pacf_engine.hpp"

namespace pacf {

std::string_view estimator_name(Estimator e) noexcept {
    switch (e) {
        case Estimator::NthRootTail: return "nth_root_tail";
        case Estimator::LogRegression: return "log_regression";
        case Estimator::Ratio: return "ratio";
    }
    return "unknown";
}

namespace {

struct Term {
    std::size_t n;
    BigFloat magnitude;
};

// Nonzero |a_n| above the threshold with first <= n <= last.
std::vector<Term> nonzero_terms(const WeightSeq& seq, std::size_t first, std::size_t last, mpfr_prec_t bits,
                                const BigFloat& zero_threshold) {
    std::vector<Term> out;
    if (seq.values.empty()) {
        return out;
    }
    first = std::max(first, seq.first_index());
    last = std::min(last, seq.last_index());
    for (std::size_t n = first; n <= last; ++n) {
        const Scalar& a = seq.at(n);
        if (a.is_zero()) {
            continue;
        }
        BigFloat m = abs(a.to_float(bits));
        if (m <= zero_threshold) {
            continue;
        }
        out.push_back({n, std::move(m)});
    }
    return out;
}

}  // namespace

RateEstimate rate_nth_root_tail(const WeightSeq& seq, double window, unsigned precision_bits,
                                const BigFloat& zero_threshold) {
    const std::size_t count = seq.size();
    if (count < 10) {
        throw Error(ErrorCode::TooShort, "nth-root estimator needs at least 10 terms, got " + std::to_string(count));
    }
    if (!(window > 0.0 && window <= 1.0)) {
        throw Error(ErrorCode::InvalidInput, "window must lie in (0, 1]");
    }
    const auto bits = static_cast<mpfr_prec_t>(precision_bits);
    const auto tail = static_cast<std::size_t>(std::ceil(window * static_cast<double>(count) - 1e-12));
    RateEstimate est;
    est.method = Estimator::NthRootTail;
    est.window_last = seq.last_index();
    est.window_first = est.window_last + 1 - std::clamp<std::size_t>(tail, 1, count);

    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& term : nonzero_terms(seq, est.window_first, est.window_last, bits, zero_threshold)) {
        if (term.n == 0) {
            continue;
        }
        const double root = abs_nth_root(term.magnitude, term.n).to_double();
        hi = std::max(hi, root);
        lo = std::min(lo, root);
        ++est.n_used;
    }
    est.value = hi;
    est.spread = est.n_used ? hi - lo : 0.0;
    return est;
}

RateEstimate rate_log_regression(const WeightSeq& seq, std::size_t first, std::size_t last, unsigned precision_bits,
                                 const BigFloat& zero_threshold) {
    const auto bits = static_cast<mpfr_prec_t>(precision_bits);
    const auto terms = nonzero_terms(seq, first, last, bits, zero_threshold);
    if (terms.size() < 2) {
        throw Error(ErrorCode::TooFewNonzero, "log regression needs at least two nonzero terms in [" +
                                                  std::to_string(first) + ", " + std::to_string(last) + "]");
    }
    std::vector<double> xs;
    std::vector<double> ys;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& t : terms) {
        xs.push_back(static_cast<double>(t.n));
        ys.push_back(log(t.magnitude).to_double());
        if (t.n > 0) {
            const double root = abs_nth_root(t.magnitude, t.n).to_double();
            lo = std::min(lo, root);
            hi = std::max(hi, root);
        }
    }
    const auto m = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    RateEstimate est;
    est.method = Estimator::LogRegression;
    est.value = std::exp(slope);
    est.window_first = first;
    est.window_last = last;
    est.n_used = terms.size();
    est.r_squared = syy > 0.0 ? std::clamp(slope * sxy / syy, 0.0, 1.0) : 1.0;
    est.spread = hi >= lo ? hi - lo : 0.0;
    return est;
}

RateEstimate rate_ratio(const WeightSeq& seq, std::size_t first, std::size_t last, unsigned precision_bits,
                        const BigFloat& zero_threshold) {
    const auto bits = static_cast<mpfr_prec_t>(precision_bits);
    const auto terms = nonzero_terms(seq, first, last, bits, zero_threshold);
    if (terms.size() < 2) {
        throw Error(ErrorCode::TooFewNonzero, "ratio estimator needs at least two nonzero terms");
    }
    const auto& a = terms.front();
    const auto& b = terms.back();
    RateEstimate est;
    est.method = Estimator::Ratio;
    est.value = abs_nth_root(b.magnitude / a.magnitude, b.n - a.n).to_double();
    est.window_first = first;
    est.window_last = last;
    est.n_used = terms.size();
    return est;
}

double tolerance_schedule(std::size_t n, double rate, double floor, double scale) {
    if (n < 20) {
        throw Error(ErrorCode::TooShort, "tolerance schedule needs N >= 20, got " + std::to_string(n));
    }
    return std::max(floor, scale * std::abs(std::log1p(-rate)) / static_cast<double>(n));
}

namespace {

RateEstimate estimate(const WeightSeq& seq, std::size_t n, const VerifyConfig& config, unsigned bits,
                      const BigFloat& zero_threshold) {
    const auto [first, last] = config.range.value_or(std::pair<std::size_t, std::size_t>{(n + 1) / 2, n});
    switch (config.estimator) {
        case Estimator::NthRootTail:
            return rate_nth_root_tail(seq, config.window, bits, zero_threshold);
        case Estimator::LogRegression:
            return rate_log_regression(seq, first, last, bits, zero_threshold);
        case Estimator::Ratio:
            return rate_ratio(seq, first, last, bits, zero_threshold);
    }
    throw Error(ErrorCode::InvalidInput, "unknown estimator");
}

bool window_vanishes(const WeightSeq& seq, const RateEstimate& est) { return est.n_used == 0 && !seq.values.empty(); }

TheoremReport verify_in_context(const ValidatedModel& vm, std::size_t n, const VerifyConfig& config,
                                const ScalarContext& ctx) {
    const unsigned bits = std::max(ctx.precision_bits, 64U);
    const WeightSeq gamma = autocovariances(vm.model, n, ctx);
    const WeightSeq phi = pacf(gamma, n, ctx);
    const WeightSeq pi = pi_weights(vm.model, n, ctx);

    TheoremReport report{.model = vm.model,
                         .n = n,
                         .mode = ctx.mode,
                         .precision_bits = ctx.precision_bits,
                         .rate_pacf = {},
                         .rate_pi = {},
                         .pacf_last = Scalar(0),
                         .pi_last = Scalar(0)};
    report.rate_theoretical = vm.rates.rate_pi.to_double();
    report.min_root_modulus_ma = vm.rates.min_root_modulus_ma.to_double();
    report.terminating = vm.rates.ma_roots.empty();
    report.pacf_last = phi.values.back();
    report.pi_last = pi.values.back();

    // Rounding noise only counts as zero when the sequences are known to terminate.
    const BigFloat zero_threshold = report.terminating ? ctx.half_precision_epsilon() : BigFloat(53);
    if (report.terminating) {
        // A vanished window is rate 0 for every estimator; regression could not fit it.
        auto terminating_estimate = [&](const WeightSeq& seq) {
            RateEstimate est = rate_nth_root_tail(seq, config.window, bits, zero_threshold);
            if (config.estimator == Estimator::NthRootTail) {
                return est;
            }
            if (est.n_used < 2) {
                est.method = config.estimator;
                return est;
            }
            return estimate(seq, n, config, bits, zero_threshold);
        };
        report.rate_pacf = terminating_estimate(phi);
        report.rate_pi = terminating_estimate(pi);
    } else {
        report.rate_pacf = estimate(phi, n, config, bits, zero_threshold);
        report.rate_pi = estimate(pi, n, config, bits, zero_threshold);
    }

    report.gap_pacf_pi = std::abs(report.rate_pacf.value - report.rate_pi.value);
    report.gap_pacf_theoretical = std::abs(report.rate_pacf.value - report.rate_theoretical);
    report.gap_pi_theoretical = std::abs(report.rate_pi.value - report.rate_theoretical);
    report.tolerance = config.tolerance_override.value_or(
        tolerance_schedule(n, report.rate_theoretical, config.tolerance_floor, config.tolerance_scale));

    const bool gaps_ok =
        report.gap_pacf_pi <= report.tolerance && report.gap_pacf_theoretical <= report.tolerance;
    if (report.terminating) {
        report.pass = gaps_ok && window_vanishes(phi, report.rate_pacf) && window_vanishes(pi, report.rate_pi);
    } else {
        report.pass = gaps_ok;
    }
    return report;
}

}  // namespace

TheoremReport verify_theorem(const ArmaModel& model, std::size_t n, const VerifyConfig& config) {
    if (n < 20) {
        throw Error(ErrorCode::TooShort, "verify needs N >= 20, got " + std::to_string(n));
    }
    const ValidatedModel vm = validate(model, std::max(config.ctx.precision_bits, 64U));
    try {
        return verify_in_context(vm, n, config, config.ctx);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::BitGrowthCap || config.ctx.mode != Mode::Rational || !config.float_fallback) {
            throw;
        }
    }
    ScalarContext fallback = ScalarContext::floating(config.fallback_bits);
    fallback.bit_cap = config.ctx.bit_cap;
    TheoremReport report = verify_in_context(vm, n, config, fallback);
    report.fell_back = true;
    return report;
}

}  // namespace pacf
