#include "pacf/pacf_engine.hpp"

#include <algorithm>
#include <string>

#include "pacf/error.hpp"
#include "pacf/linalg.hpp"

namespace pacf {

namespace {

void require_gamma(const WeightSeq& gamma, std::size_t needed_last_lag) {
    if (gamma.kind != SequenceKind::Gamma) {
        throw Error(ErrorCode::InvalidInput, "expected an autocovariance sequence");
    }
    if (gamma.values.size() < needed_last_lag + 1) {
        throw Error(ErrorCode::IndexOutOfRange, "need autocovariances up to lag " + std::to_string(needed_last_lag) +
                                                    ", have " + std::to_string(gamma.values.size()));
    }
}

std::vector<Scalar> gamma_prefix(const WeightSeq& gamma, std::size_t count, const ScalarContext& ctx) {
    std::vector<Scalar> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(ctx.convert(gamma.values[i]));
    }
    return out;
}

// Float comparisons are relative to the larger magnitude (at least 1).
bool nearly_equal(const Scalar& a, const Scalar& b, const ScalarContext& ctx) {
    if (ctx.mode == Mode::Rational && a.is_rational() && b.is_rational()) {
        return a == b;
    }
    const auto bits = static_cast<mpfr_prec_t>(ctx.precision_bits) + 32;
    const BigFloat fa = a.to_float(bits);
    const BigFloat fb = b.to_float(bits);
    const BigFloat scale = std::max({BigFloat(1.0, bits), abs(fa), abs(fb)});
    return abs(fa - fb) <= ctx.half_precision_epsilon() * scale;
}

}  // namespace

// ---------------------------------------------------------------- DLTable

const Scalar& DLTable::phi(std::size_t n, std::size_t j) const {
    if (n < 1 || n > rows_.size() || j < 1 || j > n) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "phi(" + std::to_string(n) + "," + std::to_string(j) + ") outside table of order " +
                        std::to_string(rows_.size()));
    }
    return rows_[n - 1][j - 1];
}

std::span<const Scalar> DLTable::row(std::size_t n) const {
    if (n < 1 || n > rows_.size()) {
        throw Error(ErrorCode::IndexOutOfRange, "row " + std::to_string(n) + " outside the table");
    }
    return rows_[n - 1];
}

const Scalar& DLTable::v(std::size_t n) const {
    if (n >= v_.size()) {
        throw Error(ErrorCode::IndexOutOfRange, "v_" + std::to_string(n) + " outside the table");
    }
    return v_[n];
}

void DLTable::extend(const WeightSeq& gamma, std::size_t new_n_max, const ScalarContext& ctx) {
    require_gamma(gamma, new_n_max);
    if (v_.empty()) {
        mode_ = ctx.mode;
        v_.push_back(ctx.convert(gamma.values[0]));
        if (v_[0].sign() <= 0) {
            throw Error(ErrorCode::NotPositiveDefinite, "gamma_0 must be positive");
        }
    } else if (mode_ != ctx.mode) {
        throw Error(ErrorCode::InvalidInput, "cannot extend a DL table in a different arithmetic mode");
    }
    rows_.reserve(new_n_max);
    for (std::size_t n = rows_.size() + 1; n <= new_n_max; ++n) {
        // n is the order being built from row n-1.
        Scalar num = ctx.convert(gamma.values[n]);
        if (n > 1) {
            const auto& prev = rows_[n - 2];
            for (std::size_t j = 1; j < n; ++j) {
                num -= prev[j - 1] * ctx.convert(gamma.values[n - j]);
            }
        }
        Scalar diag = num / v_.back();
        std::vector<Scalar> next;
        next.reserve(n);
        if (n > 1) {
            const auto& prev = rows_[n - 2];
            for (std::size_t j = 1; j < n; ++j) {
                next.push_back(prev[j - 1] - diag * prev[n - 1 - j]);
            }
        }
        Scalar vn = v_.back() * (ctx.make(1) - diag * diag);
        if (vn.sign() <= 0) {
            throw Error(ErrorCode::NotPositiveDefinite,
                        "innovation variance v_" + std::to_string(n) + " is not positive");
        }
        ctx.check_bits(diag, "durbin_levinson");
        ctx.check_bits(vn, "durbin_levinson");
        next.push_back(std::move(diag));
        rows_.push_back(std::move(next));
        v_.push_back(std::move(vn));
    }
}

DLTable durbin_levinson(const WeightSeq& gamma, std::size_t n_max, const ScalarContext& ctx) {
    DLTable table;
    table.extend(gamma, n_max, ctx);
    return table;
}

WeightSeq pacf(const DLTable& table) {
    WeightSeq out{SequenceKind::Pacf, table.mode(), {}};
    out.values.reserve(table.n_max());
    for (std::size_t n = 1; n <= table.n_max(); ++n) {
        out.values.push_back(table.pacf(n));
    }
    return out;
}

WeightSeq pacf(const WeightSeq& gamma, std::size_t n_max, const ScalarContext& ctx) {
    return pacf(durbin_levinson(gamma, n_max, ctx));
}

// ---------------------------------------------------------------- h-step prediction

std::vector<HStepCoeffs> hstep_coeffs_range(const WeightSeq& gamma, std::size_t k, std::size_t h_max,
                                            const ScalarContext& ctx) {
    if (k < 1 || h_max < 1) {
        throw Error(ErrorCode::InvalidInput, "h-step coefficients need k >= 1 and h >= 1");
    }
    require_gamma(gamma, k + h_max - 1);
    const auto column = gamma_prefix(gamma, k, ctx);
    std::vector<std::vector<Scalar>> rhs_list;
    rhs_list.reserve(h_max);
    for (std::size_t h = 1; h <= h_max; ++h) {
        // Cov(X_{t+h-1}, X_{t-i}) = gamma_{h-1+i}, i = 1..k.
        std::vector<Scalar> rhs;
        rhs.reserve(k);
        for (std::size_t i = 1; i <= k; ++i) {
            rhs.push_back(gamma.values[h - 1 + i]);
        }
        rhs_list.push_back(std::move(rhs));
    }
    auto solutions = solve_symmetric_toeplitz_many(column, rhs_list, ctx);
    std::vector<HStepCoeffs> out;
    out.reserve(h_max);
    for (std::size_t h = 1; h <= h_max; ++h) {
        out.push_back({k, h, std::move(solutions[h - 1])});
    }
    return out;
}

HStepCoeffs hstep_coeffs(const WeightSeq& gamma, std::size_t k, std::size_t h, const ScalarContext& ctx) {
    if (k < 1 || h < 1) {
        throw Error(ErrorCode::InvalidInput, "h-step coefficients need k >= 1 and h >= 1");
    }
    require_gamma(gamma, k + h - 1);
    std::vector<Scalar> rhs;
    rhs.reserve(k);
    for (std::size_t i = 1; i <= k; ++i) {
        rhs.push_back(gamma.values[h - 1 + i]);
    }
    ToeplitzSystem sys{gamma_prefix(gamma, k, ctx), std::move(rhs)};
    return {k, h, solve_symmetric_toeplitz(sys, ctx)};
}

bool reversed_projection_check(const WeightSeq& gamma, std::size_t k, std::size_t h, const ScalarContext& ctx) {
    const HStepCoeffs forward = hstep_coeffs(gamma, k, h, ctx);
    // Cov(X_{t-k-h}, X_{t-j}) = gamma_{k+h-j}, j = 1..k; solution[j-1] multiplies X_{t-j}.
    std::vector<Scalar> rhs;
    rhs.reserve(k);
    for (std::size_t j = 1; j <= k; ++j) {
        rhs.push_back(gamma.values[k + h - j]);
    }
    const auto past = solve_symmetric_toeplitz({gamma_prefix(gamma, k, ctx), std::move(rhs)}, ctx);
    // Reversal: the coefficient of X_{t-j} must equal phi^{(h)}_{k, k+1-j}.
    for (std::size_t j = 1; j <= k; ++j) {
        if (!nearly_equal(past[j - 1], forward.coeffs[k - j], ctx)) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------- h-step identity checks

Scalar lemma1_identity_residual(const ArmaModel& model, std::size_t k, std::size_t truncation,
                                const ScalarContext& ctx) {
    if (k < 1) {
        throw Error(ErrorCode::InvalidInput, "h-step identity residual needs k >= 1");
    }
    const WeightSeq gamma = autocovariances(model, k + truncation, ctx);
    const WeightSeq pi = pi_weights(model, k + truncation, ctx);
    const DLTable dl = durbin_levinson(gamma, k, ctx);
    Scalar residual = dl.pacf(k) - pi.at(k);
    if (truncation > 0) {
        for (const auto& hs : hstep_coeffs_range(gamma, k, truncation, ctx)) {
            residual -= pi.at(k + hs.h) * hs.coeffs.front();
        }
    }
    return residual;
}

BigFloat lemma1_residual_bound(const ArmaModel& model, std::size_t k, std::size_t truncation,
                               unsigned precision_bits) {
    const auto bits = static_cast<mpfr_prec_t>(precision_bits);
    const RateInfo rates = theoretical_rates(model, precision_bits);
    const BigFloat& r = rates.rate_pi;
    if (r.is_zero()) {
        if (k + truncation >= model.p()) {
            return BigFloat(bits);
        }
        BigFloat out(bits);
        mpfr_set_inf(out.get(), 1);
        return out;
    }
    const auto ctx = ScalarContext::floating(precision_bits);
    const std::size_t horizon = 2 * (k + truncation) + 64;
    const WeightSeq pi = pi_weights(model, horizon, ctx);
    const WeightSeq gamma = autocovariances(model, 0, ctx);

    BigFloat sup(bits);
    BigFloat r_pow = r;
    for (std::size_t n = 1; n <= horizon; ++n) {
        sup = std::max(sup, abs(pi.at(n).floating()) / r_pow);
        r_pow *= r;
    }
    const BigFloat b = sqrt(gamma.at(0).floating() / model.sigma2().to_float(bits)) * sup;
    BigFloat r_exp(bits);
    mpfr_pow_ui(r_exp.get(), r.get(), static_cast<unsigned long>(k + truncation + 1), MPFR_RNDU);
    return b * r_exp / (BigFloat(1.0, bits) - r);
}

BigFloat prediction_bound_check(const ArmaModel& model, std::size_t k_max, std::size_t h_max,
                                const ScalarContext& ctx) {
    const auto bits = static_cast<mpfr_prec_t>(ctx.precision_bits);
    const WeightSeq gamma = autocovariances(model, k_max + h_max, ctx);
    const BigFloat scale = sqrt(model.sigma2().to_float(bits) / gamma.at(0).to_float(bits));
    BigFloat worst(bits);
    for (std::size_t k = 1; k <= k_max; ++k) {
        for (const auto& hs : hstep_coeffs_range(gamma, k, h_max, ctx)) {
            worst = std::max(worst, abs(hs.coeffs.front().to_float(bits)) * scale);
        }
    }
    return worst;
}

// ---------------------------------------------------------------- pi recovery from DL columns

PiTail pi_tail_sequence(const DLTable& dl, std::size_t n, std::size_t horizon) {
    if (n < 1 || n + horizon > dl.n_max()) {
        throw Error(ErrorCode::IndexOutOfRange, "pi tail needs n >= 1 and n + H <= n_max (" +
                                                    std::to_string(n) + " + " + std::to_string(horizon) + " > " +
                                                    std::to_string(dl.n_max()) + ")");
    }
    const ScalarContext ctx{dl.mode(), static_cast<unsigned>(std::max<mpfr_prec_t>(dl.pacf(1).precision(), 53)),
                            ScalarContext::kDefaultBitCap};
    PiTail out;
    out.n = n;
    out.telescoped_matches = true;
    Scalar running = dl.pacf(n);
    for (std::size_t h = 1; h <= horizon; ++h) {
        out.column.push_back(dl.phi(n + h, n));
        running -= dl.pacf(n + h) * dl.phi(n + h - 1, h);
        out.telescoped.push_back(running);
        if (!nearly_equal(out.telescoped.back(), out.column.back(), ctx)) {
            out.telescoped_matches = false;
        }
    }
    return out;
}

}  // namespace pacf
