#include "pacf/arma_model.hpp"

#include <algorithm>
#include <sstream>

#include "pacf/error.hpp"
#include "pacf/linalg.hpp"

namespace pacf {

std::string_view sequence_kind_name(SequenceKind kind) noexcept {
    switch (kind) {
        case SequenceKind::Psi: return "psi";
        case SequenceKind::Pi: return "pi";
        case SequenceKind::Gamma: return "gamma";
        case SequenceKind::Pacf: return "pacf";
    }
    return "unknown";
}

const Scalar& WeightSeq::at(std::size_t n) const {
    if (n < first_index() || n - first_index() >= values.size()) {
        throw Error(ErrorCode::IndexOutOfRange, std::string(sequence_kind_name(kind)) + " index " +
                                                    std::to_string(n) + " outside the computed prefix");
    }
    return values[n - first_index()];
}

std::vector<Scalar> ArmaModel::ar_polynomial() const {
    std::vector<Scalar> out{Scalar(1)};
    for (const auto& c : ar_) {
        out.push_back(-c);
    }
    return out;
}

std::vector<Scalar> ArmaModel::ma_polynomial() const {
    std::vector<Scalar> out{Scalar(1)};
    out.insert(out.end(), ma_.begin(), ma_.end());
    return out;
}

ArmaModel ArmaModel::converted(const ScalarContext& ctx) const {
    std::vector<Scalar> ar;
    std::vector<Scalar> ma;
    for (const auto& c : ar_) {
        ar.push_back(ctx.convert(c));
    }
    for (const auto& c : ma_) {
        ma.push_back(ctx.convert(c));
    }
    return {std::move(ar), std::move(ma), ctx.convert(sigma2_)};
}

std::string ArmaModel::describe() const {
    std::ostringstream os;
    auto list = [&os](const std::vector<Scalar>& v) {
        os << '[';
        for (std::size_t i = 0; i < v.size(); ++i) {
            os << (i ? "," : "") << v[i].to_string();
        }
        os << ']';
    };
    os << "ARMA(" << p() << ',' << q() << ") ar=";
    list(ar_);
    os << " ma=";
    list(ma_);
    os << " sigma2=" << sigma2_.to_string();
    return os.str();
}

namespace {

BigFloat infinity(mpfr_prec_t p) {
    BigFloat out(p);
    mpfr_set_inf(out.get(), 1);
    return out;
}

BigFloat reciprocal_or_zero(const BigFloat& modulus) {
    if (mpfr_inf_p(modulus.get())) {
        return BigFloat(modulus.precision());
    }
    return BigFloat(1.0, modulus.precision()) / modulus;
}

}  // namespace

RateInfo theoretical_rates(const ArmaModel& model, unsigned precision_bits) {
    const auto p = static_cast<mpfr_prec_t>(precision_bits);
    const auto ar_poly = model.ar_polynomial();
    const auto ma_poly = model.ma_polynomial();
    RateInfo info{char_roots(ar_poly, precision_bits), char_roots(ma_poly, precision_bits), infinity(p), infinity(p),
                  BigFloat(p), BigFloat(p)};
    if (!info.ar_roots.empty()) {
        info.min_root_modulus_ar = info.ar_roots.front().modulus;
    }
    if (!info.ma_roots.empty()) {
        info.min_root_modulus_ma = info.ma_roots.front().modulus;
    }
    info.rate_psi = reciprocal_or_zero(info.min_root_modulus_ar);
    info.rate_pi = reciprocal_or_zero(info.min_root_modulus_ma);
    return info;
}

ValidatedModel validate(const ArmaModel& model, unsigned precision_bits) {
    if (model.sigma2().sign() <= 0) {
        throw Error(ErrorCode::NonpositiveVariance, "sigma2 must be positive, got " + model.sigma2().to_string());
    }
    RateInfo rates = theoretical_rates(model, precision_bits);
    const BigFloat threshold(1.0 + kRootTolerance, 64);
    if (!rates.ar_roots.empty() && rates.min_root_modulus_ar < threshold) {
        throw Error(ErrorCode::NotCausal, "AR polynomial has a root of modulus " +
                                              rates.min_root_modulus_ar.to_decimal(17) + " (must exceed 1)");
    }
    if (!rates.ma_roots.empty() && rates.min_root_modulus_ma < threshold) {
        throw Error(ErrorCode::NotInvertible, "MA polynomial has a root of modulus " +
                                                  rates.min_root_modulus_ma.to_decimal(17) + " (must exceed 1)");
    }
    return {model, std::move(rates)};
}

WeightSeq psi_weights(const ArmaModel& model, std::size_t n, const ScalarContext& ctx) {
    const ArmaModel m = model.converted(ctx);
    WeightSeq out{SequenceKind::Psi, ctx.mode, {}};
    out.values.reserve(n + 1);
    out.values.push_back(ctx.make(1));
    for (std::size_t j = 1; j <= n; ++j) {
        Scalar psi = j <= m.q() ? m.ma()[j - 1] : ctx.make(0);
        for (std::size_t i = 1; i <= std::min(j, m.p()); ++i) {
            psi += m.ar()[i - 1] * out.values[j - i];
        }
        ctx.check_bits(psi, "psi_weights");
        out.values.push_back(std::move(psi));
    }
    return out;
}

WeightSeq pi_weights(const ArmaModel& model, std::size_t n, const ScalarContext& ctx) {
    if (n < 1) {
        throw Error(ErrorCode::TooShort, "pi_weights needs N >= 1");
    }
    const ArmaModel m = model.converted(ctx);
    // a(B) = phi(B)/theta(B) = 1 - sum pi_i B^i, so theta(B) a(B) = phi(B):
    // a_j = -phi_j [j<=p] - sum_{i=1}^{min(j,q)} theta_i a_{j-i}, a_0 = 1, pi_j = -a_j.
    std::vector<Scalar> a{ctx.make(1)};
    a.reserve(n + 1);
    for (std::size_t j = 1; j <= n; ++j) {
        Scalar aj = j <= m.p() ? -m.ar()[j - 1] : ctx.make(0);
        for (std::size_t i = 1; i <= std::min(j, m.q()); ++i) {
            aj -= m.ma()[i - 1] * a[j - i];
        }
        ctx.check_bits(aj, "pi_weights");
        a.push_back(std::move(aj));
    }
    WeightSeq out{SequenceKind::Pi, ctx.mode, {}};
    out.values.reserve(n);
    for (std::size_t j = 1; j <= n; ++j) {
        out.values.push_back(-a[j]);
    }
    return out;
}

namespace {

WeightSeq autocov_exact(const ArmaModel& m, std::size_t n, const ScalarContext& ctx) {
    const std::size_t p = m.p();
    const std::size_t q = m.q();
    const auto psi = psi_weights(m, q, ctx);

    // c_k = sigma2 * sum_{j=k}^{q} theta_j psi_{j-k}, theta_0 = 1.
    auto forcing = [&](std::size_t k) {
        Scalar acc = ctx.make(0);
        for (std::size_t j = k; j <= q; ++j) {
            const Scalar theta = j == 0 ? ctx.make(1) : m.ma()[j - 1];
            acc += theta * psi.values[j - k];
        }
        return acc * m.sigma2();
    };

    // gamma_k - sum_i phi_i gamma_{|k-i|} = c_k for k = 0..p.
    std::vector<std::vector<Scalar>> rows(p + 1, std::vector<Scalar>(p + 1, ctx.make(0)));
    std::vector<Scalar> rhs;
    for (std::size_t k = 0; k <= p; ++k) {
        rows[k][k] += ctx.make(1);
        for (std::size_t i = 1; i <= p; ++i) {
            const std::size_t lag = k > i ? k - i : i - k;
            rows[k][lag] -= m.ar()[i - 1];
        }
        rhs.push_back(k <= q ? forcing(k) : ctx.make(0));
    }
    std::vector<Scalar> head = solve_dense(std::move(rows), std::move(rhs), ctx);

    WeightSeq out{SequenceKind::Gamma, ctx.mode, {}};
    out.values.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        if (k <= p) {
            out.values.push_back(head[k]);
            continue;
        }
        Scalar g = k <= q ? forcing(k) : ctx.make(0);
        for (std::size_t i = 1; i <= p; ++i) {
            g += m.ar()[i - 1] * out.values[k - i];
        }
        ctx.check_bits(g, "autocovariances");
        out.values.push_back(std::move(g));
    }
    return out;
}

WeightSeq autocov_truncated(const ArmaModel& m, std::size_t n, std::size_t truncation, const ScalarContext& ctx) {
    if (truncation == 0) {
        throw Error(ErrorCode::InvalidInput, "truncated_psi autocovariances need a truncation length M >= 1");
    }
    const auto psi = psi_weights(m, truncation + n, ctx);
    WeightSeq out{SequenceKind::Gamma, ctx.mode, {}};
    out.values.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        Scalar acc = ctx.make(0);
        for (std::size_t i = 0; i < truncation; ++i) {
            acc += psi.values[i] * psi.values[i + k];
        }
        acc *= m.sigma2();
        ctx.check_bits(acc, "autocovariances");
        out.values.push_back(std::move(acc));
    }
    return out;
}

}  // namespace

WeightSeq autocovariances(const ArmaModel& model, std::size_t n, const ScalarContext& ctx, AutocovMethod method,
                          std::size_t truncation) {
    const ArmaModel m = model.converted(ctx);
    WeightSeq out = method == AutocovMethod::ExactYuleWalker ? autocov_exact(m, n, ctx)
                                                              : autocov_truncated(m, n, truncation, ctx);
    if (out.values.front().sign() <= 0) {
        throw Error(ErrorCode::SingularSystem, "autocovariance gamma_0 is not positive");
    }
    return out;
}

BigFloat truncated_autocovariance_bound(const ArmaModel& model, const RateInfo& rates, std::size_t truncation,
                                        unsigned precision_bits) {
    const auto bits = static_cast<mpfr_prec_t>(precision_bits);
    const auto ctx = ScalarContext::floating(precision_bits);
    const std::size_t horizon = 2 * truncation + 64;
    const auto psi = psi_weights(model, horizon, ctx);

    const BigFloat& r = rates.rate_psi;
    if (r.is_zero()) {
        // psi_j = 0 for j > q: the truncated sum is exact once M > q.
        if (truncation > model.q()) {
            return BigFloat(bits);
        }
        BigFloat out(bits);
        mpfr_set_inf(out.get(), 1);
        return out;
    }
    BigFloat c(bits);
    BigFloat r_pow(1.0, bits);
    for (std::size_t j = 0; j <= horizon; ++j) {
        c = std::max(c, abs(psi.values[j].floating()) / r_pow);
        r_pow *= r;
    }
    BigFloat r_m(bits);
    mpfr_pow_ui(r_m.get(), r.get(), static_cast<unsigned long>(truncation), MPFR_RNDU);
    return model.sigma2().to_float(bits) * c * c * r_m / (BigFloat(1.0, bits) - r);
}

}  // namespace pacf
