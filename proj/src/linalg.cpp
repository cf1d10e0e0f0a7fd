#include "pacf/linalg.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "pacf/error.hpp"

namespace pacf {

namespace {

void check_pivot(const Scalar& pivot, std::size_t order) {
    if (pivot.is_zero()) {
        throw Error(ErrorCode::SingularSystem, "leading principal minor of order " + std::to_string(order) + " is zero");
    }
    if (pivot.sign() < 0) {
        throw Error(ErrorCode::NotPositiveDefinite,
                    "leading principal minor of order " + std::to_string(order) + " is negative");
    }
}

std::vector<std::vector<Scalar>> toeplitz_elimination(std::span<const Scalar> column,
                                                      std::vector<std::vector<Scalar>> rhs,
                                                      const ScalarContext& ctx) {
    const std::size_t k = column.size();
    std::vector<std::vector<Scalar>> a(k, std::vector<Scalar>(k));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            a[i][j] = column[i > j ? i - j : j - i];
        }
    }
    // No pivoting: for a positive-definite matrix the pivots are ratios of
    // consecutive leading minors, so their signs certify definiteness.
    for (std::size_t col = 0; col < k; ++col) {
        check_pivot(a[col][col], col + 1);
        for (std::size_t row = col + 1; row < k; ++row) {
            if (a[row][col].is_zero()) {
                continue;
            }
            const Scalar factor = a[row][col] / a[col][col];
            for (std::size_t j = col; j < k; ++j) {
                a[row][j] -= factor * a[col][j];
            }
            ctx.check_bits(factor, "toeplitz elimination");
            for (auto& b : rhs) {
                b[row] -= factor * b[col];
            }
        }
    }
    for (auto& b : rhs) {
        for (std::size_t i = k; i-- > 0;) {
            for (std::size_t j = i + 1; j < k; ++j) {
                b[i] -= a[i][j] * b[j];
            }
            b[i] /= a[i][i];
            ctx.check_bits(b[i], "toeplitz elimination");
        }
    }
    return rhs;
}

std::vector<Scalar> toeplitz_levinson(std::span<const Scalar> t, std::span<const Scalar> b) {
    const std::size_t k = t.size();

    check_pivot(t[0], 1);
    std::vector<Scalar> pred;  // order-m one-step predictor coefficients
    Scalar v = t[0];
    std::vector<Scalar> x{b[0] / t[0]};
    x.reserve(k);

    for (std::size_t m = 1; m < k; ++m) {
        Scalar num = t[m];
        for (std::size_t j = 1; j < m; ++j) {
            num -= pred[j - 1] * t[m - j];
        }
        const Scalar kappa = num / v;
        std::vector<Scalar> next(m);
        for (std::size_t j = 1; j < m; ++j) {
            next[j - 1] = pred[j - 1] - kappa * pred[m - j - 1];
        }
        next[m - 1] = kappa;
        pred = std::move(next);
        v *= Scalar(1) - kappa * kappa;
        check_pivot(v, m + 1);

        // T_{m+1} (-pred_m..-pred_1, 1)^T = (0, .., 0, v).
        Scalar eps = b[m];
        for (std::size_t j = 0; j < m; ++j) {
            eps -= t[m - j] * x[j];
        }
        const Scalar c = eps / v;
        for (std::size_t j = 0; j < m; ++j) {
            x[j] -= c * pred[m - 1 - j];
        }
        x.push_back(c);
    }
    return x;
}

void check_residual(std::span<const Scalar> t, std::span<const Scalar> b, const std::vector<Scalar>& x,
                    const ScalarContext& ctx) {
    const mpfr_prec_t bits = static_cast<mpfr_prec_t>(ctx.precision_bits) + 64;
    const std::size_t k = t.size();
    BigFloat worst(bits);
    BigFloat rhs_norm(bits);
    for (std::size_t i = 0; i < k; ++i) {
        BigFloat acc = b[i].to_float(bits);
        for (std::size_t j = 0; j < k; ++j) {
            acc -= t[i > j ? i - j : j - i].to_float(bits) * x[j].to_float(bits);
        }
        worst = std::max(worst, abs(acc));
        rhs_norm = std::max(rhs_norm, abs(b[i].to_float(bits)));
    }
    if (worst > ctx.half_precision_epsilon() * rhs_norm) {
        throw Error(ErrorCode::PrecisionLoss,
                    "toeplitz residual " + worst.to_decimal(6) + " exceeds 2^{-P/2}·||rhs||");
    }
}

}  // namespace

std::vector<std::vector<Scalar>> solve_symmetric_toeplitz_many(std::span<const Scalar> first_column,
                                                               const std::vector<std::vector<Scalar>>& rhs_list,
                                                               const ScalarContext& ctx) {
    const std::size_t k = first_column.size();
    if (k == 0) {
        throw Error(ErrorCode::InvalidInput, "toeplitz system must have size >= 1");
    }
    std::vector<Scalar> column;
    column.reserve(k);
    for (const auto& c : first_column) {
        column.push_back(ctx.convert(c));
    }
    std::vector<std::vector<Scalar>> rhs;
    rhs.reserve(rhs_list.size());
    for (const auto& b : rhs_list) {
        if (b.size() != k) {
            throw Error(ErrorCode::InvalidInput, "toeplitz rhs length does not match the first column");
        }
        auto& converted = rhs.emplace_back();
        converted.reserve(k);
        for (const auto& v : b) {
            converted.push_back(ctx.convert(v));
        }
    }
    if (ctx.mode == Mode::Rational) {
        return toeplitz_elimination(column, std::move(rhs), ctx);
    }
    std::vector<std::vector<Scalar>> out;
    out.reserve(rhs.size());
    for (const auto& b : rhs) {
        auto x = toeplitz_levinson(column, b);
        check_residual(column, b, x, ctx);
        out.push_back(std::move(x));
    }
    return out;
}

std::vector<Scalar> solve_symmetric_toeplitz(const ToeplitzSystem& sys, const ScalarContext& ctx) {
    return std::move(solve_symmetric_toeplitz_many(sys.first_column, {sys.rhs}, ctx).front());
}

std::vector<Scalar> solve_dense(std::vector<std::vector<Scalar>> rows, std::vector<Scalar> rhs,
                                const ScalarContext& ctx) {
    const std::size_t n = rows.size();
    if (rhs.size() != n || std::any_of(rows.begin(), rows.end(), [n](const auto& r) { return r.size() != n; })) {
        throw Error(ErrorCode::InvalidInput, "dense system must be square with matching rhs");
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (auto& v : rows[i]) {
            v = ctx.convert(v);
        }
        rhs[i] = ctx.convert(rhs[i]);
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = n;
        for (std::size_t r = col; r < n; ++r) {
            if (rows[r][col].is_zero()) {
                continue;
            }
            if (ctx.mode == Mode::Rational) {
                pivot = r;
                break;
            }
            if (pivot == n || abs(rows[r][col]) > abs(rows[pivot][col])) {
                pivot = r;
            }
        }
        if (pivot == n) {
            throw Error(ErrorCode::SingularSystem, "dense system is singular at column " + std::to_string(col));
        }
        std::swap(rows[col], rows[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            if (rows[r][col].is_zero()) {
                continue;
            }
            const Scalar factor = rows[r][col] / rows[col][col];
            for (std::size_t j = col; j < n; ++j) {
                rows[r][j] -= factor * rows[col][j];
            }
            rhs[r] -= factor * rhs[col];
            ctx.check_bits(rhs[r], "dense elimination");
        }
    }
    std::vector<Scalar> x(n);
    for (std::size_t i = n; i-- > 0;) {
        Scalar acc = rhs[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            acc -= rows[i][j] * x[j];
        }
        x[i] = acc / rows[i][i];
    }
    return x;
}

std::size_t max_bit_length(std::span<const Scalar> values) noexcept {
    std::size_t out = 0;
    for (const auto& v : values) {
        out = std::max(out, v.bit_length());
    }
    return out;
}

}  // namespace pacf
