#pragma once

// Independent oracles and fixtures shared by the test binaries. Nothing here
// calls into the library's solvers or recursions.

#include <gmpxx.h>

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "pacf/arma_model.hpp"
#include "pacf/scalar.hpp"

namespace pacf::testing {

using Q = mpq_class;
using QVec = std::vector<Q>;

inline Q q(long num, long den = 1) {
    Q x(num, den);
    x.canonicalize();
    return x;
}

inline QVec to_q(const std::vector<Scalar>& xs) {
    QVec out;
    for (const auto& x : xs) {
        out.push_back(x.to_rational());
    }
    return out;
}

inline std::vector<Scalar> to_scalar(const QVec& xs) {
    return {xs.begin(), xs.end()};
}

// Gauss-Jordan with full row search for a pivot, on raw mpq_class.
inline QVec gauss_solve(std::vector<QVec> a, QVec b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a[piv][c] == 0) {
            ++piv;
        }
        if (piv == n) {
            throw std::runtime_error("singular");
        }
        std::swap(a[piv], a[c]);
        std::swap(b[piv], b[c]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) {
                continue;
            }
            const Q f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) {
                a[r][k] -= f * a[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        b[i] /= a[i][i];
    }
    return b;
}

inline std::vector<QVec> toeplitz(const QVec& col, std::size_t k) {
    std::vector<QVec> a(k, QVec(k));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            a[i][j] = col[i > j ? i - j : j - i];
        }
    }
    return a;
}

// Truncated product of two power series.
inline QVec poly_mul(const QVec& a, const QVec& b, std::size_t order) {
    QVec out(order + 1, 0);
    for (std::size_t i = 0; i < a.size() && i <= order; ++i) {
        for (std::size_t j = 0; j < b.size() && i + j <= order; ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

// Coefficients of 1/theta(B) by long division; independent of the library recursions.
inline QVec series_inverse(const QVec& poly, std::size_t order) {
    QVec out(order + 1, 0);
    out[0] = 1 / poly[0];
    for (std::size_t n = 1; n <= order; ++n) {
        Q acc = 0;
        for (std::size_t i = 1; i < poly.size() && i <= n; ++i) {
            acc += poly[i] * out[n - i];
        }
        out[n] = -acc / poly[0];
    }
    return out;
}

// Closed-form MA(1) PACF: -(-theta)^n (1 - theta^2) / (1 - theta^{2(n+1)}).
inline Q ma1_pacf(const Q& theta, std::size_t n) {
    Q pow_n = 1;
    for (std::size_t i = 0; i < n; ++i) {
        pow_n *= -theta;
    }
    Q pow_2n2 = 1;
    for (std::size_t i = 0; i < 2 * (n + 1); ++i) {
        pow_2n2 *= theta;
    }
    Q out = -pow_n * (1 - theta * theta) / (1 - pow_2n2);
    out.canonicalize();
    return out;
}

inline ArmaModel model(const QVec& ar, const QVec& ma, const Q& sigma2 = 1) {
    return {to_scalar(ar), to_scalar(ma), Scalar(sigma2)};
}

struct NamedModel {
    std::string name;
    ArmaModel model;
};

// Bundled test matrix: every MA part has distinct roots with modulus in [1.25, 5].
inline std::vector<NamedModel> test_matrix() {
    return {
        {"white_noise", model({}, {})},
        {"ar1_half", model({q(1, 2)}, {})},
        {"ar2_complex", model({q(1), q(-1, 2)}, {})},
        {"ma1_half", model({}, {q(1, 2)})},
        {"ma1_neg_half", model({}, {q(-1, 2)})},
        {"ma2_imag", model({}, {q(0), q(1, 4)})},
        {"ma2_complex", model({}, {q(1, 2), q(1, 4)})},
        {"arma11", model({q(1, 2)}, {q(2, 5)})},
        {"arma11_slow", model({q(-1, 2)}, {q(4, 5)}, q(3, 2))},
        {"arma21", model({q(1, 2), q(-1, 4)}, {q(1, 3)})},
        {"arma12", model({q(-3, 10)}, {q(3, 5), q(2, 25)})},
        {"arma12_complex", model({q(2, 5)}, {q(-1, 2), q(1, 5)}, q(2))},
    };
}

// Random causal and invertible model with p, q <= 2 and denominators <= 10.
inline ArmaModel random_model(std::mt19937_64& rng, bool require_ma = false) {
    std::uniform_int_distribution<int> order(0, 2);
    std::uniform_int_distribution<int> den(1, 10);
    for (;;) {
        const int p = order(rng);
        const int qq = require_ma ? 1 + order(rng) % 2 : order(rng);
        auto coeffs = [&](int k) {
            QVec out;
            for (int i = 0; i < k; ++i) {
                const int d = den(rng);
                std::uniform_int_distribution<int> num(-2 * d, 2 * d);
                out.push_back(q(num(rng), d));
            }
            return out;
        };
        QVec ar = coeffs(p);
        QVec ma = coeffs(qq);
        if ((!ar.empty() && ar.back() == 0) || (!ma.empty() && ma.back() == 0)) {
            continue;
        }
        ArmaModel m = model(ar, ma, q(den(rng), den(rng)));
        try {
            // Keep a margin so that roots are comfortably outside the unit circle.
            const auto vm = validate(m);
            if (vm.rates.rate_psi.to_double() < 0.9 && vm.rates.rate_pi.to_double() < 0.9) {
                return m;
            }
        } catch (const std::exception&) {
        }
    }
}

}  // namespace pacf::testing
