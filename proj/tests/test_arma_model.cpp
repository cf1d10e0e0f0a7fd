#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pacf/arma_model.hpp"
#include "pacf/error.hpp"
#include "pacf/model_io.hpp"
#include "pacf/roots.hpp"
#include "support.hpp"

using namespace pacf;
using namespace pacf::testing;

namespace {

const ScalarContext kExact = ScalarContext::rational();

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::InvalidInput;  // sentinel; callers never expect it from a non-throw
}

double d(const BigFloat& x) { return x.to_double(); }

}  // namespace

TEST(Roots, Linear) {
    auto r = char_roots(to_scalar({q(1), q(-1, 2)}), 128);
    ASSERT_EQ(r.size(), 1U);
    EXPECT_DOUBLE_EQ(d(r[0].re), 2.0);
    EXPECT_DOUBLE_EQ(d(r[0].modulus), 2.0);
    r = char_roots(to_scalar({q(1), q(2, 5)}), 128);
    ASSERT_EQ(r.size(), 1U);
    EXPECT_DOUBLE_EQ(d(r[0].re), -2.5);
    EXPECT_DOUBLE_EQ(d(r[0].modulus), 2.5);
}

TEST(Roots, QuadraticFormulaOracle) {
    // 1 - z + z^2/2: z = 1 +- i.
    const auto r = char_roots(to_scalar({q(1), q(-1), q(1, 2)}), 256);
    ASSERT_EQ(r.size(), 2U);
    for (const auto& root : r) {
        EXPECT_NEAR(d(root.re), 1.0, 1e-30);
        EXPECT_NEAR(std::abs(d(root.im)), 1.0, 1e-30);
        EXPECT_NEAR(d(root.modulus), std::sqrt(2.0), 1e-15);
    }
    EXPECT_GT(d(r[0].im) * d(r[1].im), -2.0);
    EXPECT_LT(d(r[0].im) * d(r[1].im), 0.0);
}

TEST(Roots, RandomQuadraticsAgreeWithClosedForm) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> num(-9, 9);
    for (int t = 0; t < 50; ++t) {
        const int an = num(rng);
        const int bn = num(rng);
        if (bn == 0) {
            continue;
        }
        const double a = an / 4.0;
        const double b = bn / 4.0;
        // 1 + a z + b z^2
        const auto r = char_roots(to_scalar({q(1), q(an, 4), q(bn, 4)}), 256);
        ASSERT_EQ(r.size(), 2U);
        const double disc = a * a - 4 * b;
        std::vector<double> expected;
        if (disc >= 0) {
            expected = {std::abs((-a + std::sqrt(disc)) / (2 * b)), std::abs((-a - std::sqrt(disc)) / (2 * b))};
        } else {
            const double m = std::sqrt(1.0 / std::abs(b));
            expected = {m, m};
        }
        std::sort(expected.begin(), expected.end());
        EXPECT_NEAR(d(r[0].modulus), expected[0], 1e-12 * (1 + expected[0]));
        EXPECT_NEAR(d(r[1].modulus), expected[1], 1e-12 * (1 + expected[1]));
    }
}

TEST(Roots, DegreeZeroIsEmpty) {
    EXPECT_TRUE(char_roots(to_scalar({q(1)}), 64).empty());
    EXPECT_TRUE(char_roots(to_scalar({q(1), q(0)}), 64).empty());
}

TEST(Validate, Ar1) {
    const auto vm = validate(model({q(1, 2)}, {}));
    EXPECT_DOUBLE_EQ(d(vm.rates.rate_psi), 0.5);
    EXPECT_TRUE(vm.rates.rate_pi.is_zero());
}

TEST(Validate, Ma1) {
    const auto vm = validate(model({}, {q(1, 2)}));
    EXPECT_TRUE(vm.rates.rate_psi.is_zero());
    EXPECT_DOUBLE_EQ(d(vm.rates.rate_pi), 0.5);
    ASSERT_EQ(vm.rates.ma_roots.size(), 1U);
    EXPECT_DOUBLE_EQ(d(vm.rates.ma_roots[0].re), -2.0);
}

TEST(Validate, Rejections) {
    EXPECT_EQ(code_of([] { (void)validate(model({q(1)}, {})); }), ErrorCode::NotCausal);
    EXPECT_EQ(code_of([] { (void)validate(model({q(-1)}, {})); }), ErrorCode::NotCausal);
    EXPECT_EQ(code_of([] { (void)validate(model({}, {q(1)})); }), ErrorCode::NotInvertible);
    EXPECT_EQ(code_of([] { (void)validate(model({}, {q(2)})); }), ErrorCode::NotInvertible);
    EXPECT_EQ(code_of([] { (void)validate(model({}, {}, q(0))); }), ErrorCode::NonpositiveVariance);
    EXPECT_EQ(code_of([] { (void)validate(model({}, {}, q(-1))); }), ErrorCode::NonpositiveVariance);
    // Root just inside the tolerance band.
    const Q near_unit = Q(mpz_class("100000000000"), mpz_class("100000000001"));
    EXPECT_EQ(code_of([&] { (void)validate(model({near_unit}, {})); }), ErrorCode::NotCausal);
}

TEST(Validate, WhiteNoise) {
    const auto vm = validate(model({}, {}));
    EXPECT_TRUE(vm.rates.rate_psi.is_zero());
    EXPECT_TRUE(vm.rates.rate_pi.is_zero());
}

TEST(TheoreticalRates, Examples) {
    auto r = theoretical_rates(model({q(1, 2)}, {q(2, 5)}));
    EXPECT_DOUBLE_EQ(d(r.rate_psi), 0.5);
    EXPECT_DOUBLE_EQ(d(r.rate_pi), 0.4);
    r = theoretical_rates(model({}, {q(0), q(1, 4)}));
    EXPECT_DOUBLE_EQ(d(r.rate_pi), 0.5);
    EXPECT_DOUBLE_EQ(d(r.min_root_modulus_ma), 2.0);
    r = theoretical_rates(model({q(1), q(-1, 2)}, {}));
    EXPECT_NEAR(d(r.rate_psi), 1 / std::sqrt(2.0), 1e-15);
}

TEST(PsiWeights, Arma11ClosedForm) {
    const auto psi = psi_weights(model({q(1, 2)}, {q(2, 5)}), 30, kExact);
    ASSERT_EQ(psi.size(), 31U);
    EXPECT_EQ(psi.at(0), Scalar(1));
    EXPECT_EQ(psi.at(1).rational(), q(9, 10));
    EXPECT_EQ(psi.at(2).rational(), q(9, 20));
    EXPECT_EQ(psi.at(3).rational(), q(9, 40));
    Q expected = q(9, 10);
    for (std::size_t j = 1; j <= 30; ++j, expected *= q(1, 2)) {
        EXPECT_EQ(psi.at(j).rational(), expected);
    }
}

TEST(PsiWeights, Ar1AndMa1) {
    const auto ar = psi_weights(model({q(1, 2)}, {}), 40, kExact);
    Q pow = 1;
    for (std::size_t j = 0; j <= 40; ++j, pow /= 2) {
        EXPECT_EQ(ar.at(j).rational(), pow);
    }
    const auto ma = psi_weights(model({}, {q(1, 2)}), 10, kExact);
    EXPECT_EQ(to_q(ma.values), QVec({1, q(1, 2), 0, 0, 0, 0, 0, 0, 0, 0, 0}));
}

TEST(PiWeights, Ma1Geometric) {
    const auto pi = pi_weights(model({}, {q(1, 2)}), 60, kExact);
    ASSERT_EQ(pi.size(), 60U);
    EXPECT_EQ(pi.first_index(), 1U);
    EXPECT_EQ(pi.at(1).rational(), q(1, 2));
    EXPECT_EQ(pi.at(2).rational(), q(-1, 4));
    EXPECT_EQ(pi.at(3).rational(), q(1, 8));
    Q expected = q(1, 2);
    for (std::size_t j = 1; j <= 60; ++j, expected *= q(-1, 2)) {
        EXPECT_EQ(pi.at(j).rational(), expected);
    }
}

TEST(PiWeights, Arma11AndAr1) {
    const auto pi = pi_weights(model({q(1, 2)}, {q(2, 5)}), 20, kExact);
    EXPECT_EQ(pi.at(1).rational(), q(9, 10));
    EXPECT_EQ(pi.at(2).rational(), q(-9, 25));
    EXPECT_EQ(pi.at(3).rational(), q(18, 125));
    Q expected = q(9, 10);
    for (std::size_t j = 1; j <= 20; ++j, expected *= q(-2, 5)) {
        EXPECT_EQ(pi.at(j).rational(), expected);
    }
    const auto ar = pi_weights(model({q(1, 2)}, {}), 10, kExact);
    EXPECT_EQ(to_q(ar.values), QVec({q(1, 2), 0, 0, 0, 0, 0, 0, 0, 0, 0}));
    EXPECT_THROW((void)ar.at(11), Error);
}

// theta(B) pi(B) == phi(B) and phi(B) psi(B) == theta(B), with the series
// products formed here rather than by the library.
TEST(PolynomialIdentity, RandomModels) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 40; ++t) {
        const ArmaModel m = random_model(rng);
        const std::size_t order = 80;
        const QVec theta = to_q(m.ma_polynomial());
        const QVec phi = to_q(m.ar_polynomial());
        QVec pi_poly{1};
        for (const auto& v : pi_weights(m, order, kExact).values) {
            pi_poly.push_back(-v.rational());
        }
        QVec phi_padded = phi;
        phi_padded.resize(order + 1, 0);
        EXPECT_EQ(poly_mul(theta, pi_poly, order), phi_padded) << m.describe();

        const QVec psi = to_q(psi_weights(m, order, kExact).values);
        QVec theta_padded = theta;
        theta_padded.resize(order + 1, 0);
        EXPECT_EQ(poly_mul(phi, psi, order), theta_padded) << m.describe();

        // Independent long-division oracle for pi.
        const QVec inv = series_inverse(theta, order);
        const QVec ratio = poly_mul(phi, inv, order);
        for (std::size_t j = 1; j <= order; ++j) {
            EXPECT_EQ(ratio[j], pi_poly[j]);
        }
    }
}

TEST(Autocovariance, Ar1) {
    const auto g = autocovariances(model({q(1, 2)}, {}), 20, kExact);
    EXPECT_EQ(g.at(0).rational(), q(4, 3));
    EXPECT_EQ(g.at(1).rational(), q(2, 3));
    EXPECT_EQ(g.at(2).rational(), q(1, 3));
    const auto t = autocovariances(model({q(1, 2)}, {}), 20, ScalarContext::floating(256), AutocovMethod::TruncatedPsi,
                                   200);
    for (std::size_t k = 0; k <= 20; ++k) {
        EXPECT_LE(abs(t.at(k).to_rational() - g.at(k).rational()), Q(1e-30));
    }
}

TEST(Autocovariance, Ma1AndWhiteNoise) {
    const auto g = autocovariances(model({}, {q(1, 2)}), 10, kExact);
    EXPECT_EQ(g.at(0).rational(), q(5, 4));
    EXPECT_EQ(g.at(1).rational(), q(1, 2));
    for (std::size_t k = 2; k <= 10; ++k) {
        EXPECT_TRUE(g.at(k).is_zero());
    }
    const auto w = autocovariances(model({}, {}), 5, kExact);
    EXPECT_EQ(to_q(w.values), QVec({1, 0, 0, 0, 0, 0}));
}

TEST(Autocovariance, Arma11ClosedForm) {
    // gamma_0 = sigma2 (1 + 2 phi theta + theta^2) / (1 - phi^2), gamma_1 = sigma2 (1 + phi theta)(phi + theta) / (1 - phi^2).
    const Q phi = q(1, 2);
    const Q theta = q(2, 5);
    const auto g = autocovariances(model({phi}, {theta}), 10, kExact);
    const Q g0 = (1 + 2 * phi * theta + theta * theta) / (1 - phi * phi);
    const Q g1 = (1 + phi * theta) * (phi + theta) / (1 - phi * phi);
    EXPECT_EQ(g.at(0).rational(), Q(g0));
    EXPECT_EQ(g.at(1).rational(), Q(g1));
    Q expected = g1;
    for (std::size_t k = 2; k <= 10; ++k) {
        expected *= phi;
        EXPECT_EQ(g.at(k).rational(), expected);
    }
}

TEST(AutocovarianceProperty, ExactAgreesWithTruncatedWithinBound) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 25; ++t) {
        const ArmaModel m = random_model(rng);
        const auto vm = validate(m);
        const auto exact = autocovariances(m, 30, kExact);
        const auto trunc = autocovariances(m, 30, ScalarContext::floating(256), AutocovMethod::TruncatedPsi, 400);
        const BigFloat bound = truncated_autocovariance_bound(m, vm.rates, 400, 256);
        // Rounding slack for 400 products at 256 bits.
        const BigFloat slack = pow2(-200, 256) * BigFloat(exact.at(0).to_float(256));
        for (std::size_t k = 0; k <= 30; ++k) {
            const BigFloat diff = abs(trunc.at(k).to_float(256) - exact.at(k).to_float(256));
            EXPECT_LE(diff, bound + slack) << m.describe() << " k=" << k;
        }
        // Gamma invariants.
        EXPECT_GT(exact.at(0).sign(), 0);
        for (std::size_t k = 1; k <= 30; ++k) {
            EXPECT_LE(abs(exact.at(k)), exact.at(0));
        }
    }
}

TEST(WeightProperty, PartialSumsAreCauchy) {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 10; ++t) {
        const ArmaModel m = random_model(rng, true);
        const auto vm = validate(m);
        const double r = d(vm.rates.rate_pi);
        const auto pi = pi_weights(m, 200, ScalarContext::floating(256));
        double c = 0.0;
        for (std::size_t n = 1; n <= 200; ++n) {
            c = std::max(c, std::abs(pi.at(n).to_double()) / std::pow(r, static_cast<double>(n)));
        }
        // |sum_{j>n} pi_j| <= C r^{n+1} / (1 - r), checked on the computed range.
        for (std::size_t n : {20U, 50U, 100U}) {
            double tail = 0.0;
            for (std::size_t j = n + 1; j <= 200; ++j) {
                tail += std::abs(pi.at(j).to_double());
            }
            EXPECT_LE(tail, c * std::pow(r, static_cast<double>(n + 1)) / (1 - r) * (1 + 1e-9)) << m.describe();
        }
    }
}

TEST(WeightProperty, NthRootsApproachTheoreticalRates) {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 10; ++t) {
        const ArmaModel m = random_model(rng, true);
        const auto vm = validate(m);
        const auto pi = pi_weights(m, 400, ScalarContext::floating(512));
        double best = 0.0;
        for (std::size_t n = 361; n <= 400; ++n) {
            if (!pi.at(n).is_zero()) {
                best = std::max(best, d(abs_nth_root(pi.at(n).to_float(512), n)));
            }
        }
        EXPECT_NEAR(best, d(vm.rates.rate_pi), 0.02) << m.describe();
    }
}

TEST(ModelIo, RoundTripIsBitIdentical) {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 20; ++t) {
        const ArmaModel m = random_model(rng);
        const ArmaModel back = parse_model_spec(model_to_json(m).dump());
        EXPECT_EQ(back, m);
    }
    const ArmaModel m = parse_model_spec(R"({"model": {"ar": ["1/2", 0.25], "ma": [1], "sigma2": "3/2"}})");
    EXPECT_EQ(m, model({q(1, 2), q(1, 4)}, {q(1)}, q(3, 2)));
    EXPECT_EQ(parse_model_spec(R"({"sigma2": 0.1})").sigma2().rational(), q(1, 10));
}

TEST(ModelIo, Rejections) {
    for (const char* bad : {"", "[]", "{}", R"({"ar": [1]})", R"({"ar": "x", "sigma2": 1})", R"({"ar": [true], "sigma2": 1})",
                            R"({"sigma2": "1/0"})"}) {
        EXPECT_THROW((void)parse_model_spec(bad), Error) << bad;
    }
}

TEST(ModelIo, CoefficientList) {
    EXPECT_EQ(to_q(parse_coefficient_list("1/2, -0.25")), QVec({q(1, 2), q(-1, 4)}));
    EXPECT_TRUE(parse_coefficient_list("").empty());
    EXPECT_TRUE(parse_coefficient_list("  ").empty());
}
