#include "pacf/roots.hpp"

#include <algorithm>
#include <string>

#include "pacf/error.hpp"

namespace pacf {

namespace {

constexpr int kMaxIterations = 2000;

struct Complex {
    BigFloat re;
    BigFloat im;

    explicit Complex(mpfr_prec_t p) : re(p), im(p) {}
    Complex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}

    [[nodiscard]] bool is_zero() const { return re.is_zero() && im.is_zero(); }
    [[nodiscard]] BigFloat norm() const { return re * re + im * im; }
    [[nodiscard]] BigFloat modulus() const { return sqrt(norm()); }
};

Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
Complex operator/(const Complex& a, const Complex& b) {
    const BigFloat d = b.norm();
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

struct Evaluation {
    Complex value;
    Complex derivative;
    BigFloat magnitude_bound;  // sum |c_j| |z|^j, for the backward-error test
};

Evaluation horner(const std::vector<BigFloat>& c, const Complex& z, mpfr_prec_t p) {
    Complex value(p);
    Complex derivative(p);
    BigFloat bound(p);
    const BigFloat r = z.modulus();
    for (std::size_t i = c.size(); i-- > 0;) {
        derivative = derivative * z + value;
        value = value * z + Complex(c[i], BigFloat(p));
        bound = bound * r + abs(c[i]);
    }
    return {std::move(value), std::move(derivative), std::move(bound)};
}

}  // namespace

std::vector<ComplexRoot> char_roots(std::span<const Scalar> coeffs, unsigned precision_bits) {
    if (coeffs.empty() || coeffs.front().is_zero()) {
        throw Error(ErrorCode::InvalidInput, "characteristic polynomial needs a nonzero constant term");
    }
    std::size_t degree = coeffs.size() - 1;
    while (degree > 0 && coeffs[degree].is_zero()) {
        --degree;
    }
    if (degree == 0) {
        return {};
    }

    const auto out_bits = static_cast<mpfr_prec_t>(precision_bits);
    const mpfr_prec_t p = 2 * out_bits;
    std::vector<BigFloat> c;
    c.reserve(degree + 1);
    for (std::size_t i = 0; i <= degree; ++i) {
        c.push_back(coeffs[i].to_float(p));
    }

    std::vector<Complex> z;
    if (degree == 1) {
        z.emplace_back(-(c[0] / c[1]), BigFloat(p));
    } else {
        // Start on the circle whose radius is the geometric mean of the root moduli.
        BigFloat radius = abs(c[0] / c[degree]);
        mpfr_rootn_ui(radius.get(), radius.get(), static_cast<unsigned long>(degree), MPFR_RNDN);
        BigFloat two_pi(p);
        mpfr_const_pi(two_pi.get(), MPFR_RNDN);
        two_pi *= BigFloat(2.0, p);
        for (std::size_t k = 0; k < degree; ++k) {
            BigFloat angle = two_pi * BigFloat(static_cast<double>(k) / static_cast<double>(degree), p) +
                             BigFloat(0.4, p);
            BigFloat cs(p);
            BigFloat sn(p);
            mpfr_sin_cos(sn.get(), cs.get(), angle.get(), MPFR_RNDN);
            z.emplace_back(radius * cs, radius * sn);
        }

        const BigFloat step_tol = pow2(-static_cast<long>(out_bits), p);
        std::vector<bool> done(degree, false);
        int iteration = 0;
        while (!std::all_of(done.begin(), done.end(), [](bool d) { return d; })) {
            if (++iteration > kMaxIterations) {
                throw Error(ErrorCode::ConvergenceFailure,
                            "Aberth iteration did not converge for a degree-" + std::to_string(degree) + " polynomial");
            }
            for (std::size_t i = 0; i < degree; ++i) {
                if (done[i]) {
                    continue;
                }
                Evaluation e = horner(c, z[i], p);
                if (e.value.is_zero() || e.value.modulus() <= step_tol * e.magnitude_bound) {
                    done[i] = true;
                    continue;
                }
                Complex repulsion(p);
                for (std::size_t j = 0; j < degree; ++j) {
                    if (j != i) {
                        repulsion = repulsion + Complex(BigFloat(1.0, p), BigFloat(p)) / (z[i] - z[j]);
                    }
                }
                // w = p / (p' - p * sum 1/(z_i - z_j))
                Complex denom = e.derivative - e.value * repulsion;
                if (denom.is_zero()) {
                    z[i].re += step_tol * BigFloat(1024.0, p);
                    continue;
                }
                const Complex w = e.value / denom;
                z[i] = z[i] - w;
                if (w.modulus() <= step_tol * z[i].modulus()) {
                    done[i] = true;
                }
            }
        }
    }

    std::vector<ComplexRoot> roots;
    roots.reserve(degree);
    for (auto& r : z) {
        BigFloat modulus = r.modulus();
        roots.push_back({r.re.rounded(out_bits), r.im.rounded(out_bits), modulus.rounded(out_bits)});
    }
    std::sort(roots.begin(), roots.end(),
              [](const ComplexRoot& a, const ComplexRoot& b) { return a.modulus < b.modulus; });
    return roots;
}

}  // namespace pacf
