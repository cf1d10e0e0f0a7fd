#pragma once

#include <concepts>
#include <cstddef>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>
#include <mpfr.h>

namespace pacf {

/// Owning MPFR value. Each value carries its own mantissa precision in bits;
/// binary operations round to nearest at the larger of the two precisions.
class BigFloat {
public:
    explicit BigFloat(mpfr_prec_t precision = 53);
    BigFloat(double value, mpfr_prec_t precision);
    BigFloat(const mpq_class& value, mpfr_prec_t precision);
    BigFloat(const BigFloat& other);
    BigFloat(BigFloat&& other) noexcept;
    BigFloat& operator=(const BigFloat& other);
    BigFloat& operator=(BigFloat&& other) noexcept;
    ~BigFloat();

    [[nodiscard]] mpfr_prec_t precision() const noexcept { return mpfr_get_prec(value_); }
    [[nodiscard]] mpfr_srcptr get() const noexcept { return value_; }
    [[nodiscard]] mpfr_ptr get() noexcept { return value_; }

    [[nodiscard]] bool is_zero() const noexcept { return mpfr_zero_p(value_) != 0; }
    [[nodiscard]] int sign() const noexcept { return mpfr_sgn(value_); }
    [[nodiscard]] bool is_finite() const noexcept { return mpfr_number_p(value_) != 0; }
    [[nodiscard]] double to_double() const noexcept { return mpfr_get_d(value_, MPFR_RNDN); }
    /// Exact: every finite binary float is a dyadic rational.
    [[nodiscard]] mpq_class to_rational() const;
    /// Scientific notation with `significant_digits` digits, e.g. "-1.9047619047619048e-01".
    [[nodiscard]] std::string to_decimal(int significant_digits) const;
    /// Rounds to `precision` bits (nearest).
    [[nodiscard]] BigFloat rounded(mpfr_prec_t precision) const;

    BigFloat& operator+=(const BigFloat& rhs);
    BigFloat& operator-=(const BigFloat& rhs);
    BigFloat& operator*=(const BigFloat& rhs);
    BigFloat& operator/=(const BigFloat& rhs);

    friend BigFloat operator+(BigFloat lhs, const BigFloat& rhs) { return lhs += rhs; }
    friend BigFloat operator-(BigFloat lhs, const BigFloat& rhs) { return lhs -= rhs; }
    friend BigFloat operator*(BigFloat lhs, const BigFloat& rhs) { return lhs *= rhs; }
    friend BigFloat operator/(BigFloat lhs, const BigFloat& rhs) { return lhs /= rhs; }
    friend BigFloat operator-(BigFloat x);

    friend int compare(const BigFloat& a, const BigFloat& b) noexcept { return mpfr_cmp(a.value_, b.value_); }
    friend bool operator==(const BigFloat& a, const BigFloat& b) noexcept { return compare(a, b) == 0; }
    friend bool operator<(const BigFloat& a, const BigFloat& b) noexcept { return compare(a, b) < 0; }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) noexcept { return compare(a, b) <= 0; }
    friend bool operator>(const BigFloat& a, const BigFloat& b) noexcept { return compare(a, b) > 0; }
    friend bool operator>=(const BigFloat& a, const BigFloat& b) noexcept { return compare(a, b) >= 0; }

private:
    mpfr_t value_;
};

[[nodiscard]] BigFloat abs(const BigFloat& x);
[[nodiscard]] BigFloat sqrt(const BigFloat& x);
[[nodiscard]] BigFloat log(const BigFloat& x);
[[nodiscard]] BigFloat exp(const BigFloat& x);
/// 2^e at the given precision.
[[nodiscard]] BigFloat pow2(long exponent, mpfr_prec_t precision);
/// |x|^(1/n) for n >= 1.
[[nodiscard]] BigFloat abs_nth_root(const BigFloat& x, unsigned long n);

enum class Mode { Rational, Float };

[[nodiscard]] std::string_view mode_name(Mode mode) noexcept;

/// Exact rational or MPFR float. Rational op rational stays exact; anything
/// touching a float is rounded at the float's precision.
class Scalar {
public:
    Scalar() : value_(mpq_class(0)) {}
    template <std::integral Int>
    Scalar(Int value) : value_(mpq_class(static_cast<long>(value))) {}
    Scalar(double) = delete;
    Scalar(const mpq_class& value) : value_(value) { std::get<mpq_class>(value_).canonicalize(); }
    Scalar(BigFloat value) : value_(std::move(value)) {}

    /// Parses "num/den", an integer, or a decimal such as "-1.25e-3"; the
    /// result is always the exact rational the text denotes.
    [[nodiscard]] static Scalar parse(std::string_view text);

    [[nodiscard]] Mode mode() const noexcept { return value_.index() == 0 ? Mode::Rational : Mode::Float; }
    [[nodiscard]] bool is_rational() const noexcept { return value_.index() == 0; }
    [[nodiscard]] const mpq_class& rational() const;
    [[nodiscard]] const BigFloat& floating() const;
    /// Mantissa bits for floats, 0 for rationals.
    [[nodiscard]] mpfr_prec_t precision() const noexcept;

    [[nodiscard]] int sign() const noexcept;
    [[nodiscard]] bool is_zero() const noexcept { return sign() == 0; }
    /// Largest of numerator/denominator bit lengths (rational) or the precision (float).
    [[nodiscard]] std::size_t bit_length() const noexcept;

    [[nodiscard]] BigFloat to_float(mpfr_prec_t precision) const;
    [[nodiscard]] mpq_class to_rational() const;
    [[nodiscard]] double to_double() const;
    /// Exact "num/den" for rationals, full-precision decimal for floats.
    [[nodiscard]] std::string to_string() const;
    [[nodiscard]] std::string to_decimal(int significant_digits = 17) const;

    Scalar& operator+=(const Scalar& rhs);
    Scalar& operator-=(const Scalar& rhs);
    Scalar& operator*=(const Scalar& rhs);
    Scalar& operator/=(const Scalar& rhs);

    friend Scalar operator+(Scalar lhs, const Scalar& rhs) { return lhs += rhs; }
    friend Scalar operator-(Scalar lhs, const Scalar& rhs) { return lhs -= rhs; }
    friend Scalar operator*(Scalar lhs, const Scalar& rhs) { return lhs *= rhs; }
    friend Scalar operator/(Scalar lhs, const Scalar& rhs) { return lhs /= rhs; }
    friend Scalar operator-(const Scalar& x);

    friend int compare(const Scalar& a, const Scalar& b);
    friend bool operator==(const Scalar& a, const Scalar& b) { return compare(a, b) == 0; }
    friend bool operator<(const Scalar& a, const Scalar& b) { return compare(a, b) < 0; }
    friend bool operator<=(const Scalar& a, const Scalar& b) { return compare(a, b) <= 0; }
    friend bool operator>(const Scalar& a, const Scalar& b) { return compare(a, b) > 0; }
    friend bool operator>=(const Scalar& a, const Scalar& b) { return compare(a, b) >= 0; }

private:
    std::variant<mpq_class, BigFloat> value_;
};

[[nodiscard]] Scalar abs(const Scalar& x);

/// Rational -> float rounds to nearest at `precision_bits`; float -> rational is exact.
[[nodiscard]] Scalar scalar_convert(const Scalar& x, Mode target, unsigned precision_bits);

/// Arithmetic mode and limits shared by a computation.
struct ScalarContext {
    static constexpr unsigned kDefaultPrecision = 256;
    static constexpr std::size_t kDefaultBitCap = 1'000'000;

    Mode mode = Mode::Rational;
    unsigned precision_bits = kDefaultPrecision;
    std::size_t bit_cap = kDefaultBitCap;

    [[nodiscard]] static ScalarContext rational() { return {}; }
    [[nodiscard]] static ScalarContext floating(unsigned bits) { return {Mode::Float, bits, kDefaultBitCap}; }

    [[nodiscard]] Scalar make(const mpq_class& value) const;
    [[nodiscard]] Scalar make(long value) const { return make(mpq_class(value)); }
    [[nodiscard]] Scalar convert(const Scalar& value) const { return scalar_convert(value, mode, precision_bits); }
    /// Throws BitGrowthCap when a rational exceeds the cap; no-op in float mode.
    void check_bits(const Scalar& value, std::string_view what) const;
    /// 2^{-precision_bits/2} in float mode, 0 in rational mode.
    [[nodiscard]] BigFloat half_precision_epsilon() const;
};

}  // namespace pacf
