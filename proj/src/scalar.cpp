#include "pacf/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>

#include "pacf/error.hpp"

namespace pacf {

// ---------------------------------------------------------------- BigFloat

BigFloat::BigFloat(mpfr_prec_t precision) {
    mpfr_init2(value_, precision);
    mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(double value, mpfr_prec_t precision) {
    mpfr_init2(value_, precision);
    mpfr_set_d(value_, value, MPFR_RNDN);
}

BigFloat::BigFloat(const mpq_class& value, mpfr_prec_t precision) {
    mpfr_init2(value_, precision);
    mpfr_set_q(value_, value.get_mpq_t(), MPFR_RNDN);
}

BigFloat::BigFloat(const BigFloat& other) {
    mpfr_init2(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
    mpfr_init2(value_, other.precision());
    mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
    if (this != &other) {
        mpfr_set_prec(value_, other.precision());
        mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
    mpfr_swap(value_, other.value_);
    return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

mpq_class BigFloat::to_rational() const {
    if (!is_finite()) {
        throw Error(ErrorCode::PrecisionLoss, "cannot convert a non-finite float to a rational");
    }
    mpq_class out;
    mpfr_get_q(out.get_mpq_t(), value_);
    return out;
}

std::string BigFloat::to_decimal(int significant_digits) const {
    if (is_zero()) {
        return "0";
    }
    if (mpfr_nan_p(value_)) {
        return "nan";
    }
    if (mpfr_inf_p(value_)) {
        return sign() < 0 ? "-inf" : "inf";
    }
    char* raw = nullptr;
    const int digits = std::max(significant_digits, 1) - 1;
    if (mpfr_asprintf(&raw, "%.*Re", digits, value_) < 0) {
        throw Error(ErrorCode::InvalidInput, "mpfr_asprintf failed");
    }
    std::unique_ptr<char, decltype(&mpfr_free_str)> guard(raw, &mpfr_free_str);
    return std::string(raw);
}

BigFloat BigFloat::rounded(mpfr_prec_t precision) const {
    BigFloat out(precision);
    mpfr_set(out.value_, value_, MPFR_RNDN);
    return out;
}

namespace {

// Widens `target` in place so the result of a binary op keeps the larger precision.
void widen_for(BigFloat& target, const BigFloat& other) {
    if (other.precision() > target.precision()) {
        mpfr_prec_round(target.get(), other.precision(), MPFR_RNDN);
    }
}

}  // namespace

BigFloat& BigFloat::operator+=(const BigFloat& rhs) {
    widen_for(*this, rhs);
    mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
    return *this;
}

BigFloat& BigFloat::operator-=(const BigFloat& rhs) {
    widen_for(*this, rhs);
    mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
    return *this;
}

BigFloat& BigFloat::operator*=(const BigFloat& rhs) {
    widen_for(*this, rhs);
    mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
    return *this;
}

BigFloat& BigFloat::operator/=(const BigFloat& rhs) {
    widen_for(*this, rhs);
    mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
    return *this;
}

BigFloat operator-(BigFloat x) {
    mpfr_neg(x.value_, x.value_, MPFR_RNDN);
    return x;
}

BigFloat abs(const BigFloat& x) {
    BigFloat out(x.precision());
    mpfr_abs(out.get(), x.get(), MPFR_RNDN);
    return out;
}

BigFloat sqrt(const BigFloat& x) {
    BigFloat out(x.precision());
    mpfr_sqrt(out.get(), x.get(), MPFR_RNDN);
    return out;
}

BigFloat log(const BigFloat& x) {
    BigFloat out(x.precision());
    mpfr_log(out.get(), x.get(), MPFR_RNDN);
    return out;
}

BigFloat exp(const BigFloat& x) {
    BigFloat out(x.precision());
    mpfr_exp(out.get(), x.get(), MPFR_RNDN);
    return out;
}

BigFloat pow2(long exponent, mpfr_prec_t precision) {
    BigFloat out(precision);
    mpfr_set_ui_2exp(out.get(), 1, exponent, MPFR_RNDN);
    return out;
}

BigFloat abs_nth_root(const BigFloat& x, unsigned long n) {
    BigFloat out(x.precision());
    mpfr_abs(out.get(), x.get(), MPFR_RNDN);
    mpfr_rootn_ui(out.get(), out.get(), n, MPFR_RNDN);
    return out;
}

// ---------------------------------------------------------------- Scalar

std::string_view mode_name(Mode mode) noexcept {
    return mode == Mode::Rational ? "rational" : "float";
}

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

[[noreturn]] void bad_number(std::string_view text) {
    throw Error(ErrorCode::InvalidInput, "not a rational or decimal number: '" + std::string(text) + "'");
}

mpz_class parse_integer(std::string_view text, std::string_view whole) {
    bool negative = false;
    if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    if (!all_digits(text)) {
        bad_number(whole);
    }
    mpz_class out(std::string(text), 10);
    return negative ? mpz_class(-out) : out;
}

mpq_class parse_decimal(std::string_view text, std::string_view whole) {
    bool negative = false;
    if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    long exponent = 0;
    if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
        const mpz_class exp_value = parse_integer(text.substr(e + 1), whole);
        if (abs(exp_value) > 100000) {
            bad_number(whole);
        }
        exponent = exp_value.get_si();
        text = text.substr(0, e);
    }
    std::string digits;
    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
        const auto int_part = text.substr(0, dot);
        const auto frac_part = text.substr(dot + 1);
        if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
            (!frac_part.empty() && !all_digits(frac_part))) {
            bad_number(whole);
        }
        digits = std::string(int_part) + std::string(frac_part);
        exponent -= static_cast<long>(frac_part.size());
    } else {
        if (!all_digits(text)) {
            bad_number(whole);
        }
        digits = std::string(text);
    }
    mpz_class mantissa(digits, 10);
    if (negative) {
        mantissa = -mantissa;
    }
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    mpq_class out = exponent >= 0 ? mpq_class(mantissa * scale) : mpq_class(mantissa, scale);
    out.canonicalize();
    return out;
}

}  // namespace

Scalar Scalar::parse(std::string_view text) {
    const std::string_view s = trim(text);
    if (s.empty()) {
        bad_number(text);
    }
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        const mpz_class num = parse_integer(trim(s.substr(0, slash)), text);
        const mpz_class den = parse_integer(trim(s.substr(slash + 1)), text);
        if (den == 0) {
            throw Error(ErrorCode::InvalidInput, "zero denominator in '" + std::string(text) + "'");
        }
        mpq_class q(num, den);
        q.canonicalize();
        return Scalar(q);
    }
    return Scalar(parse_decimal(s, text));
}

const mpq_class& Scalar::rational() const {
    if (!is_rational()) {
        throw Error(ErrorCode::InvalidInput, "scalar is not rational");
    }
    return std::get<mpq_class>(value_);
}

const BigFloat& Scalar::floating() const {
    if (is_rational()) {
        throw Error(ErrorCode::InvalidInput, "scalar is not a float");
    }
    return std::get<BigFloat>(value_);
}

mpfr_prec_t Scalar::precision() const noexcept {
    return is_rational() ? 0 : std::get<BigFloat>(value_).precision();
}

int Scalar::sign() const noexcept {
    return is_rational() ? sgn(std::get<mpq_class>(value_)) : std::get<BigFloat>(value_).sign();
}

std::size_t Scalar::bit_length() const noexcept {
    if (!is_rational()) {
        return static_cast<std::size_t>(precision());
    }
    const auto& q = std::get<mpq_class>(value_);
    return std::max(mpz_sizeinbase(q.get_num_mpz_t(), 2), mpz_sizeinbase(q.get_den_mpz_t(), 2));
}

BigFloat Scalar::to_float(mpfr_prec_t precision) const {
    if (is_rational()) {
        return BigFloat(std::get<mpq_class>(value_), precision);
    }
    return std::get<BigFloat>(value_).rounded(precision);
}

mpq_class Scalar::to_rational() const {
    return is_rational() ? std::get<mpq_class>(value_) : std::get<BigFloat>(value_).to_rational();
}

double Scalar::to_double() const {
    return is_rational() ? BigFloat(std::get<mpq_class>(value_), 53).to_double()
                         : std::get<BigFloat>(value_).to_double();
}

std::string Scalar::to_string() const {
    if (is_rational()) {
        return std::get<mpq_class>(value_).get_str();
    }
    const auto& f = std::get<BigFloat>(value_);
    const int digits = static_cast<int>(std::ceil(static_cast<double>(f.precision()) * 0.30102999566398120)) + 1;
    return f.to_decimal(digits);
}

std::string Scalar::to_decimal(int significant_digits) const {
    if (is_rational()) {
        const mpfr_prec_t bits = std::max<mpfr_prec_t>(128, 4 * significant_digits + 32);
        return BigFloat(std::get<mpq_class>(value_), bits).to_decimal(significant_digits);
    }
    return std::get<BigFloat>(value_).to_decimal(significant_digits);
}

Scalar& Scalar::operator+=(const Scalar& rhs) {
    if (is_rational() && rhs.is_rational()) {
        std::get<mpq_class>(value_) += std::get<mpq_class>(rhs.value_);
    } else if (is_rational()) {
        BigFloat out(rhs.precision());
        mpfr_add_q(out.get(), rhs.floating().get(), std::get<mpq_class>(value_).get_mpq_t(), MPFR_RNDN);
        value_ = std::move(out);
    } else if (rhs.is_rational()) {
        auto& f = std::get<BigFloat>(value_);
        mpfr_add_q(f.get(), f.get(), rhs.rational().get_mpq_t(), MPFR_RNDN);
    } else {
        std::get<BigFloat>(value_) += rhs.floating();
    }
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& rhs) {
    if (is_rational() && rhs.is_rational()) {
        std::get<mpq_class>(value_) -= std::get<mpq_class>(rhs.value_);
    } else if (is_rational()) {
        // q - f = -(f - q); negation is exact.
        BigFloat out(rhs.precision());
        mpfr_sub_q(out.get(), rhs.floating().get(), std::get<mpq_class>(value_).get_mpq_t(), MPFR_RNDN);
        mpfr_neg(out.get(), out.get(), MPFR_RNDN);
        value_ = std::move(out);
    } else if (rhs.is_rational()) {
        auto& f = std::get<BigFloat>(value_);
        mpfr_sub_q(f.get(), f.get(), rhs.rational().get_mpq_t(), MPFR_RNDN);
    } else {
        std::get<BigFloat>(value_) -= rhs.floating();
    }
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& rhs) {
    if (is_rational() && rhs.is_rational()) {
        std::get<mpq_class>(value_) *= std::get<mpq_class>(rhs.value_);
    } else if (is_rational()) {
        BigFloat out(rhs.precision());
        mpfr_mul_q(out.get(), rhs.floating().get(), std::get<mpq_class>(value_).get_mpq_t(), MPFR_RNDN);
        value_ = std::move(out);
    } else if (rhs.is_rational()) {
        auto& f = std::get<BigFloat>(value_);
        mpfr_mul_q(f.get(), f.get(), rhs.rational().get_mpq_t(), MPFR_RNDN);
    } else {
        std::get<BigFloat>(value_) *= rhs.floating();
    }
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& rhs) {
    if (rhs.is_zero() && rhs.is_rational()) {
        throw Error(ErrorCode::SingularSystem, "division by exact zero");
    }
    if (is_rational() && rhs.is_rational()) {
        std::get<mpq_class>(value_) /= std::get<mpq_class>(rhs.value_);
    } else if (is_rational()) {
        // No mpfr q/f primitive; widen the rational so only the final division rounds noticeably.
        const mpfr_prec_t p = rhs.precision();
        BigFloat num(std::get<mpq_class>(value_), p + 64);
        num /= rhs.floating();
        value_ = num.rounded(p);
    } else if (rhs.is_rational()) {
        auto& f = std::get<BigFloat>(value_);
        mpfr_div_q(f.get(), f.get(), rhs.rational().get_mpq_t(), MPFR_RNDN);
    } else {
        std::get<BigFloat>(value_) /= rhs.floating();
    }
    return *this;
}

Scalar operator-(const Scalar& x) {
    if (x.is_rational()) {
        return Scalar(mpq_class(-x.rational()));
    }
    return Scalar(-x.floating());
}

int compare(const Scalar& a, const Scalar& b) {
    if (a.is_rational() && b.is_rational()) {
        return cmp(a.rational(), b.rational());
    }
    if (a.is_rational()) {
        return -mpfr_cmp_q(b.floating().get(), a.rational().get_mpq_t());
    }
    if (b.is_rational()) {
        return mpfr_cmp_q(a.floating().get(), b.rational().get_mpq_t());
    }
    return compare(a.floating(), b.floating());
}

Scalar abs(const Scalar& x) {
    return x.sign() < 0 ? -x : x;
}

Scalar scalar_convert(const Scalar& x, Mode target, unsigned precision_bits) {
    if (target == Mode::Rational) {
        return Scalar(x.to_rational());
    }
    if (precision_bits < 53) {
        throw Error(ErrorCode::InvalidInput, "float precision must be at least 53 bits");
    }
    return Scalar(x.to_float(static_cast<mpfr_prec_t>(precision_bits)));
}

// ---------------------------------------------------------------- ScalarContext

Scalar ScalarContext::make(const mpq_class& value) const {
    return scalar_convert(Scalar(value), mode, precision_bits);
}

void ScalarContext::check_bits(const Scalar& value, std::string_view what) const {
    if (value.is_rational() && value.bit_length() > bit_cap) {
        throw Error(ErrorCode::BitGrowthCap,
                    std::string(what) + ": rational grew to " + std::to_string(value.bit_length()) +
                        " bits (cap " + std::to_string(bit_cap) + ")");
    }
}

BigFloat ScalarContext::half_precision_epsilon() const {
    if (mode == Mode::Rational) {
        return BigFloat(64);
    }
    return pow2(-static_cast<long>(precision_bits / 2), 64);
}

}  // namespace pacf
