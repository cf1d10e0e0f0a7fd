#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pacf/roots.hpp"
#include "pacf/scalar.hpp"

namespace pacf {

enum class SequenceKind { Psi, Pi, Gamma, Pacf };

[[nodiscard]] std::string_view sequence_kind_name(SequenceKind kind) noexcept;

/// Finite prefix of psi (from psi_0), pi (from pi_1), gamma (from gamma_0) or
/// PACF (from phi_11) values.
struct WeightSeq {
    SequenceKind kind = SequenceKind::Psi;
    Mode mode = Mode::Rational;
    std::vector<Scalar> values;

    [[nodiscard]] std::size_t first_index() const noexcept {
        return kind == SequenceKind::Psi || kind == SequenceKind::Gamma ? 0 : 1;
    }
    [[nodiscard]] std::size_t last_index() const noexcept { return first_index() + values.size() - 1; }
    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    /// Value at the sequence's natural index; IndexOutOfRange otherwise.
    [[nodiscard]] const Scalar& at(std::size_t n) const;
};

/// phi(B) X_t = theta(B) e_t with phi(B) = 1 - phi_1 B - ... - phi_p B^p,
/// theta(B) = 1 + theta_1 B + ... + theta_q B^q and Var(e_t) = sigma2.
class ArmaModel {
public:
    ArmaModel(std::vector<Scalar> ar, std::vector<Scalar> ma, Scalar sigma2)
        : ar_(std::move(ar)), ma_(std::move(ma)), sigma2_(std::move(sigma2)) {}

    [[nodiscard]] const std::vector<Scalar>& ar() const noexcept { return ar_; }
    [[nodiscard]] const std::vector<Scalar>& ma() const noexcept { return ma_; }
    [[nodiscard]] const Scalar& sigma2() const noexcept { return sigma2_; }
    [[nodiscard]] std::size_t p() const noexcept { return ar_.size(); }
    [[nodiscard]] std::size_t q() const noexcept { return ma_.size(); }

    /// Coefficients of phi(z) = 1 - phi_1 z - ... in increasing powers.
    [[nodiscard]] std::vector<Scalar> ar_polynomial() const;
    /// Coefficients of theta(z) = 1 + theta_1 z + ... in increasing powers.
    [[nodiscard]] std::vector<Scalar> ma_polynomial() const;

    [[nodiscard]] ArmaModel converted(const ScalarContext& ctx) const;
    /// e.g. "ARMA(1,1) ar=[1/2] ma=[2/5] sigma2=1"
    [[nodiscard]] std::string describe() const;

    friend bool operator==(const ArmaModel& a, const ArmaModel& b) {
        return a.ar_ == b.ar_ && a.ma_ == b.ma_ && a.sigma2_ == b.sigma2_;
    }

private:
    std::vector<Scalar> ar_;
    std::vector<Scalar> ma_;
    Scalar sigma2_;
};

/// Root moduli and the implied exponential decay rates. An empty (degree-0)
/// polynomial has no roots: its minimum modulus is +inf and its rate is 0.
struct RateInfo {
    std::vector<ComplexRoot> ar_roots;
    std::vector<ComplexRoot> ma_roots;
    BigFloat min_root_modulus_ar;
    BigFloat min_root_modulus_ma;
    BigFloat rate_psi;  // 1 / min |root of phi|
    BigFloat rate_pi;   // 1 / min |root of theta|
};

struct ValidatedModel {
    ArmaModel model;
    RateInfo rates;
};

/// Causality/invertibility margin: every root must satisfy |z| >= 1 + kRootTolerance.
inline constexpr double kRootTolerance = 1e-9;

/// Checks sigma2 > 0 and that all roots of phi and theta lie outside the unit
/// circle. Throws NonpositiveVariance, NotCausal or NotInvertible.
[[nodiscard]] ValidatedModel validate(const ArmaModel& model,
                                      unsigned precision_bits = ScalarContext::kDefaultPrecision);

[[nodiscard]] RateInfo theoretical_rates(const ArmaModel& model,
                                         unsigned precision_bits = ScalarContext::kDefaultPrecision);

/// psi_0..psi_N.
[[nodiscard]] WeightSeq psi_weights(const ArmaModel& model, std::size_t n, const ScalarContext& ctx);

/// pi_1..pi_N, the coefficients in phi(B)/theta(B) = 1 - sum pi_i B^i.
[[nodiscard]] WeightSeq pi_weights(const ArmaModel& model, std::size_t n, const ScalarContext& ctx);

enum class AutocovMethod { ExactYuleWalker, TruncatedPsi };

/// gamma_0..gamma_N.
///
/// ExactYuleWalker solves the (p+1)-dimensional system for gamma_0..gamma_p and
/// extends it by the difference equation. TruncatedPsi sums
/// sigma2 * sum_{i<M} psi_i psi_{i+k}, with M = `truncation`.
[[nodiscard]] WeightSeq autocovariances(const ArmaModel& model, std::size_t n, const ScalarContext& ctx,
                                        AutocovMethod method = AutocovMethod::ExactYuleWalker,
                                        std::size_t truncation = 0);

/// Bound on |gamma_k - truncated gamma_k| for truncation M:
/// sigma2 * C^2 * r^M / (1 - r), r = rate_psi, C = max_j |psi_j| / r^j over j < 2M + 64.
/// Zero when psi terminates before M.
[[nodiscard]] BigFloat truncated_autocovariance_bound(const ArmaModel& model, const RateInfo& rates,
                                                      std::size_t truncation, unsigned precision_bits);

}  // namespace pacf
