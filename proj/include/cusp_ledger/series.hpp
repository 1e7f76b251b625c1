#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "cusp_ledger/arith.hpp"

namespace cusp {

// Truncation marker for series that are known exactly (finite sums).
inline constexpr int64_t kExact = std::numeric_limits<int64_t>::max();

struct Term {
    int64_t exp24; // exponent in units of 1/24
    Rational coeff;

    bool operator==(const Term&) const = default;
};

/// Truncated Laurent series in q^{1/24} with exact rational coefficients.
///
/// Terms are stored sparsely, sorted by exponent, with zeros dropped, so the
/// zero series is the empty term list. Every exponent >= trunc24() is unknown;
/// asking for such a coefficient throws TruncationError instead of returning 0.
class QSeries {
public:
    QSeries() = default;

    static QSeries zero(int64_t trunc24 = kExact);
    static QSeries one();
    static QSeries constant(const Rational& c, int64_t trunc24 = kExact);
    static QSeries monomial(const Rational& c, int64_t exp24, int64_t trunc24 = kExact);

    // Terms may come in any order; duplicates are summed, zeros and terms at or
    // beyond trunc24 are dropped.
    static QSeries from_terms(std::vector<Term> terms, int64_t trunc24);

    // coeffs[i] is the coefficient of q^{(start24 + i*step24)/24}.
    static QSeries from_coefficients(std::span<const Rational> coeffs, int64_t start24,
                                     int64_t step24, int64_t trunc24);

    bool is_zero() const { return terms_.empty(); }
    bool is_exact() const { return trunc24_ == kExact; }

    // Lowest stored exponent; the truncation point for the zero series.
    int64_t offset24() const { return terms_.empty() ? trunc24_ : terms_.front().exp24; }
    int64_t trunc24() const { return trunc24_; }
    const std::vector<Term>& terms() const { return terms_; }
    const Rational& leading_coefficient() const;

    Rational coefficient(int64_t exp24) const;
    Rational coefficient_q(int64_t n) const { return coefficient(24 * n); }

    bool integral_exponents() const;
    bool integral_coefficients() const;

    QSeries truncated(int64_t trunc24) const;
    QSeries shifted(int64_t delta24) const; // multiply by q^{delta/24}

    // Equal on every exponent both series know.
    bool agrees_with(const QSeries& other) const;

    QSeries operator-() const;
    QSeries& operator+=(const QSeries& rhs);
    QSeries& operator-=(const QSeries& rhs);
    QSeries& operator*=(const Rational& c);

    friend QSeries operator+(QSeries a, const QSeries& b) { return a += b; }
    friend QSeries operator-(QSeries a, const QSeries& b) { return a -= b; }
    friend QSeries operator*(const QSeries& a, const QSeries& b);
    friend QSeries operator*(QSeries a, const Rational& c) { return a *= c; }
    friend QSeries operator*(const Rational& c, QSeries a) { return a *= c; }

    bool operator==(const QSeries&) const = default;

private:
    std::vector<Term> terms_;
    int64_t trunc24_ = kExact;
};

// Saturating t + d for truncation bookkeeping.
int64_t trunc_add(int64_t trunc24, int64_t delta24);

// 1/a. Exact inputs with more than one term need a cap on the result.
QSeries invert(const QSeries& a, int64_t cap24 = kExact);

// a^k for any integer k, via the power recurrence on the normalized series.
QSeries pow(const QSeries& a, int64_t k, int64_t cap24 = kExact);

// q^{delta/24} prod_{n>=1} (1 - q^{delta n}), all terms below trunc24.
QSeries eta_expansion(int64_t delta, int64_t trunc24);

// sum a(n) q^n  ->  sum a(ell n) q^n.
QSeries u_ell(const QSeries& a, int64_t ell);

// The r with lambda*r == target (mod modulus), 0 <= r < modulus.
int64_t slice_residue(int64_t lambda, int64_t target, int64_t modulus);

// sum over lambda*n == target (mod ell^depth) of a(n) q^{floor(n / ell^depth)}.
QSeries slice(const QSeries& a, int64_t lambda, int64_t ell, int64_t depth, int64_t target = 1);

struct ValuationReport {
    int64_t prime = 0;
    std::optional<int64_t> min_valuation; // nullopt is +infinity
    std::optional<int64_t> witness_exp24;
    int64_t terms_checked = 0;
};

ValuationReport padic_valuation(const QSeries& a, int64_t ell);

} // namespace cusp
