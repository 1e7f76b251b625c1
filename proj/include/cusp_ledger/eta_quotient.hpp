#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cusp_ledger/arith.hpp"
#include "cusp_ledger/series.hpp"

namespace cusp {

/// prod_{delta | M} eta(delta tau)^{r_delta}.
///
/// Zero exponents are dropped on construction, so two quotients compare equal
/// exactly when they describe the same function at the same product level M.
class EtaQuotient {
public:
    EtaQuotient() = default;
    EtaQuotient(int64_t level, std::map<int64_t, int64_t> exponents);

    // Level defaults to the lcm of the deltas.
    static EtaQuotient from_exponents(std::map<int64_t, int64_t> exponents);

    int64_t level() const { return level_; }
    const std::map<int64_t, int64_t>& exponents() const { return exponents_; }
    int64_t exponent(int64_t delta) const;

    bool is_trivial() const { return exponents_.empty(); }

    // sum r_delta; zero for functions (twice the weight).
    int64_t exponent_sum() const;
    // sum delta r_delta: the leading exponent of the expansion at infinity.
    int64_t leading_exp24() const;

    EtaQuotient operator*(const EtaQuotient& other) const;
    EtaQuotient pow(int64_t k) const;

    std::string to_string() const;

    bool operator==(const EtaQuotient&) const = default;

private:
    int64_t level_ = 1;
    std::map<int64_t, int64_t> exponents_;
};

struct ModularityCheck {
    bool weight_zero = false;       // sum r = 0
    bool infinity_condition = false; // sum delta r = 0 (mod 24)
    bool zero_condition = false;     // sum (N/delta) r = 0 (mod 24)
    bool square_condition = false;   // prod delta^r is a rational square
    std::vector<std::string> reasons;

    bool valid() const { return weight_zero && infinity_condition && zero_condition && square_condition; }
};

ModularityCheck validate_on_gamma0(const EtaQuotient& f, int64_t level);

struct CuspOrderVector {
    int64_t level = 0;
    std::map<int64_t, Rational> entries; // denominator -> order in the local uniformizer

    const Rational& at(int64_t denominator) const;
    // sum of count(c) * order(c) over the classes.
    Rational valence_sum() const;
};

// Order at the cusp class with denominator c, in the local uniformizer.
Rational order_at_cusp(const EtaQuotient& f, int64_t level, int64_t denominator);
CuspOrderVector cusp_orders(const EtaQuotient& f, int64_t level);

// Expansion at infinity: all terms below trunc24 (absolute, in 24ths).
QSeries expand_at_infinity(const EtaQuotient& f, int64_t trunc24);

struct ZeroExpansion {
    Rational scale;   // prod (N/delta)^{r_delta / 2}
    QSeries series;   // normalized eta-quotient expansion, leading coefficient 1

    QSeries value() const { return series * scale; }
};

// Expansion at [0]_N in the chart tau -> -1/(N tau).
ZeroExpansion expand_at_zero(const EtaQuotient& f, int64_t level, int64_t trunc24);

struct OrderConstraint {
    enum class Relation { Eq, Ge, Le, Gt, Lt };

    int64_t denominator = 0;
    Relation relation = Relation::Eq;
    Rational value;

    bool holds(const Rational& order) const;
    std::string to_string() const;
};

// Parses "1:=-1,5:>=1" style constraint lists.
std::vector<OrderConstraint> parse_constraints(const std::string& text);

/// Exhaustive search over exponent vectors with |r_delta| <= bound, delta | N,
/// keeping quotients valid on Gamma_0(N) that satisfy every constraint.
/// Sorted by sum |r_delta|, then lexicographically.
std::vector<EtaQuotient> find_eta_quotients(int64_t level, std::span<const OrderConstraint> constraints,
                                            int64_t bound, int jobs = 1);

} // namespace cusp
