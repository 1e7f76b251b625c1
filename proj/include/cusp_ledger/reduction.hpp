#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cusp_ledger/eta_quotient.hpp"
#include "cusp_ledger/series.hpp"

namespace cusp {

// (k, m) indexes the monomial y_k x^m.
using MonomialIndex = std::pair<int64_t, int64_t>;

inline constexpr int64_t kDefaultGuard = 10;

struct BasisElement {
    std::string label;
    std::optional<EtaQuotient> eta;
    QSeries at_zero; // value at [0]_N, multiplier included; integral exponents
    std::optional<CuspOrderVector> orders;

    // Pole order at [0]_N (negative of the leading exponent).
    int64_t pole_order() const;
};

/// The module sum_k y_k C[x] of functions with poles only at [0]_N, plus an
/// optional localizer z.
///
/// y_0 = 1 is implicit. Order-completeness (pole orders of the y_k hit every
/// residue mod d_x exactly once) is checked on construction, which is what
/// makes the greedy choice in reduce_module unique.
class ModuleBasis {
public:
    ModuleBasis() = default;

    static ModuleBasis from_series(int64_t level, BasisElement x, std::vector<BasisElement> ys,
                                   std::optional<BasisElement> z = std::nullopt);

    // Expansions are computed at cusp 0 as needed from the eta descriptions.
    static ModuleBasis from_eta(int64_t level, const EtaQuotient& x, const std::vector<EtaQuotient>& ys,
                                const std::optional<EtaQuotient>& z = std::nullopt, int64_t trunc24 = 24 * 40);

    int64_t level() const { return level_; }
    const BasisElement& x() const { return x_; }
    // ys()[0] is the constant 1.
    const std::vector<BasisElement>& ys() const { return ys_; }
    const std::optional<BasisElement>& z() const { return z_; }
    bool has_eta_descriptions() const;

    int64_t x_pole() const { return x_.pole_order(); }
    std::vector<int64_t> y_poles() const;

    // Positive pole orders that no y_k x^m attains.
    std::vector<int64_t> gap_set() const;
    std::optional<MonomialIndex> monomial_for_pole(int64_t pole) const;
    int64_t monomial_pole(const MonomialIndex& km) const;

    // y_k x^m at [0]_N, known at least below trunc24 when the basis is
    // eta-described; otherwise as far as the stored expansions allow.
    QSeries monomial_at_zero(const MonomialIndex& km, int64_t trunc24) const;
    QSeries localizer_power_at_zero(int64_t n, int64_t trunc24) const;

    std::optional<EtaQuotient> monomial_eta(const MonomialIndex& km) const;

private:
    int64_t level_ = 0;
    BasisElement x_;
    std::vector<BasisElement> ys_;
    std::optional<BasisElement> z_;

    void validate() const;
};

struct Representation {
    int64_t localizer_exponent = 0;
    std::map<MonomialIndex, Rational> coeffs;
    QSeries residual;
};

// z^{-n} sum s_{k,m} y_k x^m at [0]_N.
QSeries reexpand(const Representation& rep, const ModuleBasis& basis, int64_t trunc24);

Representation reduce_genus0(const QSeries& f, const BasisElement& x, int64_t guard = kDefaultGuard);
Representation reduce_module(const QSeries& f, const ModuleBasis& basis, int64_t guard = kDefaultGuard);

// Smallest n >= 0 with z^n f holding non-negative order at every class but
// [0]_N, from order vectors alone.
int64_t localizer_exponent(const CuspOrderVector& f_orders, const CuspOrderVector& z_orders);

Representation localize_reduce(const QSeries& f, const ModuleBasis& basis, const CuspOrderVector& f_orders,
                               int64_t guard = kDefaultGuard);

/// Finds the least n <= max_n with z^n f = sum s_{k,m} y_k x^m by exact linear
/// algebra on expansions at infinity, where f is known. Needs eta-described
/// basis elements. nullopt if no n works at the available truncation.
std::optional<Representation> solve_at_infinity(const QSeries& f_at_infinity, const ModuleBasis& basis,
                                                int64_t max_n, int64_t guard = kDefaultGuard);

// Lower bounds on the cusp orders of z^{-n} sum s y_k x^m, from the order
// vectors of the basis elements.
CuspOrderVector order_bounds(const Representation& rep, const ModuleBasis& basis);

struct ValuationTable {
    int64_t prime = 0;
    std::map<MonomialIndex, std::optional<int64_t>> entries; // nullopt is +infinity

    std::optional<int64_t> min() const;
};

ValuationTable valuation_table(const Representation& rep, int64_t ell);

struct GainReport {
    int64_t prime = 0;
    std::optional<int64_t> min_before;
    std::optional<int64_t> min_after;
    std::optional<int64_t> gain; // nullopt when either side is +infinity
    bool passed = false;
    std::vector<MonomialIndex> flagged; // entries below min_before + 1
};

GainReport valuation_gain(const ValuationTable& before, const ValuationTable& after);

} // namespace cusp
