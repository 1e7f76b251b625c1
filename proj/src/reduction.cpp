#include "cusp_ledger/reduction.hpp"

#include <algorithm>
#include <stdexcept>

namespace cusp {

namespace {

std::string km_string(const MonomialIndex& km)
{
    return "(" + std::to_string(km.first) + ", " + std::to_string(km.second) + ")";
}

BasisElement unit_element(int64_t level)
{
    BasisElement one;
    one.label = "1";
    one.eta = EtaQuotient(std::max<int64_t>(level, 1), {});
    one.at_zero = QSeries::one();
    if (level >= 1) one.orders = cusp_orders(*one.eta, level);
    return one;
}

BasisElement eta_element(const std::string& label, const EtaQuotient& f, int64_t level, int64_t trunc24)
{
    auto check = validate_on_gamma0(f, level);
    if (!check.valid())
        throw std::invalid_argument("basis element " + label + " = " + f.to_string() + " is not a function on Gamma_0(" +
                                    std::to_string(level) + "): " + check.reasons.front());
    BasisElement e;
    e.label = label;
    e.eta = f;
    e.at_zero = expand_at_zero(f, level, trunc24).value();
    e.orders = cusp_orders(f, level);
    return e;
}

Rational ceil_rational(const Rational& q)
{
    Integer out;
    mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Rational(out);
}

} // namespace

int64_t BasisElement::pole_order() const
{
    if (at_zero.is_zero()) throw std::invalid_argument("basis element " + label + " has no known terms at cusp 0");
    if (!at_zero.integral_exponents())
        throw MathError("basis element " + label + " has fractional exponents at cusp 0");
    return -at_zero.offset24() / 24;
}

ModuleBasis ModuleBasis::from_series(int64_t level, BasisElement x, std::vector<BasisElement> ys,
                                     std::optional<BasisElement> z)
{
    if (level < 0) throw std::invalid_argument("basis level must be non-negative (0 for unspecified)");
    ModuleBasis b;
    b.level_ = level;
    b.x_ = std::move(x);
    b.ys_.push_back(unit_element(level));
    for (auto& y : ys) b.ys_.push_back(std::move(y));
    b.z_ = std::move(z);
    b.validate();
    return b;
}

ModuleBasis ModuleBasis::from_eta(int64_t level, const EtaQuotient& x, const std::vector<EtaQuotient>& ys,
                                  const std::optional<EtaQuotient>& z, int64_t trunc24)
{
    if (level < 1) throw std::invalid_argument("basis level must be positive");
    std::vector<BasisElement> yel;
    for (size_t i = 0; i < ys.size(); ++i) yel.push_back(eta_element("y" + std::to_string(i + 1), ys[i], level, trunc24));
    std::optional<BasisElement> zel;
    if (z) zel = eta_element("z", *z, level, trunc24);
    return from_series(level, eta_element("x", x, level, trunc24), std::move(yel), std::move(zel));
}

bool ModuleBasis::has_eta_descriptions() const
{
    if (!x_.eta) return false;
    for (const auto& y : ys_)
        if (!y.eta) return false;
    return !z_ || z_->eta.has_value();
}

std::vector<int64_t> ModuleBasis::y_poles() const
{
    std::vector<int64_t> out;
    for (const auto& y : ys_) out.push_back(y.pole_order());
    return out;
}

void ModuleBasis::validate() const
{
    const int64_t d = x_pole();
    if (d < 1) throw std::invalid_argument("x must have a pole at cusp 0, found order " + std::to_string(-d));
    auto poles = y_poles();
    if (static_cast<int64_t>(poles.size()) != d)
        throw std::invalid_argument("basis is not order-complete: " + std::to_string(poles.size()) +
                                    " elements y_k for pole order " + std::to_string(d) + " of x");
    std::vector<bool> seen(static_cast<size_t>(d), false);
    for (size_t k = 0; k < poles.size(); ++k) {
        if (k > 0 && poles[k] < 1)
            throw std::invalid_argument("y_" + std::to_string(k) + " has no pole at cusp 0");
        auto r = static_cast<size_t>(poles[k] % d);
        if (seen[r])
            throw std::invalid_argument("basis is not order-complete: two y_k share pole order residue " +
                                        std::to_string(r) + " mod " + std::to_string(d));
        seen[r] = true;
    }
    if (z_) {
        if (z_->pole_order() < 1) throw std::invalid_argument("localizer z must have a pole at cusp 0");
        if (z_->orders) {
            for (const auto& [c, ord] : z_->orders->entries)
                if (c != 1 && ord < 0)
                    throw std::invalid_argument("localizer z has a pole at the cusp class 1/" + std::to_string(c));
        }
    }
}

std::vector<int64_t> ModuleBasis::gap_set() const
{
    std::vector<int64_t> out;
    const int64_t d = x_pole();
    for (int64_t pole : y_poles())
        for (int64_t g = pole - d; g > 0; g -= d) out.push_back(g);
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<MonomialIndex> ModuleBasis::monomial_for_pole(int64_t pole) const
{
    if (pole < 0) return std::nullopt;
    const int64_t d = x_pole();
    auto poles = y_poles();
    for (size_t k = 0; k < poles.size(); ++k) {
        if (pole % d == poles[k] % d) {
            if (pole < poles[k]) return std::nullopt;
            return MonomialIndex{static_cast<int64_t>(k), (pole - poles[k]) / d};
        }
    }
    throw InconsistencyError("order-complete basis misses residue " + std::to_string(pole % d));
}

int64_t ModuleBasis::monomial_pole(const MonomialIndex& km) const
{
    if (km.first < 0 || km.first >= static_cast<int64_t>(ys_.size()) || km.second < 0)
        throw std::out_of_range("no monomial " + km_string(km) + " in this basis");
    return ys_[static_cast<size_t>(km.first)].pole_order() + km.second * x_pole();
}

std::optional<EtaQuotient> ModuleBasis::monomial_eta(const MonomialIndex& km) const
{
    monomial_pole(km);
    const auto& y = ys_[static_cast<size_t>(km.first)];
    if (!y.eta || !x_.eta) return std::nullopt;
    return *y.eta * x_.eta->pow(km.second);
}

QSeries ModuleBasis::monomial_at_zero(const MonomialIndex& km, int64_t trunc24) const
{
    const int64_t lead = -24 * monomial_pole(km);
    if (trunc24 <= lead) return QSeries::zero(trunc24);
    if (level_ >= 1) {
        if (auto eta = monomial_eta(km)) return expand_at_zero(*eta, level_, trunc24).value();
    }
    const auto& y = ys_[static_cast<size_t>(km.first)];
    QSeries out = y.at_zero * pow(x_.at_zero, km.second);
    return out.truncated(trunc24);
}

QSeries ModuleBasis::localizer_power_at_zero(int64_t n, int64_t trunc24) const
{
    if (!z_) throw std::invalid_argument("basis has no localizer");
    if (n < 0) throw std::invalid_argument("localizer power must be non-negative");
    if (n == 0) return QSeries::one().truncated(trunc24);
    const int64_t lead = -24 * n * z_->pole_order();
    if (trunc24 <= lead) return QSeries::zero(trunc24);
    if (level_ >= 1 && z_->eta) return expand_at_zero(z_->eta->pow(n), level_, trunc24).value();
    return pow(z_->at_zero, n).truncated(trunc24);
}

QSeries reexpand(const Representation& rep, const ModuleBasis& basis, int64_t trunc24)
{
    const int64_t n = rep.localizer_exponent;
    if (n == 0) {
        QSeries sum = QSeries::zero();
        for (const auto& [km, c] : rep.coeffs) sum += basis.monomial_at_zero(km, trunc24) * c;
        return sum.truncated(trunc24);
    }
    if (!basis.z()) throw std::invalid_argument("representation is localized but the basis has no localizer");
    const int64_t zpole24 = 24 * n * basis.z()->pole_order();
    int64_t max_pole = 0;
    for (const auto& [km, c] : rep.coeffs) max_pole = std::max(max_pole, basis.monomial_pole(km));
    const int64_t cap = trunc_add(trunc24, 24 * max_pole);
    QSeries sum = QSeries::zero();
    for (const auto& [km, c] : rep.coeffs) sum += basis.monomial_at_zero(km, trunc_add(trunc24, -zpole24)) * c;
    if (sum.is_zero()) return QSeries::zero(trunc24);
    QSeries zn = basis.localizer_power_at_zero(n, trunc_add(cap, -2 * zpole24));
    return (sum * invert(zn, cap)).truncated(trunc24);
}

Representation reduce_module(const QSeries& f, const ModuleBasis& basis, int64_t guard)
{
    if (!f.integral_exponents()) throw MathError("reduction needs integral exponents at cusp 0");
    if (guard < 0) throw std::invalid_argument("guard must be non-negative");
    if (f.trunc24() < 24 * guard)
        throw TruncationError("input known only below q^" + std::to_string(f.trunc24() / 24) + "; reduction needs " +
                              std::to_string(guard) + " terms past the constant");

    Representation rep;
    QSeries cur = f;
    while (!cur.is_zero() && cur.offset24() < 0) {
        const int64_t pole = -cur.offset24() / 24;
        auto km = basis.monomial_for_pole(pole);
        if (!km)
            throw GapError(pole, "Weierstrass gap hit: no function in the basis module has pole order " +
                                     std::to_string(pole) + " at cusp 0");
        QSeries mono = basis.monomial_at_zero(*km, cur.trunc24());
        if (mono.is_zero() || mono.offset24() != cur.offset24())
            throw InconsistencyError("monomial " + km_string(*km) + " does not have pole order " + std::to_string(pole));
        Rational c = cur.leading_coefficient() / mono.leading_coefficient();
        const int64_t before = cur.offset24();
        cur -= mono * c;
        if (!cur.is_zero() && cur.offset24() <= before)
            throw InconsistencyError("elimination did not remove the leading pole " + std::to_string(pole));
        rep.coeffs[*km] += c;
    }
    if (!cur.is_zero() && cur.offset24() == 0) {
        Rational c = cur.leading_coefficient();
        rep.coeffs[{0, 0}] += c;
        cur -= QSeries::constant(c);
    }
    if (cur.trunc24() < 24 * guard)
        throw TruncationError("basis expansions ran out at q^" + std::to_string(cur.trunc24() / 24) + "; need " +
                              std::to_string(guard) + " terms past the constant");
    if (!cur.is_zero())
        throw MathError("f not in the basis module at this truncation: residual starts at q^" +
                        std::to_string(cur.offset24() / 24));
    for (auto it = rep.coeffs.begin(); it != rep.coeffs.end();) it = it->second == 0 ? rep.coeffs.erase(it) : ++it;
    rep.residual = cur;

    if (!reexpand(rep, basis, f.trunc24()).agrees_with(f))
        throw InconsistencyError("reduction round trip does not reproduce the input");
    return rep;
}

Representation reduce_genus0(const QSeries& f, const BasisElement& x, int64_t guard)
{
    if (x.pole_order() != 1)
        throw std::invalid_argument("genus-0 reduction needs x with a simple pole at cusp 0, found pole order " +
                                    std::to_string(x.pole_order()));
    return reduce_module(f, ModuleBasis::from_series(0, x, {}), guard);
}

int64_t localizer_exponent(const CuspOrderVector& f_orders, const CuspOrderVector& z_orders)
{
    Rational n = 0;
    for (const auto& [c, ord] : f_orders.entries) {
        if (c == 1 || ord >= 0) continue;
        auto it = z_orders.entries.find(c);
        if (it == z_orders.entries.end() || it->second <= 0)
            throw MathError("invalid localizer: z has no zero at the cusp class 1/" + std::to_string(c) +
                            " where f has order " + ord.get_str());
        n = std::max(n, ceil_rational(Rational(-ord / it->second)));
    }
    return n.get_num().get_si();
}

Representation localize_reduce(const QSeries& f, const ModuleBasis& basis, const CuspOrderVector& f_orders,
                               int64_t guard)
{
    if (!basis.z()) throw std::invalid_argument("localized reduction needs a basis with a localizer");
    if (!basis.z()->orders) throw std::invalid_argument("localizer has no cusp order vector");
    const int64_t n = localizer_exponent(f_orders, *basis.z()->orders);
    if (f.is_zero()) return reduce_module(f, basis, guard);

    QSeries input = f;
    const int64_t zlead = -24 * n * basis.z()->pole_order();
    if (input.is_exact()) input = input.truncated(24 * 2 * guard - zlead);
    QSeries zn = basis.localizer_power_at_zero(n, input.trunc24() - input.offset24() + zlead);
    Representation rep = reduce_module(zn * input, basis, guard);
    rep.localizer_exponent = n;
    if (!reexpand(rep, basis, input.trunc24() + zlead).agrees_with(input))
        throw InconsistencyError("localized representation does not reproduce the input");
    return rep;
}

namespace {

// Solves A s = b exactly. nullopt when inconsistent or underdetermined.
std::optional<std::vector<Rational>> solve_exact(std::vector<std::vector<Rational>> a, std::vector<Rational> b)
{
    const size_t rows = a.size();
    const size_t cols = rows ? a[0].size() : 0;
    size_t r = 0;
    std::vector<size_t> pivot_col;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) return std::nullopt;
        std::swap(a[p], a[r]);
        std::swap(b[p], b[r]);
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rational factor = a[i][c] / a[r][c];
            for (size_t j = c; j < cols; ++j)
                if (a[r][j] != 0) a[i][j] -= factor * a[r][j];
            b[i] -= factor * b[r];
        }
        pivot_col.push_back(c);
        ++r;
    }
    if (r < cols) return std::nullopt;
    for (size_t i = r; i < rows; ++i)
        if (b[i] != 0) return std::nullopt;
    std::vector<Rational> s(cols);
    for (size_t i = 0; i < r; ++i) s[pivot_col[i]] = b[i] / a[i][pivot_col[i]];
    return s;
}

} // namespace

std::optional<Representation> solve_at_infinity(const QSeries& f, const ModuleBasis& basis, int64_t max_n,
                                                int64_t guard)
{
    if (!basis.has_eta_descriptions() || basis.level() < 1)
        throw std::invalid_argument("solving at infinity needs eta descriptions of every basis element");
    if (!f.integral_exponents()) throw MathError("solving at infinity needs integral exponents");
    if (f.is_exact()) throw TruncationError("solving at infinity needs a truncated input");

    for (int64_t n = 0; n <= max_n; ++n) {
        if (n > 0 && !basis.z()) break;
        EtaQuotient zn = n == 0 ? EtaQuotient(basis.level(), {}) : basis.z()->eta->pow(n);
        const int64_t zlead = zn.leading_exp24();
        QSeries g = f.is_zero() ? QSeries::zero(f.trunc24() + zlead)
                                : f * expand_at_infinity(zn, zlead + f.trunc24() - f.offset24());
        const int64_t top = g.trunc24();

        // Take monomials in order of pole order while the window stays
        // overdetermined by at least `guard` equations.
        std::vector<MonomialIndex> unknowns;
        std::vector<EtaQuotient> etas;
        int64_t low = g.is_zero() ? top : g.offset24();
        const int64_t pole_cap = std::max<int64_t>(4, 4 * (top - low) / 24 + 4);
        for (int64_t pole = 0; pole <= pole_cap; ++pole) {
            auto km = basis.monomial_for_pole(pole);
            if (!km) continue;
            EtaQuotient eta = *basis.monomial_eta(*km);
            const int64_t lead = eta.leading_exp24();
            if (lead >= top - 24 * guard) break;
            const int64_t new_low = std::min(low, lead);
            const int64_t rows = (top - new_low) / 24;
            if (static_cast<int64_t>(unknowns.size()) + 1 + guard > rows) break;
            low = new_low;
            unknowns.push_back(*km);
            etas.push_back(eta);
        }
        if (unknowns.empty()) continue;

        const auto rows = static_cast<size_t>((top - low) / 24);
        std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(unknowns.size()));
        std::vector<Rational> b(rows);
        for (size_t j = 0; j < unknowns.size(); ++j) {
            QSeries col = expand_at_infinity(etas[j], top);
            for (const auto& t : col.terms()) a[static_cast<size_t>((t.exp24 - low) / 24)][j] = t.coeff;
        }
        for (const auto& t : g.terms()) b[static_cast<size_t>((t.exp24 - low) / 24)] = t.coeff;

        auto s = solve_exact(std::move(a), std::move(b));
        if (!s) continue;
        Representation rep;
        rep.localizer_exponent = n;
        QSeries check = g;
        for (size_t j = 0; j < unknowns.size(); ++j) {
            if ((*s)[j] == 0) continue;
            rep.coeffs[unknowns[j]] = (*s)[j];
            check -= expand_at_infinity(etas[j], top) * (*s)[j];
        }
        if (!check.is_zero()) throw InconsistencyError("exact solve left a nonzero residual at infinity");
        rep.residual = check;
        return rep;
    }
    return std::nullopt;
}

CuspOrderVector order_bounds(const Representation& rep, const ModuleBasis& basis)
{
    if (!basis.x().orders) throw std::invalid_argument("basis element x has no cusp order vector");
    CuspOrderVector out;
    out.level = basis.level();
    const auto& xo = *basis.x().orders;
    const CuspOrderVector* zo = nullptr;
    if (rep.localizer_exponent > 0) {
        if (!basis.z() || !basis.z()->orders) throw std::invalid_argument("localizer has no cusp order vector");
        zo = &*basis.z()->orders;
    }
    for (const auto& [c, xc] : xo.entries) {
        std::optional<Rational> best;
        for (const auto& [km, s] : rep.coeffs) {
            const auto& y = basis.ys()[static_cast<size_t>(km.first)];
            if (!y.orders) throw std::invalid_argument("basis element " + y.label + " has no cusp order vector");
            Rational ord = y.orders->at(c) + xc * km.second;
            if (!best || ord < *best) best = ord;
        }
        Rational value = best.value_or(Rational(0));
        if (zo) value -= zo->at(c) * rep.localizer_exponent;
        out.entries.emplace(c, value);
    }
    return out;
}

std::optional<int64_t> ValuationTable::min() const
{
    std::optional<int64_t> out;
    for (const auto& [km, v] : entries)
        if (v && (!out || *v < *out)) out = v;
    return out;
}

ValuationTable valuation_table(const Representation& rep, int64_t ell)
{
    if (!is_prime(ell)) throw std::invalid_argument("valuation prime must be prime, got " + std::to_string(ell));
    ValuationTable tab;
    tab.prime = ell;
    for (const auto& [km, s] : rep.coeffs) {
        if (s.get_den() != 1)
            throw MathError("non-integral coefficient " + s.get_str() + " at (k, m) = " + km_string(km));
        if (s == 0)
            tab.entries[km] = std::nullopt;
        else
            tab.entries[km] = valuation(s.get_num(), ell);
    }
    return tab;
}

GainReport valuation_gain(const ValuationTable& before, const ValuationTable& after)
{
    if (before.prime != after.prime) throw std::invalid_argument("valuation tables use different primes");
    GainReport out;
    out.prime = before.prime;
    out.min_before = before.min();
    out.min_after = after.min();
    if (!out.min_after) {
        out.passed = true;
    } else if (out.min_before) {
        out.gain = *out.min_after - *out.min_before;
        out.passed = *out.gain >= 1;
        for (const auto& [km, v] : after.entries)
            if (v && *v < *out.min_before + 1) out.flagged.push_back(km);
    }
    return out;
}

} // namespace cusp
