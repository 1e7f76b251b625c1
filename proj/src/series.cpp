#include "cusp_ledger/series.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace cusp {

namespace {

bool all_integral(const std::vector<Term>& terms)
{
    return std::all_of(terms.begin(), terms.end(),
                       [](const Term& t) { return t.coeff.get_den() == 1; });
}

// gcd of the exponent gaps; 0 for a monomial.
int64_t lattice_step(const std::vector<Term>& terms)
{
    int64_t g = 0;
    for (const auto& t : terms) g = std::gcd(g, t.exp24 - terms.front().exp24);
    return g;
}

std::vector<Term> collect(std::vector<Rational>& acc, int64_t base, int64_t step)
{
    std::vector<Term> out;
    for (size_t i = 0; i < acc.size(); ++i)
        if (sgn(acc[i]) != 0) out.push_back({base + static_cast<int64_t>(i) * step, std::move(acc[i])});
    return out;
}

} // namespace

int64_t trunc_add(int64_t trunc24, int64_t delta24)
{
    if (trunc24 == kExact || delta24 == kExact) return kExact;
    return trunc24 + delta24;
}

QSeries QSeries::zero(int64_t trunc24)
{
    QSeries s;
    s.trunc24_ = trunc24;
    return s;
}

QSeries QSeries::one() { return monomial(1, 0); }

QSeries QSeries::constant(const Rational& c, int64_t trunc24) { return monomial(c, 0, trunc24); }

QSeries QSeries::monomial(const Rational& c, int64_t exp24, int64_t trunc24)
{
    return from_terms({{exp24, c}}, trunc24);
}

QSeries QSeries::from_terms(std::vector<Term> terms, int64_t trunc24)
{
    std::sort(terms.begin(), terms.end(),
              [](const Term& x, const Term& y) { return x.exp24 < y.exp24; });
    QSeries s;
    s.trunc24_ = trunc24;
    for (auto& t : terms) {
        if (t.exp24 >= trunc24) break;
        if (!s.terms_.empty() && s.terms_.back().exp24 == t.exp24)
            s.terms_.back().coeff += t.coeff;
        else
            s.terms_.push_back(std::move(t));
        if (sgn(s.terms_.back().coeff) == 0) s.terms_.pop_back();
    }
    return s;
}

QSeries QSeries::from_coefficients(std::span<const Rational> coeffs, int64_t start24, int64_t step24,
                                   int64_t trunc24)
{
    std::vector<Term> terms;
    terms.reserve(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i)
        if (sgn(coeffs[i]) != 0) terms.push_back({start24 + static_cast<int64_t>(i) * step24, coeffs[i]});
    return from_terms(std::move(terms), trunc24);
}

const Rational& QSeries::leading_coefficient() const
{
    if (terms_.empty()) throw MathError("leading coefficient of the zero series");
    return terms_.front().coeff;
}

Rational QSeries::coefficient(int64_t exp24) const
{
    if (exp24 >= trunc24_)
        throw TruncationError("coefficient at exponent " + std::to_string(exp24) + "/24 is beyond the truncation " +
                              std::to_string(trunc24_) + "/24");
    auto it = std::lower_bound(terms_.begin(), terms_.end(), exp24,
                               [](const Term& t, int64_t e) { return t.exp24 < e; });
    if (it != terms_.end() && it->exp24 == exp24) return it->coeff;
    return 0;
}

bool QSeries::integral_exponents() const
{
    return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.exp24 % 24 == 0; });
}

bool QSeries::integral_coefficients() const { return all_integral(terms_); }

QSeries QSeries::truncated(int64_t trunc24) const
{
    if (trunc24 >= trunc24_) return *this;
    QSeries s;
    s.trunc24_ = trunc24;
    for (const auto& t : terms_) {
        if (t.exp24 >= trunc24) break;
        s.terms_.push_back(t);
    }
    return s;
}

QSeries QSeries::shifted(int64_t delta24) const
{
    QSeries s = *this;
    for (auto& t : s.terms_) t.exp24 += delta24;
    s.trunc24_ = trunc_add(trunc24_, delta24);
    return s;
}

bool QSeries::agrees_with(const QSeries& other) const
{
    int64_t bound = std::min(trunc24_, other.trunc24_);
    return truncated(bound).terms_ == other.truncated(bound).terms_;
}

QSeries QSeries::operator-() const
{
    QSeries s = *this;
    for (auto& t : s.terms_) t.coeff = -t.coeff;
    return s;
}

QSeries& QSeries::operator+=(const QSeries& rhs)
{
    int64_t trunc = std::min(trunc24_, rhs.trunc24_);
    std::vector<Term> merged;
    merged.reserve(terms_.size() + rhs.terms_.size());
    auto i = terms_.begin();
    auto j = rhs.terms_.begin();
    while (i != terms_.end() || j != rhs.terms_.end()) {
        Term t;
        if (j == rhs.terms_.end() || (i != terms_.end() && i->exp24 < j->exp24)) {
            t = std::move(*i++);
        } else if (i == terms_.end() || j->exp24 < i->exp24) {
            t = *j++;
        } else {
            t = std::move(*i++);
            t.coeff += (j++)->coeff;
        }
        if (t.exp24 >= trunc) break;
        if (sgn(t.coeff) != 0) merged.push_back(std::move(t));
    }
    terms_ = std::move(merged);
    trunc24_ = trunc;
    return *this;
}

QSeries& QSeries::operator-=(const QSeries& rhs) { return *this += -rhs; }

QSeries& QSeries::operator*=(const Rational& c)
{
    if (sgn(c) == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.coeff *= c;
    return *this;
}

QSeries operator*(const QSeries& a, const QSeries& b)
{
    int64_t trunc = std::min(trunc_add(a.trunc24_, b.offset24()), trunc_add(b.trunc24_, a.offset24()));
    if (a.is_zero() || b.is_zero()) return QSeries::zero(trunc);

    int64_t step = std::gcd(lattice_step(a.terms_), lattice_step(b.terms_));
    if (step == 0) step = 24;
    const int64_t base = a.terms_.front().exp24 + b.terms_.front().exp24;
    int64_t top = a.terms_.back().exp24 + b.terms_.back().exp24; // inclusive
    if (trunc != kExact) top = std::min(top, trunc - 1);
    if (top < base) return QSeries::zero(trunc);
    const size_t size = static_cast<size_t>((top - base) / step + 1);

    QSeries out;
    out.trunc24_ = trunc;
    if (all_integral(a.terms_) && all_integral(b.terms_)) {
        std::vector<Integer> acc(size);
        for (const auto& ta : a.terms_) {
            if (ta.exp24 + b.terms_.front().exp24 > top) break;
            const mpz_srcptr ca = ta.coeff.get_num_mpz_t();
            for (const auto& tb : b.terms_) {
                int64_t e = ta.exp24 + tb.exp24;
                if (e > top) break;
                mpz_addmul(acc[(e - base) / step].get_mpz_t(), ca, tb.coeff.get_num_mpz_t());
            }
        }
        for (size_t i = 0; i < size; ++i)
            if (sgn(acc[i]) != 0) out.terms_.push_back({base + static_cast<int64_t>(i) * step, Rational(acc[i])});
        return out;
    }

    std::vector<Rational> acc(size);
    Rational prod;
    for (const auto& ta : a.terms_) {
        if (ta.exp24 + b.terms_.front().exp24 > top) break;
        for (const auto& tb : b.terms_) {
            int64_t e = ta.exp24 + tb.exp24;
            if (e > top) break;
            mpq_mul(prod.get_mpq_t(), ta.coeff.get_mpq_t(), tb.coeff.get_mpq_t());
            acc[(e - base) / step] += prod;
        }
    }
    out.terms_ = collect(acc, base, step);
    return out;
}

QSeries pow(const QSeries& a, int64_t k, int64_t cap24)
{
    if (k == 0) return QSeries::one().truncated(cap24);
    if (a.is_zero()) {
        if (k < 0) throw MathError("non-invertible: negative power of the zero series");
        // (O(q^t))^k with t >= 0 is O(q^{k t}); for negative t nothing is known.
        int64_t t = a.trunc24();
        if (t == kExact) return QSeries::zero().truncated(cap24);
        if (t < 0) throw TruncationError("power of a zero series with negative truncation is undetermined");
        return QSeries::zero(std::min(t * k, cap24));
    }

    const auto& terms = a.terms();
    const int64_t v = a.offset24();
    const Rational& c = a.leading_coefficient();
    int64_t step = lattice_step(terms);

    // Exponent of the result's leading term.
    int64_t lead;
    if (__builtin_mul_overflow(k, v, &lead)) throw std::overflow_error("pow: exponent overflow");

    int64_t trunc;
    if (a.is_exact()) {
        trunc = kExact;
    } else {
        trunc = lead + (a.trunc24() - v);
    }
    trunc = std::min(trunc, cap24);

    Rational ck = 1;
    {
        Rational base = k > 0 ? c : Rational(1 / c);
        for (int64_t i = 0; i < (k > 0 ? k : -k); ++i) ck *= base;
    }

    if (step == 0) {
        // Monomial: exact for every k.
        return QSeries::monomial(ck, lead, trunc);
    }

    int64_t count; // number of lattice indices to compute
    if (trunc == kExact) {
        if (k < 0) throw TruncationError("inverse power of an exact multi-term series needs a truncation cap");
        count = k * ((terms.back().exp24 - v) / step) + 1;
    } else {
        if (trunc <= lead) return QSeries::zero(trunc);
        count = ceil_div(trunc - lead, step);
    }

    // Normalized coefficients A_i of 1 + sum A_i x^i, x = q^{step/24}.
    std::vector<std::pair<int64_t, Rational>> normalized;
    bool integral = true;
    for (size_t i = 1; i < terms.size(); ++i) {
        int64_t idx = (terms[i].exp24 - v) / step;
        if (idx >= count) break;
        Rational ai = terms[i].coeff / c;
        if (ai.get_den() != 1) integral = false;
        normalized.emplace_back(idx, std::move(ai));
    }

    // Power recurrence: n B_n = sum_{i=1}^{n} ((k+1) i - n) A_i B_{n-i}.
    std::vector<Rational> b(static_cast<size_t>(count));
    b[0] = 1;
    if (integral) {
        std::vector<Integer> bz(static_cast<size_t>(count));
        bz[0] = 1;
        Integer acc, w;
        for (int64_t n = 1; n < count; ++n) {
            acc = 0;
            for (const auto& [i, ai] : normalized) {
                if (i > n) break;
                w = (k + 1) * i - n;
                w *= ai.get_num();
                mpz_addmul(acc.get_mpz_t(), w.get_mpz_t(), bz[n - i].get_mpz_t());
            }
            mpz_divexact_ui(bz[n].get_mpz_t(), acc.get_mpz_t(), static_cast<unsigned long>(n));
            b[n] = bz[n];
        }
    } else {
        Rational acc;
        for (int64_t n = 1; n < count; ++n) {
            acc = 0;
            for (const auto& [i, ai] : normalized) {
                if (i > n) break;
                acc += Rational((k + 1) * i - n) * ai * b[n - i];
            }
            b[n] = acc / n;
        }
    }
    for (auto& x : b) x *= ck;
    return QSeries::from_coefficients(b, lead, step, trunc);
}

QSeries invert(const QSeries& a, int64_t cap24)
{
    if (a.is_zero()) throw MathError("non-invertible: the zero series has no inverse");
    return pow(a, -1, cap24);
}

QSeries eta_expansion(int64_t delta, int64_t trunc24)
{
    if (delta < 1) throw std::invalid_argument("eta_expansion: delta must be positive");
    std::vector<Term> terms;
    // Pentagonal exponents k(3k-1)/2 for k = 0, 1, -1, 2, -2, ...
    for (int64_t k = 0;; ++k) {
        bool any = false;
        for (int64_t kk : {k, -k}) {
            if (k == 0 && kk == 0 && any) continue;
            int64_t e = delta + 24 * delta * (kk * (3 * kk - 1) / 2);
            if (e < trunc24) {
                terms.push_back({e, (kk % 2 == 0) ? 1 : -1});
                any = true;
            }
        }
        if (!any && k > 0) break;
    }
    return QSeries::from_terms(std::move(terms), trunc24);
}

QSeries u_ell(const QSeries& a, int64_t ell)
{
    if (ell < 2) throw std::invalid_argument("u_ell: ell must be at least 2");
    if (!a.integral_exponents())
        throw MathError("U_ell undefined on fractional-exponent series; absorb prefactor first");
    std::vector<Term> out;
    for (const auto& t : a.terms()) {
        int64_t n = t.exp24 / 24;
        if (n % ell == 0) out.push_back({24 * (n / ell), t.coeff});
    }
    int64_t trunc = kExact;
    if (!a.is_exact()) trunc = 24 * floor_div(ceil_div(a.trunc24(), 24), ell);
    return QSeries::from_terms(std::move(out), trunc);
}

int64_t slice_residue(int64_t lambda, int64_t target, int64_t modulus)
{
    auto inv = mod_inverse(lambda, modulus);
    if (!inv)
        throw std::invalid_argument("slice: gcd(Lambda, ell) != 1, residue class " + std::to_string(lambda) +
                                    "n = " + std::to_string(target) + " (mod " + std::to_string(modulus) +
                                    ") is empty or ill-defined");
    return positive_mod(static_cast<int64_t>((static_cast<__int128>(*inv) * positive_mod(target, modulus)) % modulus),
                        modulus);
}

QSeries slice(const QSeries& a, int64_t lambda, int64_t ell, int64_t depth, int64_t target)
{
    if (depth < 0) throw std::invalid_argument("slice: depth must be non-negative");
    const int64_t modulus = ipow(ell, depth);
    const int64_t r = slice_residue(lambda, target, modulus);
    if (!a.integral_exponents()) throw MathError("slice: series has fractional exponents; absorb prefactor first");
    std::vector<Term> out;
    for (const auto& t : a.terms()) {
        int64_t n = t.exp24 / 24;
        if (positive_mod(n - r, modulus) == 0) out.push_back({24 * floor_div(n, modulus), t.coeff});
    }
    int64_t trunc = kExact;
    if (!a.is_exact()) trunc = 24 * ceil_div(ceil_div(a.trunc24(), 24) - r, modulus);
    return QSeries::from_terms(std::move(out), trunc);
}

ValuationReport padic_valuation(const QSeries& a, int64_t ell)
{
    ValuationReport report;
    report.prime = ell;
    for (const auto& t : a.terms()) {
        if (t.coeff.get_den() != 1)
            throw MathError("padic_valuation: coefficient " + t.coeff.get_str() + " at exponent " +
                            std::to_string(t.exp24) + "/24 is not an integer");
        ++report.terms_checked;
        int64_t v = valuation(t.coeff.get_num(), ell);
        if (!report.min_valuation || v < *report.min_valuation) {
            report.min_valuation = v;
            report.witness_exp24 = t.exp24;
        }
    }
    return report;
}

} // namespace cusp
