#include "cusp_ledger/family.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

#include "cusp_ledger/topology.hpp"

namespace cusp {

void FamilySpec::validate() const
{
    const std::string who = "family '" + name + "': ";
    if (name.empty()) throw std::invalid_argument("family without a name");
    if (!is_prime(ell)) throw std::invalid_argument(who + "ell = " + std::to_string(ell) + " is not prime");
    if (lambda < 1) throw std::invalid_argument(who + "Lambda must be positive");
    if (gcd64(lambda, ell) != 1)
        throw std::invalid_argument(who + "gcd(Lambda, ell) = gcd(" + std::to_string(lambda) + ", " +
                                    std::to_string(ell) + ") != 1");
    if (level < 1) throw std::invalid_argument(who + "level must be positive");
    if (level % ell != 0)
        throw std::invalid_argument(who + "ell = " + std::to_string(ell) + " does not divide the level N = " +
                                    std::to_string(level));
    if (schedule.empty()) throw std::invalid_argument(who + "empty beta schedule");
    for (const auto& [alpha, e] : schedule) {
        if (alpha < 1) throw std::invalid_argument(who + "schedule depth alpha must be at least 1");
        if (e.modulus_exponent < 1 || e.divisibility_exponent < 0)
            throw std::invalid_argument(who + "bad schedule entry at alpha = " + std::to_string(alpha));
    }
    for (const auto* table : {&prefactors, &multipliers})
        for (const auto& [alpha, f] : *table)
            if (alpha < 1) throw std::invalid_argument(who + "prefactor/multiplier keyed by alpha < 1");
}

const ScheduleEntry& FamilySpec::at(int64_t alpha) const
{
    auto it = schedule.find(alpha);
    if (it == schedule.end())
        throw std::invalid_argument("family '" + name + "' has no schedule entry for alpha = " + std::to_string(alpha));
    return it->second;
}

std::string to_string(DifficultyClass c)
{
    switch (c) {
    case DifficultyClass::Classical: return "Classical families";
    case DifficultyClass::Localization: return "Localization";
    case DifficultyClass::NoSystematicMethods: return "No systematic methods";
    case DifficultyClass::UnclassifiedSporadic: return "Unclassified (sporadic)";
    }
    return "?";
}

ClassificationReport classify(int64_t level, std::optional<int64_t> ell)
{
    auto prof = curve_profile(level);
    ClassificationReport rep;
    rep.level = level;
    rep.prime = ell;
    rep.cusp_count = prof.cusp_count;
    rep.genus = prof.genus;
    rep.tedium = prof.genus;
    if (prof.cusp_count == 2)
        rep.difficulty = DifficultyClass::Classical;
    else if (prof.cusp_count == 4)
        rep.difficulty = DifficultyClass::Localization;
    else if (prof.cusp_count >= 6)
        rep.difficulty = DifficultyClass::NoSystematicMethods;
    else
        rep.difficulty = DifficultyClass::UnclassifiedSporadic;

    if (prof.cusp_count % 2 == 1) rep.sporadic_flags.push_back("odd cusp count");
    if (level == 4 || level == 8) rep.sporadic_flags.push_back("level 4 or 8");
    if (ell) {
        if (!is_prime(*ell)) throw std::invalid_argument("ell = " + std::to_string(*ell) + " is not prime");
        if (level % *ell != 0)
            throw std::invalid_argument("ell = " + std::to_string(*ell) + " does not divide the level N = " +
                                        std::to_string(level));
        if (*ell == 2) {
            rep.sporadic_flags.push_back("ell = 2");
            rep.difficulty = DifficultyClass::UnclassifiedSporadic;
        }
    }
    return rep;
}

QSeries family_coefficients(const FamilySpec& spec, int64_t terms)
{
    if (terms < 1) throw TruncationError("need at least one coefficient");
    const int64_t s0 = spec.generator.leading_exp24();
    return expand_at_infinity(spec.generator, s0 + 24 * terms).shifted(-s0);
}

int64_t family_residue(const FamilySpec& spec, int64_t alpha)
{
    return slice_residue(spec.lambda, spec.target_residue, ipow(spec.ell, spec.at(alpha).modulus_exponent));
}

QSeries build_L_direct(const FamilySpec& spec, int64_t alpha, int64_t trunc)
{
    spec.validate();
    const auto& entry = spec.at(alpha);
    const int64_t modulus = ipow(spec.ell, entry.modulus_exponent);
    const int64_t r = family_residue(spec, alpha);

    auto pre = spec.prefactors.find(alpha);
    if (pre == spec.prefactors.end()) {
        if (trunc < 1) throw TruncationError("L_alpha truncation must be positive");
        QSeries a = family_coefficients(spec, modulus * trunc);
        return slice(a, spec.lambda, spec.ell, entry.modulus_exponent, spec.target_residue).truncated(24 * trunc);
    }

    const int64_t s0 = spec.generator.leading_exp24();
    const int64_t numerator = 24 * r + s0;
    if (numerator % modulus != 0)
        throw MathError("fractional-exponent mismatch: (24 r + s0) / ell^k = " + std::to_string(numerator) + "/" +
                        std::to_string(modulus) + " is not integral (check Lambda)");
    const int64_t shift24 = numerator / modulus;
    const EtaQuotient& phi = pre->second;
    const int64_t phi24 = phi.leading_exp24();
    if ((shift24 + phi24) % 24 != 0)
        throw MathError("fractional-exponent mismatch: prefactor " + phi.to_string() + " leaves L_" +
                        std::to_string(alpha) + " at exponent " + std::to_string(shift24 + phi24) + "/24");
    const int64_t start = (shift24 + phi24) / 24;
    const int64_t terms = trunc - start;
    if (terms < 1)
        throw TruncationError("L_" + std::to_string(alpha) + " starts at q^" + std::to_string(start) +
                              "; truncation q^" + std::to_string(trunc) + " holds no term");

    QSeries a = family_coefficients(spec, modulus * terms);
    QSeries sliced = slice(a, spec.lambda, spec.ell, entry.modulus_exponent, spec.target_residue);
    QSeries out = sliced.shifted(shift24) * expand_at_infinity(phi, phi24 + 24 * terms);
    if (!out.integral_exponents()) throw InconsistencyError("L_alpha has fractional exponents after the shift");
    return out.truncated(24 * trunc);
}

QSeries build_L_recursive(const FamilySpec& spec, int64_t alpha, int64_t trunc)
{
    if (alpha < 1) throw std::invalid_argument("alpha must be at least 1");
    if (alpha == 1) return build_L_direct(spec, 1, trunc);
    for (int64_t j = 1; j < alpha; ++j)
        if (!spec.multipliers.count(j))
            throw std::invalid_argument("family '" + spec.name + "' has no multiplier A_" + std::to_string(j) +
                                        "; only the direct construction is available");

    // need[j]: L_j must be known below q^need[j].
    std::vector<int64_t> need(static_cast<size_t>(alpha + 1));
    need[static_cast<size_t>(alpha)] = trunc;
    for (int64_t j = alpha - 1; j >= 1; --j) {
        const int64_t a24 = spec.multipliers.at(j).leading_exp24();
        need[static_cast<size_t>(j)] = spec.ell * need[static_cast<size_t>(j + 1)] - floor_div(a24, 24);
    }

    QSeries L = build_L_direct(spec, 1, need[1]);
    for (int64_t j = 1; j < alpha; ++j) {
        const EtaQuotient& mult = spec.multipliers.at(j);
        const int64_t a24 = mult.leading_exp24();
        QSeries product = L;
        if (!mult.is_trivial()) {
            const int64_t rel = L.is_zero() ? 24 : L.trunc24() - L.offset24();
            product = L * expand_at_infinity(mult, a24 + rel);
        }
        L = u_ell(product, spec.ell);
    }
    if (L.trunc24() < 24 * trunc) throw InconsistencyError("recursive construction lost truncation");
    return L.truncated(24 * trunc);
}

namespace {

struct PartialVerify {
    int64_t qualifying = 0;
    std::optional<int64_t> min_valuation;
    std::optional<int64_t> witness_n;
    std::optional<int64_t> counterexample_n;
};

PartialVerify scan_range(const QSeries& a, int64_t lambda, int64_t target, int64_t modulus, int64_t ell, int64_t beta,
                         int64_t lo, int64_t hi)
{
    PartialVerify out;
    // First qualifying n >= lo, then step by the modulus.
    const int64_t r = slice_residue(lambda, target, modulus);
    int64_t n = lo + positive_mod(r - lo, modulus);
    for (; n < hi; n += modulus) {
        ++out.qualifying;
        Rational c = a.coefficient(24 * n);
        if (c.get_den() != 1)
            throw MathError("coefficient a(" + std::to_string(n) + ") = " + c.get_str() + " is not an integer");
        if (c == 0) continue;
        int64_t v = valuation(c.get_num(), ell);
        if (!out.min_valuation || v < *out.min_valuation) {
            out.min_valuation = v;
            out.witness_n = n;
        }
        if (v < beta && !out.counterexample_n) out.counterexample_n = n;
    }
    return out;
}

} // namespace

VerificationReport verify_congruence(const FamilySpec& spec, int64_t alpha, int64_t n_max, const QSeries& a,
                                     const VerifyOptions& options)
{
    spec.validate();
    const auto& entry = spec.at(alpha);
    VerificationReport rep;
    rep.family = spec.name;
    rep.alpha = alpha;
    rep.modulus_exponent = entry.modulus_exponent;
    rep.beta = options.divisibility.value_or(entry.divisibility_exponent);
    rep.n_max = n_max;
    if (n_max < 0) {
        rep.passed = true;
        return rep;
    }
    if (a.trunc24() <= 24 * n_max)
        throw TruncationError("coefficients known only below n = " + std::to_string(ceil_div(a.trunc24(), 24)) +
                              ", verification needs n <= " + std::to_string(n_max));
    const int64_t modulus = ipow(spec.ell, entry.modulus_exponent);

    const int jobs = std::max(1, options.jobs);
    const int64_t total = n_max + 1;
    const int64_t chunk = ceil_div(total, jobs);
    std::vector<PartialVerify> parts(static_cast<size_t>(jobs));
    auto work = [&](int j) {
        const int64_t lo = j * chunk, hi = std::min(total, lo + chunk);
        if (lo < hi)
            parts[static_cast<size_t>(j)] =
                scan_range(a, spec.lambda, spec.target_residue, modulus, spec.ell, rep.beta, lo, hi);
    };
    if (jobs == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        for (int j = 0; j < jobs; ++j) threads.emplace_back(work, j);
        for (auto& t : threads) t.join();
    }
    // Chunks are in increasing n, so the first hit wins ties.
    for (const auto& p : parts) {
        rep.qualifying += p.qualifying;
        if (p.min_valuation && (!rep.min_valuation || *p.min_valuation < *rep.min_valuation)) {
            rep.min_valuation = p.min_valuation;
            rep.witness_n = p.witness_n;
        }
        if (p.counterexample_n && !rep.counterexample_n) rep.counterexample_n = p.counterexample_n;
    }
    if (rep.counterexample_n) rep.counterexample_value = a.coefficient(24 * *rep.counterexample_n).get_num();
    rep.passed = !rep.counterexample_n;
    return rep;
}

VerificationReport verify_congruence(const FamilySpec& spec, int64_t alpha, int64_t n_max,
                                     const VerifyOptions& options)
{
    return verify_congruence(spec, alpha, n_max, family_coefficients(spec, std::max<int64_t>(n_max + 1, 1)),
                             options);
}

LocalizedL reduce_L(const FamilySpec& spec, int64_t alpha, const ModuleBasis& basis, int64_t trunc, int64_t max_n,
                    int64_t guard)
{
    if (basis.level() != spec.level)
        throw std::invalid_argument("basis level " + std::to_string(basis.level()) + " differs from the family level " +
                                    std::to_string(spec.level));
    LocalizedL out;
    out.at_infinity = build_L_direct(spec, alpha, trunc);
    auto sol = solve_at_infinity(out.at_infinity, basis, max_n, guard);
    if (!sol)
        throw TruncationError("no z^n L_" + std::to_string(alpha) + " with n <= " + std::to_string(max_n) +
                              " lies in the basis module at truncation q^" + std::to_string(trunc));
    out.infinity_solution = *sol;
    out.orders = order_bounds(*sol, basis);
    const int64_t zpole = basis.z() ? basis.z()->pole_order() : 0;
    out.at_zero = reexpand(*sol, basis, 24 * (guard + 1 + sol->localizer_exponent * zpole));
    if (basis.z())
        out.representation = localize_reduce(out.at_zero, basis, out.orders, guard);
    else
        out.representation = reduce_module(out.at_zero, basis, guard);
    return out;
}

} // namespace cusp
