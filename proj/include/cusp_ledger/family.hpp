#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cusp_ledger/eta_quotient.hpp"
#include "cusp_ledger/reduction.hpp"
#include "cusp_ledger/series.hpp"

namespace cusp {

// Depth alpha of a family: coefficients with Lambda n == target
// (mod ell^modulus_exponent) are divisible by ell^divisibility_exponent.
struct ScheduleEntry {
    int64_t modulus_exponent = 0;
    int64_t divisibility_exponent = 0;

    bool operator==(const ScheduleEntry&) const = default;
};

struct FamilySpec {
    std::string name;
    EtaQuotient generator; // F; a(n) is the coefficient of q^{n + s0/24}
    int64_t ell = 0;
    int64_t lambda = 1;
    int64_t target_residue = 1;
    std::map<int64_t, ScheduleEntry> schedule; // alpha -> entry
    int64_t level = 0;
    std::map<int64_t, EtaQuotient> prefactors;  // alpha -> phi(alpha)
    std::map<int64_t, EtaQuotient> multipliers; // alpha -> A_alpha, L_{alpha+1} = U_ell(A_alpha L_alpha)
    std::string basis;                          // catalog basis name, may be empty
    std::string notes;

    // Throws std::invalid_argument naming the violated invariant.
    void validate() const;
    const ScheduleEntry& at(int64_t alpha) const;

    bool operator==(const FamilySpec&) const = default;
};

enum class DifficultyClass { Classical, Localization, NoSystematicMethods, UnclassifiedSporadic };

std::string to_string(DifficultyClass c);

struct ClassificationReport {
    int64_t level = 0;
    std::optional<int64_t> prime;
    int64_t cusp_count = 0;
    int64_t genus = 0;
    DifficultyClass difficulty = DifficultyClass::Classical;
    int64_t tedium = 0;
    std::vector<std::string> sporadic_flags;
};

ClassificationReport classify(int64_t level, std::optional<int64_t> ell = std::nullopt);

// Sum a(n) q^n over all n >= 0: the expansion of F with the q^{s0/24} shift
// removed. Known for n < terms.
QSeries family_coefficients(const FamilySpec& spec, int64_t terms);

// The modulus residue r with Lambda r == target (mod ell^modulus_exponent).
int64_t family_residue(const FamilySpec& spec, int64_t alpha);

// L_alpha known below q^{trunc}. Without a prefactor this is the plain slice
// sum a(ell^k m + r) q^m; with one it is phi(alpha) times the slice at the
// exponents (24 n + s0) / (24 ell^k), which must come out integral.
QSeries build_L_direct(const FamilySpec& spec, int64_t alpha, int64_t trunc);

// L_1 directly, then L_{j+1} = U_ell(A_j L_j). Each step divides the
// usable truncation by ell, so L_1 is built long enough to leave trunc.
QSeries build_L_recursive(const FamilySpec& spec, int64_t alpha, int64_t trunc);

struct VerificationReport {
    std::string family;
    int64_t alpha = 0;
    int64_t modulus_exponent = 0;
    int64_t beta = 0;
    int64_t n_max = 0;
    int64_t qualifying = 0;
    std::optional<int64_t> min_valuation; // nullopt: no qualifying nonzero a(n)
    std::optional<int64_t> witness_n;
    bool passed = false;
    std::optional<int64_t> counterexample_n;
    std::optional<Integer> counterexample_value;
};

struct VerifyOptions {
    std::optional<int64_t> divisibility; // overrides the schedule's beta
    int jobs = 1;
};

// Ground truth: checks ell^beta | a(n) on F's own coefficients.
VerificationReport verify_congruence(const FamilySpec& spec, int64_t alpha, int64_t n_max,
                                     const VerifyOptions& options = {});

// Same check on precomputed coefficients (from family_coefficients).
VerificationReport verify_congruence(const FamilySpec& spec, int64_t alpha, int64_t n_max,
                                     const QSeries& coefficients, const VerifyOptions& options = {});

// L_alpha carried over to cusp 0. Expansions of L_alpha at other cusps are
// not available, so z^n L_alpha is first written in the basis by an exact
// solve at infinity; that representation gives the cusp-0 expansion and lower
// bounds on the cusp orders, and the greedy localized reduction is then run
// on the cusp-0 expansion as an independent second pass.
struct LocalizedL {
    QSeries at_infinity;
    Representation infinity_solution;
    CuspOrderVector orders; // lower bounds
    QSeries at_zero;
    Representation representation;
};

LocalizedL reduce_L(const FamilySpec& spec, int64_t alpha, const ModuleBasis& basis, int64_t trunc,
                    int64_t max_n = 8, int64_t guard = kDefaultGuard);

} // namespace cusp
