#include "cusp_ledger/topology.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

#include "cusp_ledger/arith.hpp"

namespace cusp {

namespace {

void require_level(int64_t level)
{
    if (level < 1) throw std::invalid_argument("level must be a positive integer, got " + std::to_string(level));
}

// Units modulo m, counted directly.
int64_t count_units(int64_t m)
{
    int64_t n = 0;
    for (int64_t a = 0; a < m; ++a)
        if (std::gcd(a, m) == 1) ++n;
    return n;
}

} // namespace

int64_t cusp_count(int64_t level)
{
    require_level(level);
    int64_t total = 0;
    for (int64_t d : divisors(level)) total += totient(std::gcd(d, level / d));
    return total;
}

CuspClass cusp_class(int64_t level, int64_t c)
{
    require_level(level);
    if (c < 1 || level % c != 0)
        throw std::invalid_argument("cusp denominator " + std::to_string(c) + " does not divide " +
                                    std::to_string(level));
    CuspClass cls;
    cls.denominator = c;
    cls.count = count_units(std::gcd(c, level / c));
    cls.width = level / std::gcd(c * c, level);
    return cls;
}

std::vector<CuspClass> enumerate_cusps(int64_t level)
{
    require_level(level);
    std::vector<CuspClass> out;
    for (int64_t c : divisors(level)) out.push_back(cusp_class(level, c));
    return out;
}

int64_t gamma0_index(int64_t level)
{
    require_level(level);
    int64_t mu = level;
    for (auto [p, e] : factorize(level)) mu = mu / p * (p + 1);
    return mu;
}

EllipticCounts elliptic_counts(int64_t level)
{
    require_level(level);
    EllipticCounts out{1, 1};
    if (level % 4 == 0) out.nu2 = 0;
    if (level % 9 == 0) out.nu3 = 0;
    for (auto [p, e] : factorize(level)) {
        if (out.nu2 != 0) out.nu2 *= 1 + kronecker(-4, p);
        if (out.nu3 != 0) out.nu3 *= 1 + kronecker(-3, p);
    }
    return out;
}

CurveProfile curve_profile(int64_t level)
{
    require_level(level);
    CurveProfile prof;
    prof.level = level;
    prof.index = gamma0_index(level);
    prof.cusp_classes = enumerate_cusps(level);
    prof.cusp_count = cusp_count(level);
    auto ell = elliptic_counts(level);
    prof.nu2 = ell.nu2;
    prof.nu3 = ell.nu3;

    int64_t enumerated = 0, weighted = 0;
    for (const auto& cls : prof.cusp_classes) {
        enumerated += cls.count;
        weighted += cls.count * cls.width;
    }
    if (enumerated != prof.cusp_count || weighted != prof.index)
        throw InconsistencyError("cusp data for level " + std::to_string(level) + " does not match the index");

    // 12 g = 12 + mu - 3 nu2 - 4 nu3 - 6 eps.
    int64_t twelve_g = 12 + prof.index - 3 * prof.nu2 - 4 * prof.nu3 - 6 * prof.cusp_count;
    if (twelve_g < 0 || twelve_g % 12 != 0)
        throw InconsistencyError("genus formula gives " + std::to_string(twelve_g) + "/12 at level " +
                                 std::to_string(level));
    prof.genus = twelve_g / 12;
    return prof;
}

} // namespace cusp
