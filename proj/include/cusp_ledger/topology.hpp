#pragma once

#include <cstdint>
#include <vector>

namespace cusp {

// Cusps of X_0(N) with denominator c. c = N is the class of infinity,
// c = 1 the class of 0.
struct CuspClass {
    int64_t denominator = 0;
    int64_t count = 0; // phi(gcd(c, N/c))
    int64_t width = 0; // N / gcd(c^2, N)

    bool operator==(const CuspClass&) const = default;
};

struct EllipticCounts {
    int64_t nu2 = 0;
    int64_t nu3 = 0;

    bool operator==(const EllipticCounts&) const = default;
};

struct CurveProfile {
    int64_t level = 0;
    int64_t index = 0; // [SL_2(Z) : Gamma_0(N)]
    std::vector<CuspClass> cusp_classes;
    int64_t cusp_count = 0;
    int64_t nu2 = 0;
    int64_t nu3 = 0;
    int64_t genus = 0;
};

// sum over d | N of phi(gcd(d, N/d)).
int64_t cusp_count(int64_t level);

std::vector<CuspClass> enumerate_cusps(int64_t level);

// N prod_{p | N} (1 + 1/p).
int64_t gamma0_index(int64_t level);

EllipticCounts elliptic_counts(int64_t level);

// Throws InconsistencyError if the genus formula does not give a
// non-negative integer.
CurveProfile curve_profile(int64_t level);

// Width and count of the class with the given denominator.
CuspClass cusp_class(int64_t level, int64_t denominator);

} // namespace cusp
