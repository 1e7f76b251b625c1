#pragma once

// Reference computations that share no code with the library.

#include <cstdint>
#include <numeric>
#include <vector>

#include <gmpxx.h>

namespace oracle {

// p(0..n_max) by the coin-change recurrence over part sizes.
inline std::vector<mpz_class> partitions(int n_max)
{
    std::vector<mpz_class> p(static_cast<size_t>(n_max + 1), 0);
    p[0] = 1;
    for (int part = 1; part <= n_max; ++part)
        for (int n = part; n <= n_max; ++n) p[static_cast<size_t>(n)] += p[static_cast<size_t>(n - part)];
    return p;
}

// Partitions into distinct parts, 0/1 knapsack over part sizes.
inline std::vector<mpz_class> distinct_partitions(int n_max)
{
    std::vector<mpz_class> p(static_cast<size_t>(n_max + 1), 0);
    p[0] = 1;
    for (int part = 1; part <= n_max; ++part)
        for (int n = n_max; n >= part; --n) p[static_cast<size_t>(n)] += p[static_cast<size_t>(n - part)];
    return p;
}

// Coefficients of prod_{k>=1} (1 - q^k) below q^{n_max+1}, multiplying one
// factor at a time.
inline std::vector<int64_t> euler_product(int n_max)
{
    std::vector<int64_t> c(static_cast<size_t>(n_max + 1), 0);
    c[0] = 1;
    for (int k = 1; k <= n_max; ++k)
        for (int n = n_max; n >= k; --n) c[static_cast<size_t>(n)] -= c[static_cast<size_t>(n - k)];
    return c;
}

// Coefficient of q^n in (1 - q)^{-k}: C(n + k - 1, n).
inline mpz_class negative_binomial(int64_t k, int64_t n)
{
    mpz_class out;
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n + k - 1), static_cast<unsigned long>(n));
    return out;
}

// Cusp count of X_0(N) from its multiplicative form: eps(p^a) = p^floor(a/2) + p^floor((a-1)/2).
inline int64_t cusp_count_multiplicative(int64_t n)
{
    int64_t out = 1;
    for (int64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        int64_t a = 0;
        while (n % p == 0) {
            n /= p;
            ++a;
        }
        int64_t lo = 1, hi = 1;
        for (int64_t i = 0; i < a / 2; ++i) lo *= p;
        for (int64_t i = 0; i < (a - 1) / 2; ++i) hi *= p;
        out *= lo + hi;
    }
    if (n > 1) out *= 2;
    return out;
}

inline bool is_prime_naive(int64_t n)
{
    if (n < 2) return false;
    for (int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline int64_t valuation(mpz_class v, int64_t ell)
{
    int64_t k = 0;
    while (v != 0 && v % ell == 0) {
        v /= ell;
        ++k;
    }
    return k;
}

} // namespace oracle
