#include "cusp_ledger/arith.hpp"

#include <cstdlib>
#include <limits>
#include <numeric>

namespace cusp {

int64_t floor_div(int64_t a, int64_t b)
{
    int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

int64_t ceil_div(int64_t a, int64_t b) { return -floor_div(-a, b); }

int64_t positive_mod(int64_t a, int64_t m)
{
    int64_t r = a % m;
    return r < 0 ? r + m : r;
}

int64_t gcd64(int64_t a, int64_t b) { return std::gcd(a, b); }

int64_t lcm64(int64_t a, int64_t b) { return std::lcm(a, b); }

std::optional<int64_t> mod_inverse(int64_t a, int64_t m)
{
    if (m == 1) return 0;
    int64_t old_r = positive_mod(a, m), r = m;
    int64_t old_s = 1, s = 0;
    while (r != 0) {
        int64_t q = old_r / r;
        std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
        std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
    }
    if (old_r != 1) return std::nullopt;
    return positive_mod(old_s, m);
}

int64_t ipow(int64_t base, int64_t exp)
{
    if (exp < 0) throw std::invalid_argument("ipow: negative exponent");
    int64_t result = 1;
    for (int64_t i = 0; i < exp; ++i) {
        if (__builtin_mul_overflow(result, base, &result))
            throw std::overflow_error("ipow: " + std::to_string(base) + "^" + std::to_string(exp) +
                                      " overflows 64 bits");
    }
    return result;
}

bool is_prime(int64_t n)
{
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (int64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

std::vector<std::pair<int64_t, int64_t>> factorize(int64_t n)
{
    if (n < 1) throw std::invalid_argument("factorize: n must be positive");
    std::vector<std::pair<int64_t, int64_t>> out;
    for (int64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        int64_t e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

std::vector<int64_t> divisors(int64_t n)
{
    if (n < 1) throw std::invalid_argument("divisors: n must be positive");
    std::vector<int64_t> small, large;
    for (int64_t d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        small.push_back(d);
        if (d != n / d) large.push_back(n / d);
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

int64_t totient(int64_t n)
{
    int64_t result = n;
    for (auto [p, e] : factorize(n)) result = result / p * (p - 1);
    return result;
}

int kronecker(int64_t a, int64_t p)
{
    if (p == 2) {
        if (a % 2 == 0) return 0;
        int64_t r = positive_mod(a, 8);
        return (r == 1 || r == 7) ? 1 : -1;
    }
    int64_t r = positive_mod(a, p);
    if (r == 0) return 0;
    // Euler's criterion.
    Integer base = r, result;
    Integer mod = p;
    mpz_powm_ui(result.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>((p - 1) / 2),
                mod.get_mpz_t());
    return result == 1 ? 1 : -1;
}

int64_t valuation(const Integer& n, int64_t ell)
{
    if (n == 0) throw std::invalid_argument("valuation of zero");
    Integer m = abs(n);
    Integer l = ell;
    return static_cast<int64_t>(mpz_remove(m.get_mpz_t(), m.get_mpz_t(), l.get_mpz_t()));
}

std::optional<Rational> rational_sqrt(const Rational& q)
{
    if (q < 0) return std::nullopt;
    const Integer& num = q.get_num();
    const Integer& den = q.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
        return std::nullopt;
    Rational root(sqrt(num), sqrt(den));
    root.canonicalize();
    return root;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(const std::string& text)
{
    Rational q;
    if (text.empty() || q.set_str(text, 10) != 0)
        throw std::invalid_argument("not a rational number: '" + text + "'");
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: '" + text + "'");
    q.canonicalize();
    return q;
}

} // namespace cusp
