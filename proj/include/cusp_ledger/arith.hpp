#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace cusp {

using Integer = mpz_class;
using Rational = mpq_class;

// A reduction hit a pole order that no basis monomial attains.
class GapError : public std::runtime_error {
public:
    GapError(int64_t pole_order, const std::string& what)
        : std::runtime_error(what), pole_order_(pole_order) {}
    int64_t pole_order() const { return pole_order_; }

private:
    int64_t pole_order_;
};

// A coefficient beyond the known range of a series was requested, or an
// operation needs more terms than were supplied.
class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An internal invariant failed. Always an implementation bug.
class InconsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Mathematical precondition on the input failed (non-invertible series,
// non-integral coefficient, invalid localizer, ...).
class MathError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

int64_t floor_div(int64_t a, int64_t b);
int64_t ceil_div(int64_t a, int64_t b);
int64_t positive_mod(int64_t a, int64_t m);
int64_t gcd64(int64_t a, int64_t b);
int64_t lcm64(int64_t a, int64_t b);

// Inverse of a modulo m, or nullopt when gcd(a, m) != 1.
std::optional<int64_t> mod_inverse(int64_t a, int64_t m);

// Checked integer power; throws std::overflow_error.
int64_t ipow(int64_t base, int64_t exp);

bool is_prime(int64_t n);

// Sorted list of (prime, exponent).
std::vector<std::pair<int64_t, int64_t>> factorize(int64_t n);
std::vector<int64_t> divisors(int64_t n);
int64_t totient(int64_t n);

// Kronecker symbol (a | p) for a prime p.
int kronecker(int64_t a, int64_t p);

// ell-adic valuation of a nonzero integer.
int64_t valuation(const Integer& n, int64_t ell);

// Exact square root of a rational when it is the square of a rational.
std::optional<Rational> rational_sqrt(const Rational& q);

std::string to_string(const Rational& q);
Rational parse_rational(const std::string& text);

} // namespace cusp
