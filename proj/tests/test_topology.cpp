#include "doctest.h"

#include <set>

#include "cusp_ledger/topology.hpp"
#include "oracles.hpp"

using namespace cusp;

namespace {

// Genus of X_0(N) from standard tables.
const std::set<int64_t> kGenus0 = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 13, 16, 18, 25};
const std::set<int64_t> kGenus1 = {11, 14, 15, 17, 19, 20, 21, 24, 27, 32, 36, 49};
const std::set<int64_t> kGenus2 = {22, 23, 26, 28, 29, 31, 37, 50};

} // namespace

TEST_SUITE("topology")
{
    TEST_CASE("stated cusp counts and genera")
    {
        CHECK(cusp_count(1) == 1);
        CHECK(cusp_count(11) == 2);
        CHECK(cusp_count(14) == 4);
        CHECK(cusp_count(20) == 6);
        CHECK(curve_profile(11).genus == 1);
        CHECK(curve_profile(14).genus == 1);
        CHECK(curve_profile(20).genus == 1);
    }

    TEST_CASE("cusp classes of small levels")
    {
        auto c4 = enumerate_cusps(4);
        REQUIRE(c4.size() == 3);
        CHECK(c4[0] == CuspClass{1, 1, 4});
        CHECK(c4[1] == CuspClass{2, 1, 1});
        CHECK(c4[2] == CuspClass{4, 1, 1});
        CHECK(cusp_count(4) == 3);

        auto c5 = enumerate_cusps(5);
        REQUIRE(c5.size() == 2);
        CHECK(c5[0] == CuspClass{1, 1, 5});
        CHECK(c5[1] == CuspClass{5, 1, 1});

        CHECK(cusp_class(9, 3) == CuspClass{3, 2, 1});
        CHECK(cusp_class(20, 2) == CuspClass{2, 1, 5});
    }

    TEST_CASE("elliptic point counts")
    {
        CHECK(elliptic_counts(1) == EllipticCounts{1, 1});
        CHECK(elliptic_counts(2) == EllipticCounts{1, 0});
        CHECK(elliptic_counts(3) == EllipticCounts{0, 1});
        CHECK(elliptic_counts(4) == EllipticCounts{0, 0});
        CHECK(elliptic_counts(5) == EllipticCounts{2, 0});
        CHECK(elliptic_counts(7) == EllipticCounts{0, 2});
        CHECK(elliptic_counts(11) == EllipticCounts{0, 0});
        CHECK(elliptic_counts(13) == EllipticCounts{2, 2});
        CHECK(elliptic_counts(9) == EllipticCounts{0, 0});
    }

    TEST_CASE("index")
    {
        CHECK(gamma0_index(1) == 1);
        CHECK(gamma0_index(5) == 6);
        CHECK(gamma0_index(20) == 36);
    }

    TEST_CASE("invalid level is rejected")
    {
        CHECK_THROWS(cusp_count(0));
        CHECK_THROWS(curve_profile(-3));
    }
}

TEST_SUITE("topology properties")
{
    TEST_CASE("genus agrees with the standard table for N <= 50")
    {
        for (int64_t n = 1; n <= 50; ++n) {
            CAPTURE(n);
            auto g = curve_profile(n).genus;
            if (kGenus0.count(n))
                CHECK(g == 0);
            else if (kGenus1.count(n))
                CHECK(g == 1);
            else if (kGenus2.count(n))
                CHECK(g == 2);
            else
                CHECK(g >= 3);
        }
    }

    TEST_CASE("closed form, enumeration and multiplicative formula agree for N <= 1000")
    {
        for (int64_t n = 1; n <= 1000; ++n) {
            CAPTURE(n);
            auto classes = enumerate_cusps(n);
            int64_t total = 0, mu = 0;
            for (const auto& c : classes) {
                total += c.count;
                mu += c.count * c.width;
            }
            CHECK(total == cusp_count(n));
            CHECK(total == oracle::cusp_count_multiplicative(n));
            CHECK(mu == gamma0_index(n)); // widths sum to the index
        }
    }

    TEST_CASE("cusp count is even for N > 4 and equals 2 exactly at primes")
    {
        for (int64_t n = 5; n <= 10000; ++n) {
            auto c = cusp_count(n);
            if (c % 2 != 0) FAIL("odd cusp count at N = " << n);
            if ((c == 2) != oracle::is_prime_naive(n)) FAIL("cusp count 2 mismatch at N = " << n);
        }
        CHECK(cusp_count(4) == 3);
    }

    TEST_CASE("genus is a non-negative integer for N <= 2000")
    {
        for (int64_t n = 1; n <= 2000; ++n) CHECK_NOTHROW(curve_profile(n));
    }
}
