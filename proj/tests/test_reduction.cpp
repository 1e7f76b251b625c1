#include "doctest.h"

#include <random>

#include "cusp_ledger/reduction.hpp"
#include "cusp_ledger/topology.hpp"

using namespace cusp;

namespace {

const EtaQuotient kX5(5, {{1, -6}, {5, 6}});
const EtaQuotient kX10(10, {{1, -3}, {2, 1}, {5, -1}, {10, 3}});
const EtaQuotient kZ10(10, {{1, -12}, {2, 8}, {5, 4}});
const EtaQuotient kX14(14, {{1, -7}, {2, 7}, {7, 1}, {14, -1}});
const EtaQuotient kY14(14, {{1, -7}, {2, 3}, {7, 1}, {14, 3}});
const EtaQuotient kX20(10, {{1, -3}, {2, 1}, {5, -1}, {10, 3}});
const EtaQuotient kY20(20, {{1, -5}, {4, 5}, {5, 1}, {20, -1}});

constexpr int64_t kTrunc = 24 * 40;

ModuleBasis level5() { return ModuleBasis::from_eta(5, kX5, {}); }
ModuleBasis level14() { return ModuleBasis::from_eta(14, kX14, {kY14}); }
ModuleBasis level20() { return ModuleBasis::from_eta(20, kX20, {kY20}); }

// sum c[(k, m)] y_k x^m at cusp 0, built from the element expansions.
QSeries combine(const ModuleBasis& b, const std::map<MonomialIndex, Rational>& c, int64_t trunc24)
{
    QSeries out = QSeries::zero();
    for (const auto& [km, s] : c) {
        QSeries term = b.ys()[static_cast<size_t>(km.first)].at_zero;
        for (int64_t i = 0; i < km.second; ++i) term = term * b.x().at_zero;
        out += term * s;
    }
    return out.truncated(trunc24);
}

std::map<MonomialIndex, Rational> random_element(std::mt19937_64& rng, int64_t ys, int64_t max_deg)
{
    std::uniform_int_distribution<int> coeff(-99, 99);
    std::uniform_int_distribution<int64_t> deg(0, max_deg);
    std::map<MonomialIndex, Rational> out;
    for (int64_t k = 0; k <= ys; ++k) {
        int64_t d = deg(rng);
        for (int64_t m = 0; m <= d; ++m) {
            int c = coeff(rng);
            if (c != 0) out[{k, m}] = c;
        }
    }
    return out;
}

} // namespace

TEST_SUITE("reduction")
{
    TEST_CASE("genus-0 polynomial is recovered")
    {
        auto b = level5();
        auto f = combine(b, {{{0, 3}, 1}, {{0, 1}, 2}, {{0, 0}, -7}}, kTrunc);
        auto rep = reduce_genus0(f, b.x());
        CHECK(rep.coeffs == std::map<MonomialIndex, Rational>{{{0, 0}, -7}, {{0, 1}, 2}, {{0, 3}, 1}});
        CHECK(rep.residual.is_zero());
        CHECK(rep.localizer_exponent == 0);
    }

    TEST_CASE("constants and zero")
    {
        auto b = level5();
        auto rep = reduce_module(QSeries::constant(4, kTrunc), b);
        CHECK(rep.coeffs == std::map<MonomialIndex, Rational>{{{0, 0}, 4}});
        CHECK(reduce_module(QSeries::zero(kTrunc), b).coeffs.empty());
    }

    TEST_CASE("genus-1 basis at level 14")
    {
        auto b = level14();
        CHECK(b.x_pole() == 2);
        CHECK(b.y_poles() == std::vector<int64_t>{0, 3});
        CHECK(b.gap_set() == std::vector<int64_t>{1});
        CHECK(b.monomial_for_pole(5) == MonomialIndex{1, 1});
        CHECK_FALSE(b.monomial_for_pole(1));
        auto f = combine(b, {{{1, 2}, 3}, {{0, 1}, -1}}, kTrunc);
        auto rep = reduce_module(f, b);
        CHECK(rep.coeffs == std::map<MonomialIndex, Rational>{{{0, 1}, -1}, {{1, 2}, 3}});
    }

    TEST_CASE("a simple pole on a genus-1 curve is a Weierstrass gap")
    {
        auto b = level14();
        auto f = QSeries::from_terms({{-24, 1}, {0, 2}}, kTrunc);
        try {
            reduce_module(f, b);
            FAIL("expected a gap error");
        } catch (const GapError& e) {
            CHECK(e.pole_order() == 1);
            CHECK(std::string(e.what()).find("Weierstrass gap hit") != std::string::npos);
        }
    }

    TEST_CASE("a series outside the module is not silently accepted")
    {
        auto f = QSeries::from_terms({{-48, 1}, {24 * 3, 1}}, kTrunc);
        CHECK_THROWS_AS(reduce_module(f, level5()), MathError);
    }

    TEST_CASE("too few terms past the constant is a truncation error")
    {
        auto b = level5();
        auto f = combine(b, {{{0, 2}, 1}}, 24 * 5);
        CHECK_THROWS_AS(reduce_module(f, b), TruncationError);
        CHECK_NOTHROW(reduce_module(f, b, 5));
    }

    TEST_CASE("order-completeness is enforced")
    {
        CHECK_THROWS_AS(ModuleBasis::from_eta(14, kX14, {kY14, kY14}), std::invalid_argument);
        CHECK_THROWS_AS(ModuleBasis::from_eta(14, kX14, {kX14}), std::invalid_argument);
        CHECK_THROWS_AS(reduce_genus0(QSeries::zero(kTrunc), level14().x()), std::invalid_argument);
    }

    TEST_CASE("localized reduction at level 10 recovers x / z")
    {
        auto b = ModuleBasis::from_eta(10, kX10, {}, kZ10);
        auto f_eta = kX10 * kZ10.pow(-1);
        auto f = expand_at_zero(f_eta, 10, kTrunc).value();
        auto orders = cusp_orders(f_eta, 10);
        auto rep = localize_reduce(f, b, orders);
        CHECK(rep.localizer_exponent == 1);
        CHECK(rep.coeffs == std::map<MonomialIndex, Rational>{{{0, 1}, 1}});
        CHECK(reexpand(rep, b, 24 * 10).agrees_with(f));
    }

    TEST_CASE("localizer without a zero where f has a pole is rejected")
    {
        CuspOrderVector f_orders{10, {{1, -1}, {2, -1}}};
        CuspOrderVector z_orders{10, {{1, -1}, {2, 0}}};
        CHECK_THROWS_AS(localizer_exponent(f_orders, z_orders), MathError);
        CuspOrderVector ok{10, {{1, -2}, {2, 1}}};
        CHECK(localizer_exponent(CuspOrderVector{10, {{1, -1}, {2, -3}}}, ok) == 3);
        CHECK(localizer_exponent(CuspOrderVector{10, {{1, -5}, {2, 0}}}, ok) == 0);
    }

    TEST_CASE("solving at infinity matches greedy reduction at zero")
    {
        auto b = level5();
        QSeries f_inf = expand_at_infinity(kX5.pow(2), kTrunc) + expand_at_infinity(kX5, kTrunc) * Rational(3) +
                        QSeries::constant(7, kTrunc);
        auto solved = solve_at_infinity(f_inf, b, 0);
        REQUIRE(solved);
        std::map<MonomialIndex, Rational> expect{{{0, 0}, 7}, {{0, 1}, 3}, {{0, 2}, 1}};
        CHECK(solved->coeffs == expect);
        auto greedy = reduce_module(combine(b, expect, kTrunc), b);
        CHECK(greedy.coeffs == expect);
    }

    TEST_CASE("valuation table and gain")
    {
        Representation rep;
        rep.coeffs = {{{0, 1}, 5}, {{0, 2}, 250}, {{1, 0}, 0}};
        auto t = valuation_table(rep, 5);
        CHECK(t.min() == 1);
        CHECK(t.entries.at({0, 2}) == 3);
        CHECK_FALSE(t.entries.at({1, 0}));

        Representation next;
        next.coeffs = {{{0, 1}, 25}, {{0, 3}, 125}};
        auto g = valuation_gain(t, valuation_table(next, 5));
        CHECK(g.passed);
        CHECK(g.gain == 1);
        CHECK(g.flagged.empty());

        Representation weak;
        weak.coeffs = {{{0, 1}, 5}, {{0, 2}, 25}};
        auto g2 = valuation_gain(t, valuation_table(weak, 5));
        CHECK_FALSE(g2.passed);
        CHECK(g2.flagged == std::vector<MonomialIndex>{{0, 1}});

        Representation frac;
        frac.coeffs = {{{2, 3}, Rational(1, 5)}};
        try {
            valuation_table(frac, 5);
            FAIL("expected a non-integral error");
        } catch (const MathError& e) {
            CHECK(std::string(e.what()).find("(2, 3)") != std::string::npos);
        }
        CHECK(valuation_gain(t, valuation_table(Representation{}, 5)).passed);
    }
}

TEST_SUITE("reduction properties")
{
    TEST_CASE("random polynomials round-trip at level 5")
    {
        std::mt19937_64 rng(5);
        auto b = level5();
        for (int i = 0; i < 30; ++i) {
            auto c = random_element(rng, 0, 10);
            auto rep = reduce_module(combine(b, c, 24 * 30), b);
            CHECK(rep.coeffs == c);
        }
    }

    TEST_CASE("random genus-1 elements round-trip at levels 14 and 20")
    {
        std::mt19937_64 rng(6);
        for (const auto& b : {level14(), level20()}) {
            for (int i = 0; i < 15; ++i) {
                auto c = random_element(rng, 1, 6);
                auto rep = reduce_module(combine(b, c, 24 * 30), b);
                CHECK(rep.coeffs == c);
            }
        }
    }

    TEST_CASE("reduction is linear and deterministic")
    {
        std::mt19937_64 rng(7);
        auto b = level14();
        for (int i = 0; i < 10; ++i) {
            auto c1 = random_element(rng, 1, 5);
            auto c2 = random_element(rng, 1, 5);
            auto f = combine(b, c1, 24 * 30);
            auto g = combine(b, c2, 24 * 30);
            auto r1 = reduce_module(f, b);
            auto r2 = reduce_module(g, b);
            auto sum = reduce_module(f * Rational(2) + g * Rational(-3), b);
            std::map<MonomialIndex, Rational> expect;
            for (const auto& [km, s] : r1.coeffs) expect[km] += 2 * s;
            for (const auto& [km, s] : r2.coeffs) expect[km] += -3 * s;
            for (auto it = expect.begin(); it != expect.end();) it = it->second == 0 ? expect.erase(it) : ++it;
            CHECK(sum.coeffs == expect);
            CHECK(reduce_module(f, b).coeffs == r1.coeffs);
        }
    }

    TEST_CASE("the number of gaps equals the genus")
    {
        struct Case {
            ModuleBasis basis;
            int64_t level;
        };
        for (const auto& c : {Case{level5(), 5}, Case{level14(), 14}, Case{level20(), 20},
                              Case{ModuleBasis::from_eta(10, kX10, {}, kZ10), 10}}) {
            CHECK(static_cast<int64_t>(c.basis.gap_set().size()) == curve_profile(c.level).genus);
        }
    }

    TEST_CASE("every pole order except the gap is attained")
    {
        for (const auto& b : {level14(), level20()}) {
            for (int64_t pole = 1; pole <= 30; ++pole) {
                auto km = b.monomial_for_pole(pole);
                CHECK(km.has_value() == (pole != 1));
                if (km) CHECK(b.monomial_pole(*km) == pole);
            }
        }
    }

    TEST_CASE("basis functions have poles only at cusp 0")
    {
        for (const auto& b : {level5(), level14(), level20()}) {
            std::vector<BasisElement> elems = b.ys();
            elems.push_back(b.x());
            for (const auto& e : elems) {
                REQUIRE(e.orders);
                for (const auto& [c, ord] : e.orders->entries)
                    if (c != 1) CHECK(ord >= 0);
            }
        }
    }
}
