#include "doctest.h"

#include "cusp_ledger/catalog.hpp"
#include "cusp_ledger/family.hpp"
#include "oracles.hpp"

using namespace cusp;

namespace {

const Catalog& shipped()
{
    static const Catalog cat = catalog_load(CUSP_LEDGER_DEFAULT_CATALOG);
    return cat;
}

FamilySpec plain(const std::string& name)
{
    FamilySpec f = shipped().family(name);
    f.prefactors.clear();
    f.multipliers.clear();
    return f;
}

} // namespace

TEST_SUITE("family")
{
    TEST_CASE("classification by cusp count")
    {
        auto r7 = classify(7, 7);
        CHECK(r7.cusp_count == 2);
        CHECK(r7.difficulty == DifficultyClass::Classical);
        CHECK(r7.tedium == 0);

        auto r11 = classify(11, 11);
        CHECK(r11.difficulty == DifficultyClass::Classical);
        CHECK(r11.tedium == 1);

        CHECK(classify(14).difficulty == DifficultyClass::Localization);
        CHECK(classify(10, 5).difficulty == DifficultyClass::Localization);
        CHECK(classify(20, 5).difficulty == DifficultyClass::NoSystematicMethods);
        CHECK(to_string(DifficultyClass::NoSystematicMethods) == "No systematic methods");

        auto r4 = classify(4);
        CHECK(r4.difficulty == DifficultyClass::UnclassifiedSporadic);
        CHECK_FALSE(r4.sporadic_flags.empty());

        auto r8 = classify(8);
        CHECK(r8.cusp_count == 4);
        CHECK(std::find(r8.sporadic_flags.begin(), r8.sporadic_flags.end(), "level 4 or 8") != r8.sporadic_flags.end());

        CHECK(classify(14, 2).difficulty == DifficultyClass::UnclassifiedSporadic);
        CHECK_THROWS(classify(10, 3));
        CHECK_THROWS(classify(10, 4));
    }

    TEST_CASE("family validation")
    {
        FamilySpec f = shipped().family("p5");
        CHECK_NOTHROW(f.validate());
        auto bad = f;
        bad.ell = 3;
        CHECK_THROWS_AS(bad.validate(), std::invalid_argument); // 3 does not divide 5
        bad = f;
        bad.lambda = 5;
        CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
        bad = f;
        bad.ell = 4;
        CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
        CHECK_THROWS(f.at(9));
    }

    TEST_CASE("family coefficients are p(n) and p_D(n)")
    {
        auto p = oracle::partitions(300);
        auto a = family_coefficients(shipped().family("p5"), 301);
        for (int n = 0; n <= 300; ++n) CHECK(a.coefficient_q(n) == p[static_cast<size_t>(n)]);

        auto pd = oracle::distinct_partitions(300);
        auto b = family_coefficients(shipped().family("pD5"), 301);
        for (int n = 0; n <= 300; ++n) CHECK(b.coefficient_q(n) == pd[static_cast<size_t>(n)]);
    }

    TEST_CASE("plain L_1 of p(n) is the 5n+4 subsequence")
    {
        auto L = build_L_direct(plain("p5"), 1, 5);
        const std::vector<int> stated = {5, 30, 135, 490, 1575};
        for (size_t m = 0; m < stated.size(); ++m) CHECK(L.coefficient_q(static_cast<int64_t>(m)) == stated[m]);
        CHECK(family_residue(shipped().family("p5"), 1) == 4);
        CHECK(family_residue(shipped().family("p5"), 2) == 24);
    }

    TEST_CASE("distinct partitions: the first qualifying coefficient is divisible by 5")
    {
        const auto& f = shipped().family("pD5");
        CHECK(family_residue(f, 1) == 26);
        auto pd = oracle::distinct_partitions(26);
        CHECK(pd[26] % 5 == 0);
        CHECK(family_coefficients(f, 27).coefficient_q(26) == pd[26]);
    }

    TEST_CASE("identity multipliers with Lambda = 1 iterate U_ell")
    {
        FamilySpec f;
        f.name = "toy";
        f.generator = EtaQuotient(1, {{1, -1}});
        f.ell = 5;
        f.lambda = 1;
        f.level = 5;
        f.schedule = {{1, {1, 0}}, {2, {2, 0}}, {3, {3, 0}}};
        f.multipliers = {{1, EtaQuotient(5, {})}, {2, EtaQuotient(5, {})}};
        REQUIRE_NOTHROW(f.validate());
        auto l1 = build_L_direct(f, 1, 200);
        auto l3 = build_L_recursive(f, 3, 8);
        CHECK(l3.agrees_with(u_ell(u_ell(l1, 5), 5)));
        CHECK(l3.agrees_with(build_L_direct(f, 3, 8)));
    }

    TEST_CASE("a prefactor that leaves fractional exponents is rejected")
    {
        auto f = shipped().family("p5");
        f.prefactors[1] = EtaQuotient(5, {});
        CHECK_THROWS_AS(build_L_direct(f, 1, 10), MathError);
    }

    TEST_CASE("recursion needs every multiplier")
    {
        auto f = shipped().family("p5");
        f.multipliers.erase(2);
        CHECK_NOTHROW(build_L_recursive(f, 2, 10));
        CHECK_THROWS_AS(build_L_recursive(f, 3, 10), std::invalid_argument);
    }

    TEST_CASE("verification of p(5n+4)")
    {
        const auto& f = shipped().family("p5");
        auto rep = verify_congruence(f, 1, 2000);
        CHECK(rep.passed);
        CHECK(rep.qualifying == 400);
        CHECK(rep.min_valuation == 1);
        CHECK(rep.witness_n == 4);

        VerifyOptions strict;
        strict.divisibility = 2;
        auto fail = verify_congruence(f, 1, 2000, strict);
        CHECK_FALSE(fail.passed);
        CHECK(fail.counterexample_n == 4);
        CHECK(fail.counterexample_value == 5);
    }

    TEST_CASE("an empty residue class passes vacuously")
    {
        auto rep = verify_congruence(shipped().family("p5"), 1, 3);
        CHECK(rep.passed);
        CHECK(rep.qualifying == 0);
        CHECK_FALSE(rep.min_valuation);
    }

    TEST_CASE("threaded verification matches the serial result")
    {
        const auto& f = shipped().family("p7");
        VerifyOptions four;
        four.jobs = 4;
        auto a = verify_congruence(f, 2, 1500);
        auto b = verify_congruence(f, 2, 1500, four);
        CHECK(a.passed == b.passed);
        CHECK(a.qualifying == b.qualifying);
        CHECK(a.min_valuation == b.min_valuation);
        CHECK(a.witness_n == b.witness_n);
    }

    TEST_CASE("L_1 and L_2 of p(n) in the level-5 Hauptmodul")
    {
        const auto& cat = shipped();
        const auto& f = cat.family("p5");
        auto basis = cat.basis("X0(5)").build();
        auto l1 = reduce_L(f, 1, basis, 40);
        CHECK(l1.representation.coeffs == std::map<MonomialIndex, Rational>{{{0, 1}, 5}});
        auto l2 = reduce_L(f, 2, basis, 40);
        CHECK(l2.representation.coeffs.at({0, 1}) == 1575);
        CHECK(l2.representation.coeffs.at({0, 2}) == 162500);
        auto gain = valuation_gain(valuation_table(l1.representation, 5), valuation_table(l2.representation, 5));
        CHECK(gain.passed);
    }

    TEST_CASE("L_1 of distinct partitions needs one power of the localizer")
    {
        const auto& cat = shipped();
        auto basis = cat.basis("X0(10)").build();
        auto l1 = reduce_L(cat.family("pD5"), 1, basis, 40);
        CHECK(l1.representation.localizer_exponent == 1);
        CHECK(l1.representation.coeffs.begin()->second == 165);
        CHECK(valuation_table(l1.representation, 5).min() == 1);
    }
}

TEST_SUITE("family properties")
{
    TEST_CASE("direct and recursive L_alpha agree")
    {
        struct Case {
            const char* name;
            int64_t max_alpha;
        };
        for (auto [name, max_alpha] : {Case{"p5", 3}, Case{"p7", 3}, Case{"p11", 2}}) {
            const auto& f = shipped().family(name);
            for (int64_t alpha = 1; alpha <= max_alpha; ++alpha) {
                CAPTURE(name);
                CAPTURE(alpha);
                auto d = build_L_direct(f, alpha, 12);
                auto r = build_L_recursive(f, alpha, 12);
                CHECK(d.agrees_with(r));
                CHECK(d.trunc24() >= 24 * 12);
            }
        }
    }

    TEST_CASE("every schedule entry of every shipped family holds for n <= 3000")
    {
        for (const auto& f : shipped().families) {
            auto coeffs = family_coefficients(f, 3001);
            for (const auto& [alpha, entry] : f.schedule) {
                CAPTURE(f.name);
                CAPTURE(alpha);
                auto rep = verify_congruence(f, alpha, 3000, coeffs);
                CHECK(rep.passed);
            }
        }
    }

    TEST_CASE("Ramanujan congruences are sharp on the first qualifying n")
    {
        // min valuation equals beta exactly for p(n) at alpha = 1, 2.
        for (const char* name : {"p5", "p7"}) {
            const auto& f = shipped().family(name);
            for (int64_t alpha = 1; alpha <= 2; ++alpha) {
                auto rep = verify_congruence(f, alpha, 2000);
                CHECK(rep.min_valuation == f.at(alpha).divisibility_exponent);
            }
        }
    }

    TEST_CASE("Ramanujan congruences hold on independently counted partitions")
    {
        auto p = oracle::partitions(1500);
        for (int64_t ell : {5, 7, 11}) {
            for (int64_t n = 0; n <= 1500; ++n) {
                if ((24 * n) % ell != 1 % ell) continue;
                if (oracle::valuation(p[static_cast<size_t>(n)], ell) < 1) FAIL("p(" << n << ") not divisible by " << ell);
            }
        }
    }
}
