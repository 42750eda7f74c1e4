#include <catch_amalgamated.hpp>

#include <random>

#include "algchar/branch.hpp"
#include "algchar/charring.hpp"
#include "oracles.hpp"

using namespace algchar;

namespace {

FormalSeries mono(std::int64_t c, Rational k = 1) { return FormalSeries::monomial(Weight{c}, k); }

const RootDatum& a1() { static const RootDatum d = RootDatum::named("A1"); return d; }
const RootDatum& a2() { static const RootDatum d = RootDatum::named("A2"); return d; }

} // namespace

TEST_CASE("Weyl denominator in both forms", "[charring]")
{
    auto b1 = ParabolicDatum::borel(a1());
    CHECK(equal_finite(weyl_denominator(b1), FormalSeries::one(1) - mono(-2)));
    CHECK(equal_finite(weyl_denominator(b1, DenominatorMode::alternating_sum), weyl_denominator(b1)));

    for (const std::string name : {"A2", "B2", "G2", "A1xA1"}) {
        auto b = ParabolicDatum::borel(RootDatum::named(name));
        CHECK(equal_finite(weyl_denominator(b), weyl_denominator(b, DenominatorMode::alternating_sum)));
    }
    auto a2b = ParabolicDatum::borel(a2());
    CHECK(weyl_denominator(a2b, DenominatorMode::alternating_sum).terms().size() == 6);

    auto bc = ParabolicDatum::borel(RootDatum::named("BC1"));
    FormalSeries expect = (FormalSeries::one(1) - mono(-2)) * power(FormalSeries::one(1) - mono(-4), 2);
    CHECK(equal_finite(weyl_denominator(bc), expect));
}

TEST_CASE("Weyl character examples", "[charring]")
{
    auto b1 = ParabolicDatum::borel(a1());
    CHECK(weyl_character(Weight{0}, b1).expansion() == FormalSeries::one(1));

    auto adj = weyl_character(Weight{2}, b1);
    CHECK(equal_finite(adj.numerator, mono(2) - mono(-4)));
    REQUIRE(adj.expansion());
    CHECK(equal_finite(*adj.expansion(), mono(2) + mono(0) + mono(-2)));

    auto b2 = ParabolicDatum::borel(a2());
    const Weight w1 = a2().from_fundamental({1, 0});
    auto e = weyl_character(w1, b2).expansion();
    REQUIRE(e);
    CHECK(e->terms().size() == 3);
    for (const auto& [w, c] : e->terms()) {
        CHECK(c == 1);
    }
    CHECK(e->terms() == oracle::freudenthal(a2(), w1));

    CHECK_THROWS_AS(weyl_character(Weight{-2}, b1), DomainError);
    CHECK_THROWS_AS(weyl_character(w1, ParabolicDatum::maximal(a2(), 0)), DomainError);
}

TEST_CASE("Weyl character matches Freudenthal on random weights", "[charring]")
{
    std::mt19937 g(11);
    std::uniform_int_distribution<int> lab(0, 3);
    for (const std::string name : {"A2", "B2", "G2"}) {
        const RootDatum d = RootDatum::named(name);
        auto b = ParabolicDatum::borel(d);
        for (int i = 0; i < 4; ++i) {
            const Weight lam = d.from_fundamental({lab(g), lab(g)});
            auto e = weyl_character(lam, b).expansion();
            REQUIRE(e);
            CHECK(e->terms() == oracle::freudenthal(d, lam));
        }
    }
}

TEST_CASE("Kostant cohomology", "[charring]")
{
    auto b1 = ParabolicDatum::borel(a1());
    auto q0 = kostant_cohomology(Weight{2}, b1, 0);
    auto q1 = kostant_cohomology(Weight{2}, b1, 1);
    REQUIRE(q0.size() == 1);
    REQUIRE(q1.size() == 1);
    CHECK(q0[0].first == Weight{2});
    CHECK(q1[0].first == Weight{-4});
    CHECK(kostant_cohomology(Weight{2}, b1, -1).empty());
    CHECK(kostant_cohomology(Weight{2}, b1, 2).empty());

    auto top = kostant_cohomology(Weight{0, 0}, ParabolicDatum::borel(a2()), 3);
    REQUIRE(top.size() == 1);
    CHECK(top[0].first == -2 * a2().rho());

    // Maximal parabolic of A2: three coset representatives, one per degree.
    auto p = ParabolicDatum::maximal(a2(), 0);
    for (int q = 0; q <= 2; ++q) {
        CHECK(kostant_cohomology(Weight{0, 0}, p, q).size() == 1);
    }
}

TEST_CASE("Euler numerator", "[charring]")
{
    auto b1 = ParabolicDatum::borel(a1());
    CHECK(equal_finite(euler_numerator(Weight{0}, b1), weyl_denominator(b1)));
    CHECK(equal_finite(euler_numerator(Weight{2}, b1), mono(2) - mono(-4)));

    std::mt19937 g(5);
    std::uniform_int_distribution<int> lab(0, 4);
    auto b2 = ParabolicDatum::borel(a2());
    for (int i = 0; i < 5; ++i) {
        const Weight lam = a2().from_fundamental({lab(g), lab(g)});
        CHECK(equal_finite(euler_numerator(lam, b2), weyl_character(lam, b2).numerator));
    }
}

TEST_CASE("fraction multiplication and duality", "[charring]")
{
    auto b1 = ParabolicDatum::borel(a1());
    auto adj = weyl_character(Weight{2}, b1);
    CHECK(frac_equal(frac_mul(adj, CharacterFraction::one(1)), adj));

    auto sq = frac_mul(adj, adj).expansion();
    REQUIRE(sq);
    FormalSeries three = mono(2) + mono(0) + mono(-2);
    CHECK(sq->terms() == oracle::convolve(three.terms(), three.terms()));
    CHECK(sq->coefficient(Weight{0}) == 3);

    auto d2 = SL2ModuleSpec::discrete(2).fraction();
    auto d22 = frac_mul(d2, d2);
    CHECK(equal_finite(d22.numerator, mono(4)));
    CHECK(d22.denominator == std::map<Weight, int>{{Weight{-2}, 2}});

    CHECK(frac_equal(frac_dual(CharacterFraction::one(1)), CharacterFraction::one(1)));
    CHECK(frac_equal(frac_dual(adj), adj));
    for (int m = 2; m <= 6; ++m) {
        auto dm = SL2ModuleSpec::discrete(m).fraction();
        auto dd = frac_dual(dm);
        CHECK(equal_finite(dd.numerator, mono(-m + 2, -1)));
        CHECK(dd.denominator == dm.denominator);
        CHECK(frac_equal(frac_dual(dd), dm));
    }

    CharacterFraction other{FormalSeries::one(1), {}, "elsewhere"};
    CHECK_THROWS_AS(frac_mul(d2, other), DomainError);
}

TEST_CASE("fraction addition", "[charring]")
{
    auto b1 = ParabolicDatum::borel(a1());
    auto adj = weyl_character(Weight{2}, b1);
    auto triv = weyl_character(Weight{0}, b1);
    auto sum = frac_add(adj, triv).expansion();
    REQUIRE(sum);
    CHECK(equal_finite(*sum, mono(2) + mono(0, 2) + mono(-2)));
}

TEST_CASE("restriction", "[charring]")
{
    auto b2 = ParabolicDatum::borel(a2());
    const IntMatrix id = IntMatrix::identity(2);
    // 1 has no denominator, so the target nilradical must be trivial as well.
    auto whole = ParabolicDatum::standard(a2(), {0, 1});
    auto one = restrict_fraction(CharacterFraction::one(2), id, whole);
    CHECK(one.expansion() == FormalSeries::one(2));
    CHECK_THROWS_AS(restrict_fraction(CharacterFraction::one(2), id, b2), DomainError);

    // The full Borel denominator restricted to itself leaves no relative part.
    auto c = restrict_fraction(weyl_character(Weight{0, 0}, b2), id, b2);
    CHECK(relative_denominator(c.denominator, b2).empty());

    // A Borel of A2 is not a divisor of the maximal-parabolic denominator.
    auto p = ParabolicDatum::maximal(a2(), 0);
    CharacterFraction cp{FormalSeries::one(2), p.nilradical(), p.label()};
    CHECK_THROWS_AS(restrict_fraction(cp, id, b2), DomainError);
}

TEST_CASE("composition through a parabolic", "[charring]")
{
    auto b2 = ParabolicDatum::borel(a2());
    for (std::size_t i = 0; i < 2; ++i) {
        auto p = ParabolicDatum::maximal(a2(), i);
        CHECK(compose_characters(Weight{0, 0}, b2, p));
        CHECK(compose_characters(a2().rho(), b2, p));
        CHECK(compose_characters(a2().from_fundamental({2, 1}), b2, p));
    }
    CHECK_THROWS_AS(compose_characters(Weight{0, 0}, ParabolicDatum::maximal(a2(), 0), b2), DomainError);
}

TEST_CASE("primary projection", "[charring]")
{
    const auto group = generate_weyl_group(a1());
    const Weight rho = a1().rho();
    auto chi_rho = infinitesimal_character(Weight{0}, rho, group);
    FormalSeries wq = mono(0) - mono(-2);
    CHECK(equal_finite(primary_projection(wq, chi_rho, rho), wq));

    auto far = infinitesimal_character(Weight{40}, rho, group);
    CHECK(primary_projection(wq, far, rho).is_zero());

    auto chi = infinitesimal_character(Weight{2}, rho, group);
    FormalSeries num = mono(2) - mono(-4) + mono(10);
    CHECK(equal_finite(primary_projection(num, chi, rho), mono(2) - mono(-4)));
}

TEST_CASE("translation", "[charring]")
{
    const auto group = generate_weyl_group(a1());
    const Weight rho = a1().rho();
    FormalSeries num = mono(2) - mono(-4);
    CHECK(equal_finite(translate_numerator(num, Weight{2}, Weight{0}, rho, group, a1()), num));
    FormalSeries moved = translate_numerator(num, Weight{2}, Weight{2}, rho, group, a1());
    CHECK(equal_finite(moved, mono(4) - mono(-6)));
    CHECK(equal_finite(translate_numerator(moved, Weight{4}, Weight{-2}, rho, group, a1()), num));

    CHECK_THROWS_AS(translate_numerator(mono(6), Weight{2}, Weight{2}, rho, group, a1()), DomainError);
    // lam + rho singular, lam + mu + rho regular
    CHECK_THROWS_AS(translate_numerator(mono(-1), Weight{-1}, Weight{2}, rho, group, a1()), DomainError);

    // Translated Weyl numerators are again Weyl numerators.
    const auto g2 = generate_weyl_group(a2());
    const Weight lam = a2().from_fundamental({1, 0}), mu = a2().from_fundamental({1, 2});
    FormalSeries n2 = weyl_numerator(lam, g2, a2().rho());
    CHECK(equal_finite(translate_numerator(n2, lam, mu, a2().rho(), g2, a2()),
                       weyl_numerator(lam + mu, g2, a2().rho())));
}
