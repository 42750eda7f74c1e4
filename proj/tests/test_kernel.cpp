#include <catch_amalgamated.hpp>

#include <random>

#include "algchar/kernel.hpp"
#include "oracles.hpp"

using namespace algchar;

namespace {

const Weight a{2};
const Box win = Box::cube(1, -25, 25);

FormalSeries mono(std::int64_t c, Rational k = 1) { return FormalSeries::monomial(Weight{c}, k); }
FormalSeries zero_on(const Box& b) { return FormalSeries::on_window(1, {}, b); }

// Compares on whatever part of the window both sides certify.
bool same(const FormalSeries& x, const FormalSeries& y)
{
    Box b = win;
    for (const auto* s : {&x, &y}) {
        if (!s->is_finite()) {
            b = intersect(b, s->window()->exact);
        }
    }
    REQUIRE_FALSE(b.empty());
    return equal_on_window(x, y, b);
}

const RootDatum& a1() { static const RootDatum d = RootDatum::named("A1"); return d; }
const RootDatum& bc1() { static const RootDatum d = RootDatum::named("BC1"); return d; }

} // namespace

TEST_CASE("d_pm", "[kernel]")
{
    CHECK(equal_finite(d_pm(a, 1, -1), mono(-1) - mono(1)));
    CHECK(equal_finite(d_pm(a, 0, 1), mono(0, 2)));
    CHECK(d_pm(a, 0, -1).is_zero());
    CHECK_THROWS_AS(d_pm(a, -1, 1), DomainError);
    CHECK_THROWS_AS(d_pm(a, 1, 0), DomainError);
    for (int m = 1; m <= 6; ++m) {
        FormalSeries rhs = Rational(1, 2) * (d_minus(a) * d_minus(a, m - 1)) + Rational(1, 2) * (d_plus(a) * d_plus(a, m - 1));
        CHECK(equal_finite(d_plus(a, m), rhs));
    }
}

TEST_CASE("powers of s", "[kernel]")
{
    FormalSeries s1 = s_pow(a, 1, win);
    for (std::int64_t k = 0; 1 + 2 * k <= 25; ++k) {
        CHECK(s1.coefficient(Weight{1 + 2 * k}) == 1);
    }
    CHECK(s1.coefficient(Weight{-1}) == 0);
    CHECK(s_pow(a, 3, win).coefficient(Weight{3 + 2 * 2}) == 6);
    CHECK(same(d_minus(a) * s1, mono(0)));
    CHECK_THROWS_AS(s_pow(a, 0, win), DomainError);

    for (int n = 1; n <= 6; ++n) {
        FormalSeries sn = s_pow(a, n, Box::cube(1, -70, 70));
        const auto expect = oracle::geometric_power(n, 30);
        for (int k = 0; k <= 30; ++k) {
            REQUIRE(sn.coefficient(Weight{n + 2 * k}) == expect[k]);
        }
        CHECK(same(d_plus(a) * sn, dplus_spow_closed(a, n, win)));
    }
    // the n = 1, k = 0 convention
    CHECK(dplus_spow_closed(a, 1, win).coefficient(Weight{0}) == 1);
}

TEST_CASE("univariate y", "[kernel]")
{
    CHECK(y_uni(a, 0, win).is_zero());
    FormalSeries y1 = y_uni(a, 1, win);
    for (std::int64_t c = -25; c <= 25; ++c) {
        CHECK(y1.coefficient(Weight{c}) == (c % 2 != 0 ? 1 : 0));
    }
    for (int n = 1; n <= 6; ++n) {
        CHECK(same(d_minus(a) * y_uni(a, n, win), y_uni(a, n - 1, win)));
        CHECK(same(power(d_minus(a), n) * y_uni(a, n, win), zero_on(win)));
    }
    for (int n = 2; n <= 6; ++n) {
        FormalSeries sym = mono(-2) + mono(2);
        CHECK(same(sym * y_uni(a, n, win), Rational(2) * y_uni(a, n, win) + y_uni(a, n - 2, win)));
    }
    CHECK_THROWS_AS(y_uni(a, -1, win), DomainError);
}

TEST_CASE("multivariate y", "[kernel]")
{
    for (int n = 1; n <= 3; ++n) {
        CHECK(y_multi({a}, {n}, win) == y_uni(a, n, win));
    }
    const Box w = Box::cube(1, -40, 40);
    FormalSeries y = y_multi({Weight{2}, Weight{4}}, {1, 1}, w);
    for (std::int64_t k = 0; 3 + 2 * k <= 40; ++k) {
        CHECK(y.coefficient(Weight{3 + 2 * k}) == k / 2 + 1);
        CHECK(y.coefficient(Weight{-3 - 2 * k}) == -(k / 2 + 1));
    }
    CHECK(same(d_minus(Weight{2}) * d_minus(Weight{4}) * y, zero_on(w)));
    CHECK_THROWS_AS(y_multi({a, a}, {1, 1}, w), DomainError);
}

TEST_CASE("section of multiplication by d_-", "[kernel]")
{
    const Box pre = Box::cube(1, -30, 30);
    CHECK(section_p(a, FormalSeries::one(1), pre, a1()) == s_pow(a, 1, pre));
    CHECK(section_p(a, FormalSeries::zero(1), pre, a1()).is_zero());

    std::mt19937 g(3);
    std::uniform_int_distribution<int> pos(-8, 8), coef(-5, 5);
    for (int i = 0; i < 100; ++i) {
        FormalSeries m = FormalSeries::zero(1);
        for (int t = 0; t < 4; ++t) {
            m.add_term(Weight{pos(g)}, coef(g));
        }
        FormalSeries back = d_minus(a) * section_p(a, m, pre, a1());
        REQUIRE(equal_on_window(back, m, win));
    }
}

TEST_CASE("t maps", "[kernel]")
{
    CHECK(same(t_apply({a}, {1}, s_pow(a, 1, win)), mono(0)));
    CHECK(same(t_apply({a}, {1}, ws_pow(a, 1, win)), mono(0, -1)));
    for (int n = 1; n <= 5; ++n) {
        CHECK(same(t_apply({a}, {n}, y_uni(a, n, win)), zero_on(win)));
    }
}

TEST_CASE("kernel bases", "[kernel]")
{
    auto b1 = kernel_basis({a}, {1}, Weight{0}, {Weight{0}}, a1());
    REQUIRE(b1.size() == 2);
    CHECK(b1[0].dplus.empty());
    CHECK(b1[1].dplus.size() == 1);
    CHECK(b1[0].expand(win) == y_uni(a, 1, win));

    CHECK(kernel_basis({a}, {2}, Weight{0}, {Weight{0}}, a1()).size() == 4);

    // <1 - 0, alpha>/<alpha, alpha> = 1/2 is not below 1/2
    CHECK_THROWS_AS(kernel_basis({a}, {1}, Weight{0}, {Weight{1}}, a1()), DomainError);
    CHECK_THROWS_AS(kernel_basis({a, a}, {1, 1}, Weight{0}, {Weight{0}}, a1()), DomainError);

    const std::vector<Weight> roots{Weight{2}, Weight{4}};
    auto reps = enumerate_representatives(roots, Weight{0}, win, bc1());
    auto bb = kernel_basis(roots, {1, 1}, Weight{0}, reps, bc1());
    CHECK(bb.size() == 10);
    CHECK(independent_subset(bb, win).size() == 6);
    bool has_joint = std::any_of(bb.begin(), bb.end(), [](const KernelGenerator& k) {
        return k.roots.size() == 2 && k.dplus.empty();
    });
    CHECK(has_joint);
}

TEST_CASE("kernel dimension matches the difference-equation count", "[kernel]")
{
    for (int n = 1; n <= 3; ++n) {
        auto basis = kernel_basis({a}, {n}, Weight{0}, enumerate_representatives({a}, Weight{0}, win, a1()), a1());
        const auto dim = oracle::kernel_dimension_rank1(oracle::dminus_stencil({2}, {n}));
        CHECK(independent_subset(basis, win).size() == dim);
    }
}

TEST_CASE("membership", "[kernel]")
{
    auto basis = kernel_basis({a}, {1}, Weight{0}, {Weight{0}}, a1());
    auto c = membership_coordinates(y_uni(a, 1, win), basis, win);
    REQUIRE(c);
    CHECK(*c == std::vector<Rational>{1, 0});

    FormalSeries z = Rational(3, 2) * basis[0].expand(win) - Rational(2) * basis[1].expand(win);
    auto c2 = membership_coordinates(z, basis, win);
    REQUIRE(c2);
    CHECK(*c2 == std::vector<Rational>{Rational(3, 2), -2});

    CHECK_FALSE(membership_coordinates(s_pow(a, 1, win), basis, win));
}

TEST_CASE("regularity strip", "[kernel]")
{
    CHECK(regularity_strip_check(FormalSeries::zero(1), {a}, {1}, Weight{0}, a1()));
    CHECK_FALSE(regularity_strip_check(y_uni(a, 1, win), {a}, {1}, Weight{0}, a1()));
    CHECK(regularity_strip_check(mono(6), {a}, {1}, Weight{0}, a1()));
    CHECK(in_regularity_strip(Weight{1}, 0, {a}, {1}, Weight{0}, a1()));
    CHECK_FALSE(in_regularity_strip(Weight{2}, 0, {a}, {1}, Weight{0}, a1()));
}

TEST_CASE("only zero vanishes on the strip", "[kernel]")
{
    for (int n = 1; n <= 2; ++n) {
        auto basis = kernel_basis({a}, {n}, Weight{0}, enumerate_representatives({a}, Weight{0}, win, a1()), a1());
        auto rep = vanishing_check(basis, {a}, {n}, Weight{0}, win, a1());
        CHECK(rep.generators_ok());
        CHECK(rep.injective_on_strip());
    }
    const std::vector<Weight> roots{Weight{2}, Weight{4}};
    auto bb = kernel_basis(roots, {1, 1}, Weight{0}, enumerate_representatives(roots, Weight{0}, win, bc1()), bc1());
    auto rep = vanishing_check(bb, roots, {1, 1}, Weight{0}, win, bc1());
    CHECK(rep.generators_ok());
    CHECK(rep.injective_on_strip());
}
