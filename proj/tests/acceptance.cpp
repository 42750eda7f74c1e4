// Acceptance run: one PASS/FAIL line per criterion, exact arithmetic throughout.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "algchar/branch.hpp"
#include "algchar/charring.hpp"
#include "algchar/kernel.hpp"
#include "algchar/lattice.hpp"
#include "algchar/series.hpp"
#include "algchar/weyl.hpp"
#include "oracles.hpp"

using namespace algchar;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

std::mt19937& rng()
{
    static std::mt19937 g(20240611);
    return g;
}

int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

Rational random_rational()
{
    int num = 0;
    while (num == 0) {
        num = uniform(-9, 9);
    }
    return Rational(num, uniform(1, 5));
}

FormalSeries from_char(std::size_t rank, const oracle::Char& c) { return FormalSeries::finite(rank, c); }

Weight random_dominant(const RootDatum& d, int max_label)
{
    std::vector<std::int64_t> labels;
    for (std::size_t i = 0; i < d.rank(); ++i) {
        labels.push_back(uniform(0, max_label));
    }
    return d.from_fundamental(labels);
}

const std::vector<std::string> all_systems{"A1", "A1xA1", "A2", "B2", "G2"};

Outcome denominator_formula()
{
    Outcome o;
    for (const auto& name : all_systems) {
        const RootDatum d = RootDatum::named(name);
        std::vector<ParabolicDatum> pars{ParabolicDatum::borel(d)};
        for (std::size_t i = 0; i < d.rank() && d.rank() > 1; ++i) {
            pars.push_back(ParabolicDatum::maximal(d, i));
        }
        for (const auto& p : pars) {
            FormalSeries prod = weyl_denominator(p, DenominatorMode::product);
            FormalSeries alt = weyl_denominator(p, DenominatorMode::alternating_sum);
            o.require(equal_finite(prod, alt), "product != alternating sum for " + p.label());
        }
        std::vector<Weight> pos(d.positive_roots());
        o.require(equal_finite(weyl_denominator(pars[0]), from_char(d.rank(), oracle::denominator(d, pos))),
                  "product form disagrees with direct expansion for " + name);
    }
    const RootDatum bc = RootDatum::named("BC1");
    FormalSeries expected = (FormalSeries::one(1) - FormalSeries::monomial(Weight{-2}))
                            * power(FormalSeries::one(1) - FormalSeries::monomial(Weight{-4}), 2);
    o.require(equal_finite(weyl_denominator(ParabolicDatum::borel(bc)), expected), "BC1 product is not (1-[-a])(1-[-2a])^2");
    if (o.pass) {
        o.detail = "5 systems, Borel and maximal parabolics, plus BC1";
    }
    return o;
}

Outcome weyl_character_formula()
{
    Outcome o;
    const RootDatum d = RootDatum::named("A2");
    const auto borel = ParabolicDatum::borel(d);
    int count = 0;
    for (int a = 0; a <= 3; ++a) {
        for (int b = 0; b <= 3; ++b) {
            const Weight lam = d.from_fundamental({a, b});
            auto ch = weyl_character(lam, borel).expansion();
            o.require(ch.has_value(), "numerator not divisible at " + lam.str());
            if (!ch) {
                continue;
            }
            oracle::Char f = oracle::freudenthal(d, lam);
            o.require(equal_finite(*ch, from_char(2, f)), "multiplicities differ at " + lam.str());
            Rational dim = 0;
            for (const auto& [w, c] : ch->terms()) {
                dim += c;
            }
            o.require(dim == oracle::weyl_dimension(d, lam), "dimension differs at " + lam.str());
            ++count;
        }
    }
    if (o.pass) {
        o.detail = std::to_string(count) + " A2 modules against Freudenthal";
    }
    return o;
}

Outcome kostant_euler()
{
    Outcome o;
    int cases = 0;
    for (const std::string name : {"A1", "A2"}) {
        const RootDatum d = RootDatum::named(name);
        const auto borel = ParabolicDatum::borel(d);
        const auto group = generate_weyl_group(d);
        const Weight rho = d.rho();
        for (int i = 0; i < 10; ++i) {
            const Weight lam = random_dominant(d, 6);
            o.require(equal_finite(euler_numerator(lam, borel), weyl_numerator(lam, group, rho)),
                      "Euler numerator differs at " + lam.str());
            for (int q = 0; q <= static_cast<int>(d.positive_roots().size()); ++q) {
                std::set<Weight> expected;
                std::size_t length_q = 0;
                for (const auto& w : group) {
                    if (w.length == q) {
                        expected.insert(w.apply(lam + rho) - rho);
                        ++length_q;
                    }
                }
                std::set<Weight> got;
                for (const auto& [mu, m] : kostant_cohomology(lam, borel, q)) {
                    o.require(m == 1, "cohomology not multiplicity free");
                    got.insert(mu);
                }
                o.require(got == expected && got.size() == length_q,
                          "degree " + std::to_string(q) + " weights differ at " + lam.str());
            }
            ++cases;
        }
    }
    if (o.pass) {
        o.detail = std::to_string(cases) + " random weights on A1, A2";
    }
    return o;
}

Outcome transitivity()
{
    Outcome o;
    const RootDatum d = RootDatum::named("A2");
    const auto borel = ParabolicDatum::borel(d);
    int cases = 0;
    for (std::size_t omit = 0; omit < 2; ++omit) {
        const auto q = ParabolicDatum::maximal(d, omit);
        for (auto [a, b] : std::vector<std::pair<int, int>>{{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 1}, {3, 2}, {0, 4}}) {
            o.require(compose_characters(d.from_fundamental({a, b}), borel, q),
                      "composition fails in " + q.label() + " at (" + std::to_string(a) + "," + std::to_string(b) + ")");
            ++cases;
        }
    }
    if (o.pass) {
        o.detail = std::to_string(cases) + " weights across both maximal parabolics of A2";
    }
    return o;
}

Outcome multiplicativity()
{
    Outcome o;
    struct Case {
        std::string system;
        std::vector<std::int64_t> v, w;
    };
    const std::vector<Case> cases{{"A1", {1}, {1}},         {"A1", {2}, {3}},         {"A1", {4}, {1}},
                                  {"A2", {1, 0}, {0, 1}},   {"A2", {1, 1}, {1, 0}},   {"A2", {2, 0}, {1, 1}},
                                  {"A2", {0, 2}, {2, 1}}};
    for (const auto& c : cases) {
        const RootDatum d = RootDatum::named(c.system);
        const auto borel = ParabolicDatum::borel(d);
        const Weight lv = d.from_fundamental(c.v), lw = d.from_fundamental(c.w);
        oracle::Char tensor = oracle::convolve(oracle::freudenthal(d, lv), oracle::freudenthal(d, lw));
        CharacterFraction sum{FormalSeries::zero(d.rank()), {}, borel.label()};
        for (const auto& [hw, m] : oracle::decompose(d, tensor)) {
            CharacterFraction part = weyl_character(hw, borel);
            part.numerator = part.numerator.scaled(m);
            sum = frac_add(sum, part);
        }
        CharacterFraction prod = frac_mul(weyl_character(lv, borel), weyl_character(lw, borel));
        o.require(frac_equal(sum, prod), "c(V (x) W) != c(V) c(W) for " + lv.str() + " (x) " + lw.str());
    }
    if (o.pass) {
        o.detail = std::to_string(cases.size()) + " pairs, tensor products by brute-force convolution";
    }
    return o;
}

FormalSeries random_poly(std::size_t rank, int radius, int terms)
{
    FormalSeries::Terms t;
    for (int i = 0; i < terms; ++i) {
        std::vector<std::int64_t> c;
        for (std::size_t j = 0; j < rank; ++j) {
            c.push_back(uniform(-radius, radius));
        }
        t[Weight(c)] += random_rational();
    }
    std::erase_if(t, [](const auto& kv) { return kv.second == 0; });
    return FormalSeries::finite(rank, t);
}

Outcome kernel_identities()
{
    Outcome o;
    struct Setting {
        RootDatum datum;
        std::vector<Weight> roots;
    };
    const RootDatum a1 = RootDatum::named("A1"), a2 = RootDatum::named("A2");
    std::vector<Setting> settings{{a1, {Weight{2}}}, {a2, a2.positive_roots()}};
    for (const auto& s : settings) {
        const std::size_t r = s.datum.rank();
        const Box win = Box::cube(r, -25, 25);
        for (const auto& alpha : s.roots) {
            const FormalSeries dm = d_minus(alpha);
            const Box pre = detail::preimage_window(win, dm.bounding_box());
            const int trials = 100 / static_cast<int>(s.roots.size()) + 1;
            for (int i = 0; i < trials; ++i) {
                FormalSeries m = random_poly(r, 6, 6);
                FormalSeries back = dm * section_p(alpha, m, pre, s.datum);
                o.require(equal_on_window(back, m, win), "d- p(m) != m for alpha " + alpha.str());
            }
            for (int n = 1; n <= 6; ++n) {
                // d y^(n) = y^(n-1), d^n y^(n) = 0
                FormalSeries y = y_uni(alpha, n, pre);
                o.require(equal_on_window(dm * y, y_uni(alpha, n - 1, win), win),
                          "d y^(n) != y^(n-1) at n=" + std::to_string(n));
                FormalSeries dn = power(dm, n);
                FormalSeries yn = y_uni(alpha, n, detail::preimage_window(win, dn.bounding_box()));
                o.require(equal_on_window(dn * yn, FormalSeries::on_window(r, {}, win), win),
                          "d^n y^(n) != 0 at n=" + std::to_string(n));
                if (n >= 2) {
                    FormalSeries sym = FormalSeries::monomial(-alpha) + FormalSeries::monomial(alpha);
                    FormalSeries ys = y_uni(alpha, n, detail::preimage_window(win, sym.bounding_box()));
                    FormalSeries rhs = y_uni(alpha, n, win).scaled(2) + y_uni(alpha, n - 2, win);
                    o.require(equal_on_window(sym * ys, rhs, win), "three-term identity fails at n=" + std::to_string(n));
                }
            }
        }
    }
    // Closed forms against repeated convolution, k <= 30.
    const Weight alpha{2};
    const Box big = Box::cube(1, -2, 2 * 30 + 8);
    for (int n = 1; n <= 6; ++n) {
        auto ref = oracle::geometric_power(n, 30);
        FormalSeries s = s_pow(alpha, n, big);
        FormalSeries dp = d_plus(alpha) * s_pow(alpha, n, detail::preimage_window(big, d_plus(alpha).bounding_box()));
        FormalSeries closed = dplus_spow_closed(alpha, n, big);
        for (int k = 0; k <= 30; ++k) {
            o.require(s.coefficient(Weight{n + 2 * k}) == ref[k], "s^n coefficient differs");
            // d+ s^n at alpha^{(n-1)/2+k}: ref[k] + ref[k-1]
            Rational expect = ref[k] + (k > 0 ? ref[k - 1] : Rational(0));
            o.require(closed.coefficient(Weight{n - 1 + 2 * k}) == expect, "closed form for d+ s^n differs");
            o.require(dp.coefficient(Weight{n - 1 + 2 * k}) == expect, "d+ s^n product differs");
        }
    }
    if (o.pass) {
        o.detail = "sections, ladder, three-term and closed forms on [-25,25]";
    }
    return o;
}

struct KernelCase {
    std::string label;
    RootDatum datum;
    std::vector<Weight> roots;
    std::vector<int> powers;
};

std::vector<KernelCase> kernel_cases()
{
    const RootDatum a1 = RootDatum::named("A1"), bc = RootDatum::named("BC1");
    return {{"A1 n=1", a1, {Weight{2}}, {1}},
            {"A1 n=2", a1, {Weight{2}}, {2}},
            {"BC1 (1,1)", bc, {Weight{2}, Weight{4}}, {1, 1}}};
}

Outcome kernel_completeness()
{
    Outcome o;
    const Box win = Box::cube(1, -20, 20);
    int members = 0, rejects = 0;
    for (const auto& c : kernel_cases()) {
        const Weight l0{0};
        auto basis = kernel_basis(c.roots, c.powers, l0, enumerate_representatives(c.roots, l0, win, c.datum), c.datum);
        std::vector<KernelGenerator> indep;
        for (auto i : independent_subset(basis, win)) {
            indep.push_back(basis[i]);
        }
        // Independent count against the dimension of the solution space of the difference operator.
        std::vector<std::int64_t> coords;
        for (const auto& r : c.roots) {
            coords.push_back(r[0]);
        }
        const std::size_t dim = oracle::kernel_dimension_rank1(oracle::dminus_stencil(coords, c.powers));
        o.require(indep.size() == dim, c.label + ": " + std::to_string(indep.size()) + " independent generators, kernel dimension "
                                           + std::to_string(dim));
        FormalSeries t = FormalSeries::one(1);
        for (std::size_t i = 0; i < c.roots.size(); ++i) {
            t = t * power(d_minus(c.roots[i]), c.powers[i]);
        }
        const Box pre = detail::preimage_window(win, t.bounding_box());
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<Rational> coef;
            FormalSeries z = FormalSeries::on_window(1, {}, pre);
            for (const auto& g : indep) {
                coef.push_back(uniform(0, 3) == 0 ? Rational(0) : random_rational());
                z = z + g.expand(pre).scaled(coef.back());
            }
            o.require(equal_on_window(t_apply(c.roots, c.powers, z), FormalSeries::on_window(1, {}, win), win),
                      c.label + ": t does not annihilate a span element");
            auto back = membership_coordinates(z, indep, win);
            o.require(back && *back == coef, c.label + ": membership coordinates do not round-trip");
            ++members;
        }
        for (int trial = 0; trial < 17; ++trial) {
            FormalSeries z = FormalSeries::on_window(1, {}, pre);
            for (const auto& g : indep) {
                z = z + g.expand(pre).scaled(random_rational());
            }
            z = z + random_poly(1, 15, uniform(1, 3));
            auto back = membership_coordinates(z, indep, win);
            bool killed = equal_on_window(t_apply(c.roots, c.powers, z), FormalSeries::on_window(1, {}, win), win);
            o.require(!back && !killed, c.label + ": a perturbed series was accepted");
            ++rejects;
        }
    }
    if (o.pass) {
        o.detail = std::to_string(members) + " members round-tripped, " + std::to_string(rejects) + " non-members rejected";
    }
    return o;
}

Outcome so3_example()
{
    Outcome o;
    auto data = so3_kernel_generators(21);
    for (int k = 0; k <= 20; ++k) {
        o.require(data.kappa1[k] == 1 + 2 * k, "kappa1 coefficient at Z_" + std::to_string(k));
        o.require(data.kappa2[k + 1] == k / 2 + 1, "kappa2 coefficient at Z_" + std::to_string(k + 1));
    }
    o.require(data.antisymmetric, "generators are not tau-antisymmetric");
    o.require(data.kappa_independent, "kappa1, kappa2 are dependent");
    o.require(data.all_in_span(), "a generator lies outside span{kappa1, kappa2}");
    const std::vector<std::pair<Rational, Rational>> expected{{1, 0}, {1, -4}, {0, 1}, {0, 1}};
    for (std::size_t i = 0; i < expected.size() && data.all_in_span(); ++i) {
        const auto& c = *data.coordinates[i];
        o.require(c[0] == expected[i].first && c[1] == expected[i].second, "coordinates of " + data.generator_labels[i]);
    }
    auto thr = so3_thresholds(data);
    o.require(thr.disjointness == 2, "disjointness threshold " + std::to_string(thr.disjointness));
    o.require(thr.condition_s == 3, "condition (S) threshold " + std::to_string(thr.condition_s));
    o.require(thr.disjointness != thr.condition_s, "thresholds coincide");
    if (o.pass) {
        o.detail = "kappa coefficients for k <= 20, 4 generators in span, thresholds a>=2 (disjoint) vs a>=3 (S)";
    }
    return o;
}

Outcome sl2_branching()
{
    Outcome o;
    const Box win = Box::cube(1, 0, 60);
    int pairs = 0;
    for (int m = 2; m <= 6; ++m) {
        for (int n = 2; n <= 6; ++n) {
            auto r = sl2_tensor_discrete(m, n, 10, win);
            o.require(r.verified(), "D_" + std::to_string(m) + " (x) D_" + std::to_string(n) + " certificate failed");
            o.require(r.family && r.family->base == m + n && r.family->step == 2 && r.family->mult == 1, "family");
            ++pairs;
        }
    }
    const Box pw = Box::cube(1, -30, 30);
    for (int delta = 0; delta <= 1; ++delta) {
        auto r = sl2_principal_restriction(delta, pw);
        o.require(r.verified(), "principal series certificate failed for delta=" + std::to_string(delta));
        FormalSeries::Terms expect;
        for (int c = -30; c <= 30; ++c) {
            if ((c - delta) % 2 == 0) {
                expect[Weight{c}] = 1;
            }
        }
        o.require(equal_on_window(*r.ktypes, FormalSeries::on_window(1, expect, pw), pw), "principal series K-types");
    }
    // The difference as stated; the sum is what the limit characters actually cancel in.
    const bool difference = limit_pair_annihilated(-1, pw);
    const bool sum = limit_pair_annihilated(1, pw);
    o.require(difference, std::string("(1-[-alpha]) does not annihilate iota([D_1]) - iota([D_-1]) on [-30,28]; ") +
                              "it does annihilate the sum: " + (sum ? "yes" : "no"));
    if (o.pass) {
        o.detail = std::to_string(pairs) + " tensor pairs, both principal series, limit pair";
    }
    return o;
}

Outcome vanishing_theorem()
{
    Outcome o;
    const Box win = Box::cube(1, -20, 20);
    auto cases = kernel_cases();
    cases.push_back({"A1 n=3", RootDatum::named("A1"), {Weight{2}}, {3}});
    std::string summary;
    for (const auto& c : cases) {
        const Weight l0{0};
        auto basis = kernel_basis(c.roots, c.powers, l0, enumerate_representatives(c.roots, l0, win, c.datum), c.datum);
        auto rep = vanishing_check(basis, c.roots, c.powers, l0, win, c.datum);
        o.require(rep.generators_ok(), c.label + ": a generator vanishes on its regularity strip");
        o.require(rep.injective_on_strip(), c.label + ": a nonzero span element vanishes on the strip");
        summary += (summary.empty() ? "" : ", ") + c.label + " rank " + std::to_string(rep.independent);
    }
    if (o.pass) {
        o.detail = summary;
    }
    return o;
}

Outcome translation()
{
    Outcome o;
    int cases = 0;
    for (const std::string name : {"A1", "A2"}) {
        const RootDatum d = RootDatum::named(name);
        const auto group = generate_weyl_group(d);
        const Weight rho = d.rho();
        for (int i = 0; i < 10; ++i) {
            const Weight lam = random_dominant(d, 4);
            const Weight mu = random_dominant(d, 3);
            // Arbitrary coefficients n_w on the orbit terms.
            FormalSeries num = FormalSeries::zero(d.rank());
            std::map<Weight, Rational> n_by_w;
            for (const auto& w : group) {
                Rational c = random_rational();
                num.add_term(w.apply(lam + rho) - rho, c);
                n_by_w[w.apply(lam + mu + rho) - rho] = c;
            }
            FormalSeries moved = translate_numerator(num, lam, mu, rho, group, d);
            for (const auto& [w, c] : n_by_w) {
                o.require(moved.coefficient(w) == c, "coefficient n_w not preserved at " + w.str());
            }
            o.require(moved.terms().size() == n_by_w.size(), "translated numerator has extra terms");
            FormalSeries back = translate_numerator(moved, lam + mu, -mu, rho, group, d);
            o.require(equal_finite(back, num), "inverse translation does not round-trip");
            FormalSeries wn = translate_numerator(weyl_numerator(lam, group, rho), lam, mu, rho, group, d);
            o.require(equal_finite(wn, weyl_numerator(lam + mu, group, rho)), "Weyl numerator not carried to Weyl numerator");
            ++cases;
        }
    }
    if (o.pass) {
        o.detail = std::to_string(cases) + " random cases on A1, A2";
    }
    return o;
}

} // namespace

int main()
{
    struct Criterion {
        int id;
        std::string name;
        std::function<Outcome()> run;
        double budget_s;
    };
    const std::vector<Criterion> criteria{
        {1, "denominator formula", denominator_formula, 1.0},
        {2, "Weyl character formula vs Freudenthal", weyl_character_formula, 5.0},
        {3, "Kostant cohomology and Euler numerator", kostant_euler, 2.0},
        {4, "transitivity through a maximal parabolic", transitivity, 0},
        {5, "multiplicativity on tensor products", multiplicativity, 0},
        {6, "kernel calculus identities", kernel_identities, 5.0},
        {7, "kernel completeness and membership", kernel_completeness, 0},
        {8, "GL(3)/SO(3) kernel and thresholds", so3_example, 0},
        {9, "SL(2) branching", sl2_branching, 0},
        {10, "vanishing on regularity strips", vanishing_theorem, 0},
        {11, "translation of numerators", translation, 0},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (o.pass && c.budget_s > 0 && secs > c.budget_s) {
            o.pass = false;
            o.detail = "over time budget";
        }
        char timing[32];
        std::snprintf(timing, sizeof timing, "%.3fs", secs);
        std::cout << (o.pass ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << " (" << timing << "): " << o.detail
                  << "\n";
        failures += o.pass ? 0 : 1;
    }
    std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed\n";
    return failures == 0 ? 0 : 1;
}
