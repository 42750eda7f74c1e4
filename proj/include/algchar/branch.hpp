#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "charring.hpp"
#include "error.hpp"
#include "kernel.hpp"
#include "lattice.hpp"
#include "series.hpp"
#include "weyl.hpp"

namespace algchar {

// SL(2) conventions: rank one, alpha has coordinate 2, T = [alpha], and u = g_{-alpha},
// so W_q = 1 - T is the factor (1 - [-beta]) with beta = -alpha.
namespace sl2 {

inline const Weight alpha{2};
inline const Weight nil_weight{-2};
inline const std::string context = "SL2/q";

inline RootDatum datum() { return RootDatum::named("A1"); }
inline ParabolicDatum parabolic() { return ParabolicDatum::custom(datum(), {{nil_weight, 1}}, context); }

// rho(u) for u = g_{-alpha}
inline const Weight rho_u{-1};

} // namespace sl2

enum class SL2Kind { discrete_series, limit_discrete_series, principal_series, finite_dimensional };

struct SL2ModuleSpec {
    SL2Kind kind;
    int param; // m, sign, delta or n

    static SL2ModuleSpec discrete(int m)
    {
        if (m < 2) {
            throw DomainError("discrete series needs m >= 2");
        }
        return {SL2Kind::discrete_series, m};
    }
    static SL2ModuleSpec limit(int sign)
    {
        if (sign != 1 && sign != -1) {
            throw DomainError("limit of discrete series needs sign +1 or -1");
        }
        return {SL2Kind::limit_discrete_series, sign};
    }
    static SL2ModuleSpec principal(int delta)
    {
        if (delta != 0 && delta != 1) {
            throw DomainError("principal series parity must be 0 or 1");
        }
        return {SL2Kind::principal_series, delta};
    }
    static SL2ModuleSpec finite_dim(int n)
    {
        if (n < 0) {
            throw DomainError("finite-dimensional module needs n >= 0");
        }
        return {SL2Kind::finite_dimensional, n};
    }

    std::string label() const
    {
        switch (kind) {
        case SL2Kind::discrete_series:
            return "D_" + std::to_string(param);
        case SL2Kind::limit_discrete_series:
            return param > 0 ? "D_1" : "D_-1";
        case SL2Kind::principal_series:
            return "PS_" + std::to_string(param);
        case SL2Kind::finite_dimensional:
            return "F_" + std::to_string(param);
        }
        return {};
    }

    // K-type multiplicities as a series in T^{1/2}, exact on the window.
    FormalSeries ktypes(const Box& window) const
    {
        FormalSeries::Terms t;
        window.for_each_point([&](const Weight& w) {
            const std::int64_t c = w[0];
            bool hit = false;
            switch (kind) {
            case SL2Kind::discrete_series:
                hit = c >= param && (c - param) % 2 == 0;
                break;
            case SL2Kind::limit_discrete_series:
                hit = param * c >= 1 && (c - 1) % 2 == 0;
                break;
            case SL2Kind::principal_series:
                hit = (c - param) % 2 == 0;
                break;
            case SL2Kind::finite_dimensional:
                hit = -param <= c && c <= param && (c + param) % 2 == 0;
                break;
            }
            if (hit) {
                t[w] = 1;
            }
        });
        return FormalSeries::on_window(1, t, window);
    }

    // c_q as numerator over 1 - T.
    CharacterFraction fraction() const
    {
        FormalSeries num = FormalSeries::zero(1);
        switch (kind) {
        case SL2Kind::discrete_series:
            num = FormalSeries::monomial(Weight{param});
            break;
        case SL2Kind::limit_discrete_series:
            num = FormalSeries::monomial(Weight{1}, param);
            break;
        case SL2Kind::principal_series:
            break;
        case SL2Kind::finite_dimensional:
            num = FormalSeries::monomial(Weight{-param}) - FormalSeries::monomial(Weight{param + 2});
            break;
        }
        return {num, {{sl2::nil_weight, 1}}, sl2::context};
    }

    // Harish-Chandra parameter (dominant representative); undefined for principal series.
    std::optional<Weight> infinitesimal_character() const
    {
        switch (kind) {
        case SL2Kind::discrete_series:
            return Weight{param - 1};
        case SL2Kind::limit_discrete_series:
            return Weight{0};
        case SL2Kind::principal_series:
            return std::nullopt;
        case SL2Kind::finite_dimensional:
            return Weight{param + 1};
        }
        return std::nullopt;
    }
};

struct BranchingFamily {
    int base = 0;
    int step = 0;
    int mult = 0;
};

struct BranchingResult {
    std::vector<std::pair<std::string, int>> terms;
    std::optional<BranchingFamily> family;
    Box window;
    std::vector<std::pair<std::string, bool>> certificate;
    std::optional<FormalSeries> ktypes;

    bool verified() const
    {
        return std::all_of(certificate.begin(), certificate.end(), [](const auto& c) { return c.second; });
    }
};

// D_m (x) D_n = sum_k D_{m+n+2k}, certified by the fraction identity and by K-type convolution.
inline BranchingResult sl2_tensor_discrete(int m, int n, int terms, const Box& window = Box::cube(1, 0, 60))
{
    if (m < 2 || n < 2) {
        throw DomainError("sl2_tensor_discrete needs m, n >= 2");
    }
    if (terms < 0) {
        throw DomainError("terms must be nonnegative");
    }
    detail::require_window(window);
    if (window.rank() != 1 || window[0].lo < 0) {
        throw DomainError("tensor window must be a rank-one box of nonnegative coordinates");
    }
    BranchingResult r;
    r.window = window;
    r.family = BranchingFamily{m + n, 2, 1};
    for (int k = 0; k < terms; ++k) {
        r.terms.emplace_back(SL2ModuleSpec::discrete(m + n + 2 * k).label(), 1);
    }

    // Fraction side: c(D_m) c(D_n) = T^{(m+n)/2}/(1-T)^2 against F/(1-T) with F = sum_k T^{(m+n)/2+k}.
    CharacterFraction lhs = frac_mul(SL2ModuleSpec::discrete(m).fraction(), SL2ModuleSpec::discrete(n).fraction());
    FormalSeries::Terms ft;
    window.for_each_point([&](const Weight& w) {
        if (w[0] >= m + n && (w[0] - m - n) % 2 == 0) {
            ft[w] = 1;
        }
    });
    FormalSeries f = FormalSeries::on_window(1, ft, window);
    FormalSeries lhs_cross = lhs.numerator * (FormalSeries::one(1) - FormalSeries::monomial(sl2::alpha));
    FormalSeries rhs_cross = lhs.denominator_poly() * f;
    Box exact = rhs_cross.window()->exact;
    r.certificate.emplace_back("fraction identity on " + exact.str(),
                               !exact.empty() && equal_on_window(lhs_cross, rhs_cross, exact));

    // K-type side: all K-types are nonnegative, so truncated factors give the exact convolution.
    FormalSeries km = SL2ModuleSpec::discrete(m).ktypes(window).truncated(window);
    FormalSeries kn = SL2ModuleSpec::discrete(n).ktypes(window).truncated(window);
    FormalSeries conv = (km * kn).truncated(window);
    FormalSeries sum = FormalSeries::zero(1);
    for (int k = 0; m + n + 2 * k <= window[0].hi; ++k) {
        sum = sum + SL2ModuleSpec::discrete(m + n + 2 * k).ktypes(window).truncated(window);
    }
    r.certificate.emplace_back("K-type convolution on " + window.str(), equal_finite(conv, sum));
    r.ktypes = FormalSeries::on_window(1, conv.terms(), window);
    return r;
}

// Restriction of the principal series to SO(2): every K-type of parity delta once.
inline BranchingResult sl2_principal_restriction(int delta, const Box& window)
{
    detail::require_window(window);
    auto ps = SL2ModuleSpec::principal(delta);
    BranchingResult r;
    r.window = window;
    FormalSeries iota = ps.ktypes(window);
    for (const auto& [w, c] : iota.terms()) {
        r.terms.emplace_back("K_" + std::to_string(w[0]) + "/2", static_cast<int>(to_int64(c)));
    }
    FormalSeries killed = (FormalSeries::one(1) - FormalSeries::monomial(-sl2::alpha)) * iota;
    Box exact = killed.window()->exact;
    r.certificate.emplace_back("(1-[-alpha]) annihilates on " + exact.str(),
                               !exact.empty() && equal_on_window(killed, FormalSeries::zero(1), exact));
    // alpha^{(delta-1)/2} y^{(1)}
    FormalSeries shift_mono = FormalSeries::monomial(Weight{delta - 1});
    FormalSeries y = shift_mono * y_uni(sl2::alpha, 1, detail::preimage_window(window, shift_mono.bounding_box()));
    r.certificate.emplace_back("equals alpha^{(delta-1)/2} y^(1) on " + window.str(), equal_on_window(iota, y, window));
    r.ktypes = iota;
    return r;
}

// (1-[-alpha]) (iota(D_1) + sign * iota(D_-1)) vanishes on the eroded window.
inline bool limit_pair_annihilated(int sign, const Box& window)
{
    FormalSeries d1 = SL2ModuleSpec::limit(1).ktypes(window);
    FormalSeries dm1 = SL2ModuleSpec::limit(-1).ktypes(window);
    FormalSeries z = sign > 0 ? d1 + dm1 : d1 - dm1;
    FormalSeries killed = (FormalSeries::one(1) - FormalSeries::monomial(-sl2::alpha)) * z;
    Box exact = killed.window()->exact;
    if (exact.empty()) {
        throw UncertifiedWindow("window too small for the limit-pair check");
    }
    return equal_on_window(killed, FormalSeries::zero(1), exact);
}

// GL(3)/SO(3): the numerator shift lambda0 = -alpha/2 turns the SO(3) class Z_{k alpha}
// into alpha^{1/2+k} - alpha^{-1/2-k}.
struct SO3KernelData {
    int max_k = 0;
    std::vector<Rational> kappa1;
    std::vector<Rational> kappa2;
    std::vector<std::string> generator_labels;
    std::vector<std::vector<Rational>> generator_folds;
    std::vector<std::optional<std::vector<Rational>>> coordinates;
    bool antisymmetric = false;
    bool kappa_independent = false;

    bool all_in_span() const
    {
        return std::all_of(coordinates.begin(), coordinates.end(), [](const auto& c) { return c.has_value(); });
    }
};

namespace detail {

inline std::vector<Rational> fold_so3(const FormalSeries& z, int max_k, const Weight& lambda0)
{
    std::vector<Rational> out;
    for (int k = 0; k <= max_k; ++k) {
        out.push_back(z.coefficient(Weight{2 * k} - lambda0));
    }
    return out;
}

} // namespace detail

inline SO3KernelData so3_kernel_generators(int max_k)
{
    if (max_k < 2) {
        throw DomainError("so3_kernel_generators needs at least k = 0..2 for a certified rank");
    }
    const Weight a{2}, a2{4}, lambda0{-1};
    const std::int64_t reach = 2 * max_k + 3;
    const Box window = Box::cube(1, -reach, reach);
    auto with_multiplier = [&](const FormalSeries& p, auto make) {
        return (p * make(detail::preimage_window(window, p.bounding_box()))).with_window(SupportWindow{window, window});
    };
    std::vector<std::pair<std::string, FormalSeries>> gens;
    gens.emplace_back("d+(a) y_a^(2)", with_multiplier(d_plus(a), [&](const Box& b) { return y_uni(a, 2, b); }));
    gens.emplace_back("d-(a) y_2a^(1)", with_multiplier(d_minus(a), [&](const Box& b) { return y_uni(a2, 1, b); }));
    gens.emplace_back("d+(a) y_2a^(2)", with_multiplier(d_plus(a), [&](const Box& b) { return y_uni(a2, 2, b); }));
    gens.emplace_back("y_(a,2a)^(1,1)", y_multi({a, a2}, {1, 1}, window));

    SO3KernelData out;
    out.max_k = max_k;
    for (int k = 0; k <= max_k; ++k) {
        out.kappa1.push_back(1 + 2 * k);
        out.kappa2.push_back(k == 0 ? 0 : (k - 1) / 2 + 1);
    }
    RationalMatrix kappa(max_k + 1, 2);
    for (int k = 0; k <= max_k; ++k) {
        kappa(k, 0) = out.kappa1[k];
        kappa(k, 1) = out.kappa2[k];
    }
    out.kappa_independent = rank(kappa) == 2;

    const WeylElement tau = tau_group(RootDatum::named("BC1"))[1];
    out.antisymmetric = true;
    for (const auto& [label, z] : gens) {
        // The sign-character projection (z - tau z)/2 must leave z unchanged.
        FormalSeries proj = (z - act_on_series(tau, z)).scaled(Rational(1, 2));
        Box inner = Box::cube(1, -(2 * max_k + 1), 2 * max_k + 1);
        out.antisymmetric = out.antisymmetric && equal_on_window(proj, z, inner);
        out.generator_labels.push_back(label);
        out.generator_folds.push_back(detail::fold_so3(proj, max_k, lambda0));
        out.coordinates.push_back(solve(kappa, out.generator_folds.back()));
    }
    return out;
}

// One failing instance of a regularity inequality.
struct RegularityViolation {
    Weight lambda;
    std::size_t weyl_index = 0;
    std::vector<Weight> numbering;
    std::vector<int> n;
    Rational lhs;
    Rational rhs;
};

struct RegularityReport {
    bool ok = true;
    std::optional<RegularityViolation> first_violation;
    // b * #{beta in the count set non-orthogonal to some numbered root}, the bound on sum n_s over all s.
    int total_nsum_bound = 0;
    // Largest right-hand side met during the enumeration.
    Rational widest_strip = 0;
};

// |<w(lam) - lambda0, beta_1>| >= 1/2 <beta_1,beta_1> + sum_i (n_i+1)/2 <beta_1,beta_i> for all w, all
// numberings of the distinct roots, and all n with sum_{s in S} n_s <= b * #{beta in count_roots :
// <beta_i, beta> != 0 for some i in S}.
inline RegularityReport condition_Sprime_check(const std::vector<Weight>& inf_chars, const Weight& lambda0,
                                               std::vector<Weight> roots, const std::vector<Weight>& count_roots,
                                               int b, const std::vector<WeylElement>& group, const RootDatum& datum)
{
    if (b < 0) {
        throw DomainError("exponent b must be nonnegative");
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    const std::size_t r = roots.size();
    if (r > 8) {
        throw DomainError("too many roots for exhaustive numbering");
    }
    RegularityReport rep;
    if (r == 0) {
        return rep;
    }
    // Subset bounds, indexed by bitmask over positions in the numbering.
    auto subset_bound = [&](const std::vector<Weight>& numbering, std::size_t mask) {
        int c = 0;
        for (const auto& beta : count_roots) {
            for (std::size_t i = 0; i < r; ++i) {
                if (((mask >> i) & 1) && datum.pairing(numbering[i], beta) != 0) {
                    ++c;
                    break;
                }
            }
        }
        return b * c;
    };
    rep.total_nsum_bound = subset_bound(roots, (std::size_t{1} << r) - 1);

    for (const auto& lam : inf_chars) {
        for (std::size_t wi = 0; wi < group.size(); ++wi) {
            const Weight mu = group[wi].apply(lam) - lambda0;
            std::vector<std::size_t> perm(r);
            for (std::size_t i = 0; i < r; ++i) {
                perm[i] = i;
            }
            do {
                std::vector<Weight> numbering;
                for (auto p : perm) {
                    numbering.push_back(roots[p]);
                }
                std::vector<int> bounds(std::size_t{1} << r);
                for (std::size_t mask = 1; mask < bounds.size(); ++mask) {
                    bounds[mask] = subset_bound(numbering, mask);
                }
                const Weight& b1 = numbering[0];
                const Rational lhs = abs(datum.pairing(mu, b1));
                std::vector<int> n(r, 0);
                while (true) {
                    bool admissible = true;
                    for (std::size_t mask = 1; mask < bounds.size() && admissible; ++mask) {
                        int s = 0;
                        for (std::size_t i = 0; i < r; ++i) {
                            if ((mask >> i) & 1) {
                                s += n[i];
                            }
                        }
                        admissible = s <= bounds[mask];
                    }
                    if (admissible) {
                        Rational rhs = Rational(1, 2) * datum.pairing(b1, b1);
                        for (std::size_t i = 0; i < r; ++i) {
                            rhs += Rational(n[i] + 1, 2) * datum.pairing(b1, numbering[i]);
                        }
                        rep.widest_strip = std::max(rep.widest_strip, rhs);
                        if (lhs < rhs && rep.ok) {
                            rep.ok = false;
                            rep.first_violation = RegularityViolation{lam, wi, numbering, n, lhs, rhs};
                        }
                    }
                    std::size_t i = r;
                    while (i-- > 0) {
                        if (n[i] < bounds[(std::size_t{1} << r) - 1]) {
                            ++n[i];
                            break;
                        }
                        n[i] = 0;
                    }
                    if (i == static_cast<std::size_t>(-1)) {
                        break;
                    }
                }
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
    }
    return rep;
}

// Condition (S): the b = 1 instance at lam + rho(n) for every K-type highest weight lam.
inline RegularityReport condition_S_check(const std::vector<std::pair<Weight, int>>& ktypes, const Weight& lambda0,
                                          const std::vector<Weight>& roots_u_plus_n, const std::vector<Weight>& roots_n,
                                          const std::vector<WeylElement>& group_k, const RootDatum& datum)
{
    Weight rho_n = Weight::zero(datum.rank());
    for (const auto& beta : roots_n) {
        rho_n += beta;
    }
    for (std::size_t i = 0; i < rho_n.rank(); ++i) {
        if (rho_n[i] % 2 != 0) {
            throw DomainError("rho(n) is not in the coordinate lattice");
        }
        rho_n[i] /= 2;
    }
    std::vector<Weight> shifted;
    for (const auto& [lam, m] : ktypes) {
        if (m != 0) {
            shifted.push_back(lam + rho_n);
        }
    }
    RegularityReport rep = condition_Sprime_check(shifted, lambda0, roots_u_plus_n, roots_n, 1, group_k, datum);
    if (rep.first_violation) {
        rep.first_violation->lambda -= rho_n;
    }
    return rep;
}

// Nilradical data of the GL(3)/SO(3) example on the rank-one torus of SO(3).
namespace gl3so3 {

inline RootDatum datum() { return RootDatum::named("BC1"); }
inline const std::vector<Weight> roots_u_plus_n{Weight{2}, Weight{4}};
inline const std::vector<Weight> roots_n{Weight{2}};
// lambda0 for the shifted numerator sum_w (-1)^{l(w)} [w(lam + rho(n))].
inline const Weight lambda0_shifted{0};

inline std::vector<std::pair<Weight, int>> ktypes_from(int a, int count)
{
    std::vector<std::pair<Weight, int>> out;
    for (int k = 0; k < count; ++k) {
        out.emplace_back(Weight{2 * (a + k)}, 1);
    }
    return out;
}

} // namespace gl3so3

struct SO3Thresholds {
    int disjointness = -1;
    int condition_s = -1;
};

// Least a such that no nonzero kernel element avoids Z_0..Z_{a-1}, and least a for which condition (S)
// holds for K-types a alpha, (a+1) alpha, ...
inline SO3Thresholds so3_thresholds(const SO3KernelData& data, int max_a = 10)
{
    SO3Thresholds t;
    for (int a = 0; a <= std::min(max_a, data.max_k); ++a) {
        RationalMatrix m(a, 2);
        for (int k = 0; k < a; ++k) {
            m(k, 0) = data.kappa1[k];
            m(k, 1) = data.kappa2[k];
        }
        if (a > 0 && rank(m) == 2) {
            t.disjointness = a;
            break;
        }
    }
    const RootDatum d = gl3so3::datum();
    const auto group = tau_group(d);
    for (int a = 0; a <= max_a; ++a) {
        auto rep = condition_S_check(gl3so3::ktypes_from(a, 8), gl3so3::lambda0_shifted, gl3so3::roots_u_plus_n,
                                     gl3so3::roots_n, group, d);
        if (rep.ok) {
            t.condition_s = a;
            break;
        }
    }
    return t;
}

class AmbiguousUpToKernel : public DomainError {
public:
    AmbiguousUpToKernel(std::string what, std::vector<KernelGenerator> basis)
        : DomainError(std::move(what)), basis_(std::move(basis))
    {
    }
    const std::vector<KernelGenerator>& basis() const { return basis_; }

private:
    std::vector<KernelGenerator> basis_;
};

struct BlattnerCategory {
    // All K-types have coordinate >= min_ktype when set.
    std::optional<std::int64_t> min_ktype;
    // Multiplicities grow at most like |lambda|^bound_exponent.
    int bound_exponent = 0;
    // Known multiplicities.
    std::map<Weight, Rational> samples;
};

struct BlattnerResult {
    FormalSeries multiplicities;
    std::string certificate;
};

// The K-type function with the given character in the SL(2) setting, unique within the category.
inline BlattnerResult blattner_recover(const CharacterFraction& frac, const BlattnerCategory& cat,
                                      const Box& window = Box::cube(1, -40, 40))
{
    if (frac.rank() != 1 || window.rank() != 1) {
        throw DomainError("blattner_recover works in the rank-one SL(2) setting");
    }
    detail::require_window(window);
    int m = 0;
    for (const auto& [w, k] : frac.denominator) {
        if (w != sl2::nil_weight) {
            throw DomainError("denominator must be a power of 1 - T");
        }
        m = k;
    }
    if (cat.bound_exponent < 0) {
        throw DomainError("bound exponent must be nonnegative");
    }
    // Expansion in the direction of growing T: (1 - T)^{-m} = alpha^{-m/2} s_alpha^m.
    FormalSeries f0 = FormalSeries::on_window(1, {}, window);
    if (!frac.numerator.is_zero()) {
        if (m == 0) {
            f0 = f0 + frac.numerator;
        } else {
            FormalSeries p = frac.numerator * FormalSeries::monomial(Weight{-m});
            f0 = (p * s_pow(sl2::alpha, m, detail::preimage_window(window, p.bounding_box())))
                     .with_window(SupportWindow{window, window});
        }
    }
    auto basis = kernel_basis({sl2::alpha}, {cat.bound_exponent + 1}, Weight{0}, {Weight{0}}, sl2::datum());
    std::map<Weight, Rational> target;
    if (cat.min_ktype) {
        window.for_each_point([&](const Weight& w) {
            if (w[0] < *cat.min_ktype) {
                target[w] = 0;
            }
        });
    }
    for (const auto& [w, c] : cat.samples) {
        if (!window.contains(w)) {
            throw DomainError("sample weight " + w.str() + " lies outside the window");
        }
        target[w] = c;
    }
    if (target.empty()) {
        throw AmbiguousUpToKernel("no category constraint pins down the kernel component", basis);
    }
    std::vector<FormalSeries> cols;
    for (const auto& g : basis) {
        cols.push_back(g.expand(window));
    }
    RationalMatrix a(target.size(), basis.size());
    std::vector<Rational> rhs;
    std::size_t i = 0;
    for (const auto& [w, c] : target) {
        for (std::size_t j = 0; j < basis.size(); ++j) {
            a(i, j) = cols[j].coefficient(w);
        }
        rhs.push_back(c - f0.coefficient(w));
        ++i;
    }
    if (rank(a) < basis.size()) {
        throw AmbiguousUpToKernel("category constraints leave a nonzero kernel element undetermined", basis);
    }
    auto x = solve(a, rhs);
    if (!x) {
        throw DomainError("no K-type function in the category has this character");
    }
    FormalSeries f = f0;
    for (std::size_t j = 0; j < basis.size(); ++j) {
        f = f + cols[j].scaled((*x)[j]);
    }
    BlattnerResult res{f.with_window(SupportWindow{window, window}), {}};
    bool kernel_free = std::all_of(x->begin(), x->end(), [](const Rational& c) { return c == 0; });
    res.certificate = std::string("unique: the ") + std::to_string(target.size())
                      + " constrained weights meet no nonzero kernel element"
                      + (kernel_free ? "; no kernel correction needed" : "; kernel correction applied");
    return res;
}

} // namespace algchar
