#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "error.hpp"
#include "lattice.hpp"
#include "linalg.hpp"
#include "series.hpp"
#include "weyl.hpp"

namespace algchar {

namespace detail {

inline Weight half(const Weight& alpha)
{
    Weight h = alpha;
    for (std::size_t i = 0; i < h.rank(); ++i) {
        if (alpha[i] % 2 != 0) {
            throw DomainError(alpha.str() + " has no square root in the coordinate lattice");
        }
        h[i] = alpha[i] / 2;
    }
    return h;
}

// k >= 0 with base + k*step inside the box, as an inclusive range (empty if lo > hi).
inline std::pair<std::int64_t, std::int64_t> ray_range(const Weight& base, const Weight& step, const Box& box)
{
    std::int64_t lo = 0, hi = std::numeric_limits<std::int64_t>::max();
    for (std::size_t i = 0; i < base.rank(); ++i) {
        const auto& iv = box[i];
        if (step[i] == 0) {
            if (!iv.contains(base[i])) {
                return {1, 0};
            }
            continue;
        }
        std::int64_t a = iv.lo - base[i], b = iv.hi - base[i];
        std::int64_t klo, khi;
        if (step[i] > 0) {
            klo = -floor_div(-a, step[i]);
            khi = floor_div(b, step[i]);
        } else {
            klo = -floor_div(b, -step[i]);
            khi = floor_div(-a, -step[i]);
        }
        lo = std::max(lo, klo);
        hi = std::min(hi, khi);
    }
    if (hi == std::numeric_limits<std::int64_t>::max()) {
        throw DomainError("ray does not leave the window");
    }
    return {lo, hi};
}

// Window W' such that a product with a polynomial supported in pbox is exact on `target`
// whenever the other factor is exact on W'.
inline Box preimage_window(const Box& target, const Box& pbox)
{
    std::vector<Interval> iv;
    for (std::size_t i = 0; i < target.rank(); ++i) {
        iv.push_back({target[i].lo - pbox[i].hi, target[i].hi - pbox[i].lo});
    }
    return Box(iv);
}

inline void require_window(const Box& w)
{
    if (w.empty()) {
        throw DomainError("empty window " + w.str());
    }
}

inline void require_root(const Weight& alpha, const RootDatum& datum)
{
    if (!datum.is_root(alpha)) {
        throw DomainError(alpha.str() + " is not a root of " + datum.name());
    }
}

} // namespace detail

// alpha^{-m/2} + sign * alpha^{m/2}
inline FormalSeries d_pm(const Weight& alpha, int m, int sign)
{
    if (m < 0) {
        throw DomainError("d_pm: m must be nonnegative");
    }
    if (sign != 1 && sign != -1) {
        throw DomainError("d_pm: sign must be +1 or -1");
    }
    Weight h = m * detail::half(alpha);
    return FormalSeries::monomial(-h) + FormalSeries::monomial(h, sign);
}

inline FormalSeries d_plus(const Weight& alpha, int m = 1) { return d_pm(alpha, m, 1); }
inline FormalSeries d_minus(const Weight& alpha, int m = 1) { return d_pm(alpha, m, -1); }

// s_alpha^n = sum_k binom(n-1+k, n-1) alpha^{n/2+k}, exact on the window.
inline FormalSeries s_pow(const Weight& alpha, int n, const Box& window)
{
    if (n <= 0) {
        throw DomainError("s_pow: n must be positive");
    }
    detail::require_window(window);
    Weight base = n * detail::half(alpha);
    auto [lo, hi] = detail::ray_range(base, alpha, window);
    FormalSeries::Terms t;
    for (std::int64_t k = lo; k <= hi; ++k) {
        t[base + k * alpha] = Rational(binomial(n - 1 + k, n - 1));
    }
    return FormalSeries::on_window(alpha.rank(), t, window);
}

// w_alpha(s_alpha^n) = sum_k binom(n-1+k, n-1) alpha^{-n/2-k}
inline FormalSeries ws_pow(const Weight& alpha, int n, const Box& window)
{
    return dual(s_pow(alpha, n, window.negated()));
}

// d_{alpha,+} s_alpha^n from the closed form ((n-1+2k)/(n-1+k)) binom(n-1+k, n-1) at alpha^{(n-1)/2+k}.
inline FormalSeries dplus_spow_closed(const Weight& alpha, int n, const Box& window)
{
    if (n <= 0) {
        throw DomainError("dplus_spow_closed: n must be positive");
    }
    detail::require_window(window);
    Weight base = (n - 1) * detail::half(alpha);
    auto [lo, hi] = detail::ray_range(base, alpha, window);
    FormalSeries::Terms t;
    for (std::int64_t k = lo; k <= hi; ++k) {
        Rational c = (n == 1 && k == 0) ? Rational(1)
                                        : Rational(n - 1 + 2 * k, n - 1 + k) * Rational(binomial(n - 1 + k, n - 1));
        t[base + k * alpha] = c;
    }
    return FormalSeries::on_window(alpha.rank(), t, window);
}

// y^{(n)} = s^n + (-1)^{n+1} w_alpha s^n, and y^{(0)} = 0.
inline FormalSeries y_uni(const Weight& alpha, int n, const Box& window)
{
    if (n < 0) {
        throw DomainError("y_uni: n must be nonnegative");
    }
    detail::require_window(window);
    if (n == 0) {
        return FormalSeries::on_window(alpha.rank(), {}, window);
    }
    FormalSeries w = ws_pow(alpha, n, window);
    return s_pow(alpha, n, window) + (n % 2 == 1 ? w : -w);
}

namespace detail {

// A linear functional positive on every root in the list.
inline Weight positive_functional(const std::vector<Weight>& roots)
{
    const std::size_t d = roots.front().rank();
    std::vector<std::int64_t> c(d, -3);
    while (true) {
        Weight f(c);
        bool ok = true;
        for (const auto& r : roots) {
            std::int64_t v = 0;
            for (std::size_t i = 0; i < d; ++i) {
                v += f[i] * r[i];
            }
            if (v <= 0) {
                ok = false;
                break;
            }
        }
        if (ok) {
            return f;
        }
        std::size_t i = 0;
        while (i < d && c[i] == 3) {
            c[i++] = -3;
        }
        if (i == d) {
            throw DomainError("roots do not lie in an open half-space; the product of geometric series is undefined");
        }
        ++c[i];
    }
}

inline std::int64_t apply_functional(const Weight& f, const Weight& w)
{
    std::int64_t v = 0;
    for (std::size_t i = 0; i < w.rank(); ++i) {
        v += f[i] * w[i];
    }
    return v;
}

// prod_i s_{alpha_i}^{n_i}, exact on the window.
inline FormalSeries s_product(const std::vector<Weight>& roots, const std::vector<int>& powers, const Box& window)
{
    const std::size_t d = roots.front().rank();
    Weight f = positive_functional(roots);
    std::int64_t fmax = std::numeric_limits<std::int64_t>::min();
    for (const auto& c : corners(window)) {
        fmax = std::max(fmax, apply_functional(f, c));
    }
    // Smallest possible contribution of the factors after index i.
    std::vector<std::int64_t> rest(roots.size() + 1, 0);
    for (std::size_t i = roots.size(); i-- > 0;) {
        rest[i] = rest[i + 1] + apply_functional(f, powers[i] * half(roots[i]));
    }
    FormalSeries::Terms acc{{Weight::zero(d), Rational(1)}};
    for (std::size_t i = 0; i < roots.size(); ++i) {
        FormalSeries::Terms next;
        Weight base = powers[i] * half(roots[i]);
        for (const auto& [w, c] : acc) {
            Weight p = w + base;
            for (std::int64_t k = 0;; ++k, p += roots[i]) {
                if (apply_functional(f, p) + rest[i + 1] > fmax) {
                    break;
                }
                next[p] += c * Rational(binomial(powers[i] - 1 + k, powers[i] - 1));
            }
        }
        acc = std::move(next);
    }
    return FormalSeries::on_window(d, acc, window);
}

} // namespace detail

// prod s_{alpha_i}^{n_i} + (-1)^{1+sum n} prod (w_{alpha_i} s_{alpha_i})^{n_i}
inline FormalSeries y_multi(const std::vector<Weight>& roots, const std::vector<int>& powers, const Box& window)
{
    if (roots.empty() || roots.size() != powers.size()) {
        throw DomainError("y_multi: roots and powers must be nonempty and of equal length");
    }
    if (std::set<Weight>(roots.begin(), roots.end()).size() != roots.size()) {
        throw DomainError("y_multi: repeated roots");
    }
    int total = 0;
    for (int n : powers) {
        if (n <= 0) {
            throw DomainError("y_multi: powers must be positive");
        }
        total += n;
    }
    detail::require_window(window);
    if (roots.size() == 1) {
        return y_uni(roots[0], powers[0], window);
    }
    FormalSeries pos = detail::s_product(roots, powers, window);
    FormalSeries neg = dual(detail::s_product(roots, powers, window.negated()));
    return pos + ((1 + total) % 2 == 0 ? neg : -neg);
}

// p_alpha(m) = s_alpha m^+ - (w_alpha s_alpha) m^-, exact on the window; d_{alpha,-} p_alpha(m) = m.
inline FormalSeries section_p(const Weight& alpha, const FormalSeries& m, const Box& window, const RootDatum& datum)
{
    detail::require_root(alpha, datum);
    detail::require_window(window);
    if (!m.is_finite()) {
        throw UnsupportedOperation("section_p: m must be a Laurent polynomial");
    }
    auto [plus, minus] = split_by_root(m, alpha, datum);
    FormalSeries r = FormalSeries::on_window(m.rank(), {}, window);
    if (!plus.is_zero()) {
        r = r + plus * s_pow(alpha, 1, detail::preimage_window(window, plus.bounding_box()));
    }
    if (!minus.is_zero()) {
        r = r - minus * ws_pow(alpha, 1, detail::preimage_window(window, minus.bounding_box()));
    }
    return r;
}

// prod d_{alpha_i,-}^{n_i} * s
inline FormalSeries t_apply(const std::vector<Weight>& roots, const std::vector<int>& powers, const FormalSeries& s)
{
    if (roots.size() != powers.size()) {
        throw DomainError("t_apply: roots and powers differ in length");
    }
    FormalSeries p = FormalSeries::one(s.rank());
    for (std::size_t i = 0; i < roots.size(); ++i) {
        p = p * power(d_minus(roots[i]), powers[i]);
    }
    return p * s;
}

// rep * y_{roots}^{powers} * prod_{j in dplus} d_{roots_j,+}
struct KernelGenerator {
    std::vector<Weight> roots;
    std::vector<int> powers;
    std::vector<std::size_t> dplus;
    Weight representative;
    Weight lambda0;
    std::vector<std::size_t> removed;

    FormalSeries multiplier() const
    {
        FormalSeries p = FormalSeries::monomial(representative);
        for (auto j : dplus) {
            p = p * d_plus(roots[j]);
        }
        return p;
    }

    // Exact on the window.
    FormalSeries expand(const Box& window) const
    {
        FormalSeries p = multiplier();
        FormalSeries y = y_multi(roots, powers, detail::preimage_window(window, p.bounding_box()));
        return (p * y).with_window(SupportWindow{window, window});
    }

    std::string describe() const
    {
        std::string s = "[" + representative.str() + "]";
        for (auto j : dplus) {
            s += " d+" + roots[j].str();
        }
        s += " y";
        for (std::size_t i = 0; i < roots.size(); ++i) {
            s += (i ? "," : "(") + roots[i].str();
        }
        s += ")^(";
        for (std::size_t i = 0; i < powers.size(); ++i) {
            s += (i ? "," : "") + std::to_string(powers[i]);
        }
        return s + ")";
    }
};

// 0 <= <lam - lambda0, alpha>/<alpha, alpha> < 1/2
inline bool satisfies_repcondition(const Weight& lam, const Weight& lambda0, const Weight& alpha,
                                   const RootDatum& datum)
{
    Rational v = datum.pairing(lam - lambda0, alpha) / datum.pairing(alpha, alpha);
    return v >= 0 && v < Rational(1, 2);
}

// Monomials in the box usable as representatives for at least one retained root.
inline std::vector<Weight> enumerate_representatives(const std::vector<Weight>& roots, const Weight& lambda0,
                                                     const Box& box, const RootDatum& datum)
{
    std::vector<Weight> out;
    box.for_each_point([&](const Weight& w) {
        for (const auto& a : roots) {
            if (satisfies_repcondition(w, lambda0, a, datum)) {
                out.push_back(w);
                return;
            }
        }
    });
    return out;
}

// Generators of ker t_{roots}^{powers}: for each proper subset I of deleted indices, each
// representative admissible for the retained roots, each exponent vector 1 <= k <= n on the
// retained roots, and each subset J of retained roots carrying a d_+ factor.
inline std::vector<KernelGenerator> kernel_basis(const std::vector<Weight>& roots, const std::vector<int>& powers,
                                                 const Weight& lambda0, std::vector<Weight> reps,
                                                 const RootDatum& datum)
{
    const std::size_t r = roots.size();
    if (r == 0 || powers.size() != r) {
        throw DomainError("kernel_basis: roots and powers must be nonempty and of equal length");
    }
    if (r > 16) {
        throw DomainError("kernel_basis: too many roots");
    }
    if (std::set<Weight>(roots.begin(), roots.end()).size() != r) {
        throw DomainError("kernel_basis: repeated roots");
    }
    for (std::size_t i = 0; i < r; ++i) {
        detail::require_root(roots[i], datum);
        if (powers[i] <= 0) {
            throw DomainError("kernel_basis: powers must be positive");
        }
    }
    std::sort(reps.begin(), reps.end());
    reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
    std::set<Weight> used;

    // Deleted sets ordered by size, then lexicographically.
    std::vector<std::vector<std::size_t>> deleted;
    for (std::size_t mask = 0; mask + 1 < (std::size_t{1} << r); ++mask) {
        std::vector<std::size_t> del;
        for (std::size_t i = 0; i < r; ++i) {
            if ((mask >> i) & 1) {
                del.push_back(i);
            }
        }
        deleted.push_back(del);
    }
    std::stable_sort(deleted.begin(), deleted.end(),
                     [](const auto& a, const auto& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; });

    std::vector<KernelGenerator> out;
    for (const auto& del : deleted) {
        std::vector<Weight> kept;
        std::vector<int> top;
        for (std::size_t i = 0; i < r; ++i) {
            if (!std::binary_search(del.begin(), del.end(), i)) {
                kept.push_back(roots[i]);
                top.push_back(powers[i]);
            }
        }
        const std::size_t m = kept.size();
        std::vector<std::vector<std::size_t>> jsets;
        for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
            std::vector<std::size_t> j;
            for (std::size_t i = 0; i < m; ++i) {
                if ((mask >> i) & 1) {
                    j.push_back(i);
                }
            }
            jsets.push_back(j);
        }
        std::stable_sort(jsets.begin(), jsets.end(),
                         [](const auto& a, const auto& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; });
        for (const auto& rep : reps) {
            bool ok = std::all_of(kept.begin(), kept.end(),
                                  [&](const Weight& a) { return satisfies_repcondition(rep, lambda0, a, datum); });
            if (!ok) {
                continue;
            }
            used.insert(rep);
            std::vector<int> k(m, 1);
            while (true) {
                for (const auto& j : jsets) {
                    out.push_back(KernelGenerator{kept, k, j, rep, lambda0, del});
                }
                std::size_t i = m;
                while (i-- > 0) {
                    if (k[i] < top[i]) {
                        ++k[i];
                        break;
                    }
                    k[i] = 1;
                }
                if (i == static_cast<std::size_t>(-1)) {
                    break;
                }
            }
        }
    }
    for (const auto& rep : reps) {
        if (!used.count(rep)) {
            throw DomainError("representative " + rep.str() + " violates the boundedness condition for every root");
        }
    }
    return out;
}

namespace detail {

struct ExpandedSystem {
    RationalMatrix a;
    std::vector<Rational> b;
};

inline ExpandedSystem expand_system(const FormalSeries* z, const std::vector<KernelGenerator>& basis, const Box& window)
{
    std::vector<FormalSeries> cols;
    std::set<Weight> rows;
    for (const auto& g : basis) {
        cols.push_back(g.expand(window));
        for (const auto& [w, c] : cols.back().terms()) {
            rows.insert(w);
        }
    }
    if (z) {
        for (const auto& [w, c] : z->terms()) {
            if (window.contains(w)) {
                rows.insert(w);
            }
        }
    }
    ExpandedSystem sys{RationalMatrix(rows.size(), cols.size()), std::vector<Rational>(rows.size())};
    std::size_t i = 0;
    for (const auto& w : rows) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            sys.a(i, j) = cols[j].coefficient(w);
        }
        if (z) {
            sys.b[i] = z->coefficient(w);
        }
        ++i;
    }
    return sys;
}

} // namespace detail

// Indices of a maximal linearly independent subfamily on the window (greedy, in order).
inline std::vector<std::size_t> independent_subset(const std::vector<KernelGenerator>& basis, const Box& window)
{
    auto sys = detail::expand_system(nullptr, basis, window);
    return row_reduce(sys.a);
}

// Coordinates of z in the span of the basis on the window, or nullopt if z is not in the span.
inline std::optional<std::vector<Rational>> membership_coordinates(const FormalSeries& z,
                                                                   const std::vector<KernelGenerator>& basis,
                                                                   const Box& window)
{
    detail::require_window(window);
    if (!z.certified_on(window)) {
        throw UncertifiedWindow("series is not certified on " + window.str());
    }
    auto sys = detail::expand_system(&z, basis, window);
    if (rank(sys.a) != basis.size()) {
        throw RankDeficient("generators are linearly dependent on window " + window.str()
                            + "; enlarge the window or pass an independent subset");
    }
    return solve(sys.a, sys.b);
}

// |<lam - lambda0, alpha_i>| < (n_i+1)/2 <alpha_i,alpha_i> + sum_{j != i} n_j/2 <alpha_i,alpha_j>
inline bool in_regularity_strip(const Weight& lam, std::size_t i, const std::vector<Weight>& roots,
                                const std::vector<int>& powers, const Weight& lambda0, const RootDatum& datum)
{
    Rational lhs = abs(datum.pairing(lam - lambda0, roots[i]));
    Rational bound = Rational(powers[i] + 1, 2) * datum.pairing(roots[i], roots[i]);
    for (std::size_t j = 0; j < roots.size(); ++j) {
        if (j != i) {
            bound += Rational(powers[j], 2) * datum.pairing(roots[i], roots[j]);
        }
    }
    return lhs < bound;
}

inline bool in_any_regularity_strip(const Weight& lam, const std::vector<Weight>& roots,
                                    const std::vector<int>& powers, const Weight& lambda0, const RootDatum& datum)
{
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (in_regularity_strip(lam, i, roots, powers, lambda0, datum)) {
            return true;
        }
    }
    return false;
}

// True iff every stored coefficient inside some regularity strip vanishes.
inline bool regularity_strip_check(const FormalSeries& z, const std::vector<Weight>& roots,
                                   const std::vector<int>& powers, const Weight& lambda0, const RootDatum& datum)
{
    if (roots.size() != powers.size()) {
        throw DomainError("regularity_strip_check: roots and powers differ in length");
    }
    for (const auto& [w, c] : z.terms()) {
        if (in_any_regularity_strip(w, roots, powers, lambda0, datum)) {
            return false;
        }
    }
    return true;
}

// Lattice points of the window lying in the union of the regularity strips.
inline std::vector<Weight> strip_points(const Box& window, const std::vector<Weight>& roots,
                                        const std::vector<int>& powers, const Weight& lambda0, const RootDatum& datum)
{
    std::vector<Weight> out;
    window.for_each_point([&](const Weight& w) {
        if (in_any_regularity_strip(w, roots, powers, lambda0, datum)) {
            out.push_back(w);
        }
    });
    return out;
}

struct VanishingReport {
    // Per generator: some coefficient inside the union of strips is nonzero.
    std::vector<bool> nonzero_in_strip;
    std::size_t independent = 0;
    // Rank of the independent generators restricted to the strip points.
    std::size_t strip_rank = 0;
    std::size_t strip_size = 0;

    bool generators_ok() const
    {
        return std::all_of(nonzero_in_strip.begin(), nonzero_in_strip.end(), [](bool b) { return b; });
    }
    // Only the zero element of the span vanishes on the strip.
    bool injective_on_strip() const { return strip_rank == independent; }
};

inline VanishingReport vanishing_check(const std::vector<KernelGenerator>& basis, const std::vector<Weight>& roots,
                                       const std::vector<int>& powers, const Weight& lambda0, const Box& window,
                                       const RootDatum& datum)
{
    detail::require_window(window);
    VanishingReport rep;
    const auto strip = strip_points(window, roots, powers, lambda0, datum);
    rep.strip_size = strip.size();
    std::vector<FormalSeries> cols;
    for (const auto& g : basis) {
        cols.push_back(g.expand(window));
        bool hit = std::any_of(strip.begin(), strip.end(), [&](const Weight& w) { return cols.back().coefficient(w) != 0; });
        rep.nonzero_in_strip.push_back(hit);
    }
    const auto pivots = independent_subset(basis, window);
    rep.independent = pivots.size();
    RationalMatrix a(strip.size(), pivots.size());
    for (std::size_t i = 0; i < strip.size(); ++i) {
        for (std::size_t j = 0; j < pivots.size(); ++j) {
            a(i, j) = cols[pivots[j]].coefficient(strip[i]);
        }
    }
    rep.strip_rank = strip.empty() || pivots.empty() ? 0 : rank(a);
    return rep;
}

} // namespace algchar
