#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <numeric>
#include <set>
#include <vector>

#include "error.hpp"
#include "lattice.hpp"
#include "linalg.hpp"
#include "series.hpp"

namespace algchar {

using IntMatrix = Matrix<std::int64_t>;

struct WeylElement {
    IntMatrix matrix;
    int length = 0;

    Weight apply(const Weight& w) const
    {
        if (w.rank() != matrix.cols()) {
            throw DomainError("Weyl element and weight have different ranks");
        }
        Weight r = Weight::zero(matrix.rows());
        for (std::size_t i = 0; i < matrix.rows(); ++i) {
            for (std::size_t j = 0; j < matrix.cols(); ++j) {
                r[i] += matrix(i, j) * w[j];
            }
        }
        return r;
    }

    int sign() const { return length % 2 == 0 ? 1 : -1; }
    bool is_identity() const { return matrix == IntMatrix::identity(matrix.rows()); }
};

struct SignElement {
    std::vector<int> signs;

    static SignElement identity(std::size_t rank) { return {std::vector<int>(rank, 1)}; }
    static SignElement simple(std::size_t rank, std::size_t i)
    {
        SignElement s = identity(rank);
        s.signs.at(i) = -1;
        return s;
    }
    friend SignElement operator*(const SignElement& a, const SignElement& b)
    {
        if (a.signs.size() != b.signs.size()) {
            throw DomainError("sign elements of different ranks");
        }
        SignElement r = a;
        for (std::size_t i = 0; i < r.signs.size(); ++i) {
            r.signs[i] *= b.signs[i];
        }
        return r;
    }
    // prod_i signs_i^{coords_i}
    int character(const Weight& w) const
    {
        int c = 1;
        for (std::size_t i = 0; i < signs.size(); ++i) {
            if (signs[i] == -1 && w[i] % 2 != 0) {
                c = -c;
            }
        }
        return c;
    }
};

// Number of indivisible positive roots sent to negative roots.
inline int weyl_length(const IntMatrix& m, const RootDatum& datum)
{
    WeylElement e{m, 0};
    int len = 0;
    for (const auto& r : datum.positive_roots()) {
        if (datum.is_indivisible(r) && !datum.is_positive_root(e.apply(r))) {
            ++len;
        }
    }
    return len;
}

inline IntMatrix reflection_matrix(const Weight& alpha, const RootDatum& datum)
{
    const std::size_t d = datum.rank();
    IntMatrix m(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        Weight img = datum.reflect(alpha, Weight::unit(d, j));
        for (std::size_t i = 0; i < d; ++i) {
            m(i, j) = img[i];
        }
    }
    return m;
}

inline WeylElement reflection_element(const Weight& alpha, const RootDatum& datum)
{
    IntMatrix m = reflection_matrix(alpha, datum);
    return {m, weyl_length(m, datum)};
}

inline WeylElement compose(const WeylElement& a, const WeylElement& b, const RootDatum& datum)
{
    IntMatrix m = a.matrix * b.matrix;
    return {m, weyl_length(m, datum)};
}

inline bool canonical_less(const WeylElement& a, const WeylElement& b)
{
    if (a.length != b.length) {
        return a.length < b.length;
    }
    return a.matrix < b.matrix;
}

// Closure of the chosen simple reflections, in (length, matrix) order.
inline std::vector<WeylElement> generate_parabolic_subgroup(const RootDatum& datum,
                                                            const std::vector<std::size_t>& simple_subset,
                                                            std::size_t order_bound = 1000000)
{
    const std::size_t d = datum.rank();
    std::vector<IntMatrix> gens;
    for (auto i : simple_subset) {
        if (i >= d) {
            throw DomainError("simple root index " + std::to_string(i) + " out of range");
        }
        gens.push_back(reflection_matrix(datum.simple_roots()[i], datum));
    }
    std::set<std::vector<std::int64_t>> seen;
    std::vector<IntMatrix> found;
    std::deque<IntMatrix> queue{IntMatrix::identity(d)};
    seen.insert(queue.front().data());
    while (!queue.empty()) {
        IntMatrix m = queue.front();
        queue.pop_front();
        found.push_back(m);
        for (const auto& g : gens) {
            IntMatrix n = g * m;
            if (seen.insert(n.data()).second) {
                if (seen.size() > order_bound) {
                    throw DomainError("Weyl group order exceeds bound " + std::to_string(order_bound));
                }
                queue.push_back(n);
            }
        }
    }
    std::vector<WeylElement> group;
    for (const auto& m : found) {
        group.push_back({m, weyl_length(m, datum)});
    }
    std::sort(group.begin(), group.end(), canonical_less);
    return group;
}

inline std::vector<WeylElement> generate_weyl_group(const RootDatum& datum, std::size_t order_bound = 1000000)
{
    std::vector<std::size_t> all(datum.rank());
    std::iota(all.begin(), all.end(), 0);
    return generate_parabolic_subgroup(datum, all, order_bound);
}

inline WeylElement inverse(const WeylElement& w, const std::vector<WeylElement>& group)
{
    const auto id = IntMatrix::identity(w.matrix.rows());
    for (const auto& v : group) {
        if (v.matrix * w.matrix == id) {
            return v;
        }
    }
    throw InternalError("element has no inverse in the given group");
}

// Trivial subgroup, e.g. W(K,T) for SL(2).
inline std::vector<WeylElement> trivial_group(std::size_t rank) { return {WeylElement{IntMatrix::identity(rank), 0}}; }

// {1, tau} with tau = -1 on a rank-one lattice, e.g. W(K,T) for SO(3).
inline std::vector<WeylElement> tau_group(const RootDatum& datum)
{
    if (datum.rank() != 1) {
        throw DomainError("tau is defined for rank one only");
    }
    IntMatrix t(1, 1);
    t(0, 0) = -1;
    return {WeylElement{IntMatrix::identity(1), 0}, WeylElement{t, weyl_length(t, datum)}};
}

namespace detail {

inline bool is_signed_permutation(const IntMatrix& m)
{
    for (std::size_t i = 0; i < m.rows(); ++i) {
        int nz = 0;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (m(i, j) != 0) {
                if (m(i, j) != 1 && m(i, j) != -1) {
                    return false;
                }
                ++nz;
            }
        }
        if (nz != 1) {
            return false;
        }
    }
    return true;
}

inline std::vector<Weight> corners(const Box& b)
{
    std::vector<Weight> out;
    const std::size_t d = b.rank();
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
        Weight w = Weight::zero(d);
        for (std::size_t i = 0; i < d; ++i) {
            w[i] = (mask >> i) & 1 ? b[i].hi : b[i].lo;
        }
        out.push_back(w);
    }
    return out;
}

inline Box image_bounds(const WeylElement& w, const Box& b)
{
    Box r;
    bool first = true;
    for (const auto& c : corners(b)) {
        Box p = Box::point(w.apply(c));
        r = first ? p : hull(r, p);
        first = false;
    }
    return r;
}

} // namespace detail

inline FormalSeries act_on_series(const WeylElement& w, const FormalSeries& s)
{
    FormalSeries::Terms t;
    for (const auto& [mu, c] : s.terms()) {
        t[w.apply(mu)] += c;
    }
    if (s.is_finite()) {
        return FormalSeries::finite(s.rank(), t);
    }
    const auto& win = *s.window();
    Box box = detail::image_bounds(w, win.box);
    if (win.exact.empty()) {
        return FormalSeries::assemble(s.rank(), t, SupportWindow{box, win.exact});
    }
    Box exact = detail::image_bounds(w, win.exact);
    if (!detail::is_signed_permutation(w.matrix)) {
        // Shrink the bounding box until it sits inside the image of the exact box.
        // w is invertible over Z, so test containment through the preimage of the corners.
        const std::size_t d = s.rank();
        RationalMatrix m(d, d);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                m(i, j) = w.matrix(i, j);
            }
        }
        auto preimage_inside = [&](const Box& b) {
            for (const auto& c : detail::corners(b)) {
                std::vector<Rational> rhs(c.begin(), c.end());
                auto x = solve(m, rhs);
                for (std::size_t i = 0; i < d; ++i) {
                    if ((*x)[i] < win.exact[i].lo || (*x)[i] > win.exact[i].hi) {
                        return false;
                    }
                }
            }
            return true;
        };
        std::vector<Interval> iv = exact.intervals();
        while (!Box(iv).empty() && !preimage_inside(Box(iv))) {
            for (auto& i : iv) {
                ++i.lo;
                --i.hi;
            }
        }
        exact = Box(iv);
    }
    return FormalSeries::assemble(s.rank(), t, SupportWindow{box, exact});
}

inline FormalSeries act_sign(const SignElement& sigma, const FormalSeries& s)
{
    if (sigma.signs.size() != s.rank()) {
        throw DomainError("sign element rank mismatch");
    }
    FormalSeries::Terms t;
    for (const auto& [mu, c] : s.terms()) {
        t[mu] = sigma.character(mu) * c;
    }
    if (s.is_finite()) {
        return FormalSeries::finite(s.rank(), t);
    }
    return FormalSeries::assemble(s.rank(), t, *s.window());
}

} // namespace algchar
