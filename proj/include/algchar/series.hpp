#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "lattice.hpp"
#include "rational.hpp"

namespace algchar {

struct Interval {
    std::int64_t lo = 0;
    std::int64_t hi = -1;

    bool empty() const { return lo > hi; }
    bool contains(std::int64_t x) const { return lo <= x && x <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

// Axis-parallel box of lattice points. Empty if any interval is empty.
class Box {
public:
    Box() = default;
    explicit Box(std::vector<Interval> iv) : iv_(std::move(iv)) {}

    static Box cube(std::size_t rank, std::int64_t lo, std::int64_t hi)
    {
        return Box(std::vector<Interval>(rank, Interval{lo, hi}));
    }
    static Box point(const Weight& w)
    {
        std::vector<Interval> iv;
        for (auto x : w) {
            iv.push_back({x, x});
        }
        return Box(iv);
    }

    std::size_t rank() const { return iv_.size(); }
    const Interval& operator[](std::size_t i) const { return iv_[i]; }
    const std::vector<Interval>& intervals() const { return iv_; }

    bool empty() const
    {
        return std::any_of(iv_.begin(), iv_.end(), [](const Interval& i) { return i.empty(); });
    }

    bool contains(const Weight& w) const
    {
        if (w.rank() != rank()) {
            throw DomainError("box rank mismatch");
        }
        for (std::size_t i = 0; i < rank(); ++i) {
            if (!iv_[i].contains(w[i])) {
                return false;
            }
        }
        return true;
    }

    bool subset_of(const Box& o) const
    {
        if (empty()) {
            return true;
        }
        if (o.empty()) {
            return false;
        }
        for (std::size_t i = 0; i < rank(); ++i) {
            if (iv_[i].lo < o.iv_[i].lo || iv_[i].hi > o.iv_[i].hi) {
                return false;
            }
        }
        return true;
    }

    friend Box intersect(const Box& a, const Box& b)
    {
        std::vector<Interval> r;
        for (std::size_t i = 0; i < a.rank(); ++i) {
            r.push_back({std::max(a[i].lo, b[i].lo), std::min(a[i].hi, b[i].hi)});
        }
        return Box(r);
    }

    friend Box hull(const Box& a, const Box& b)
    {
        if (a.empty()) {
            return b;
        }
        if (b.empty()) {
            return a;
        }
        std::vector<Interval> r;
        for (std::size_t i = 0; i < a.rank(); ++i) {
            r.push_back({std::min(a[i].lo, b[i].lo), std::max(a[i].hi, b[i].hi)});
        }
        return Box(r);
    }

    // {x + p : x in this, p in [plo, phi]}
    Box dilated(const Weight& plo, const Weight& phi) const
    {
        std::vector<Interval> r;
        for (std::size_t i = 0; i < rank(); ++i) {
            r.push_back({iv_[i].lo + plo[i], iv_[i].hi + phi[i]});
        }
        return Box(r);
    }

    // {x : x - p in this for every p in [plo, phi]}
    Box eroded(const Weight& plo, const Weight& phi) const
    {
        std::vector<Interval> r;
        for (std::size_t i = 0; i < rank(); ++i) {
            r.push_back({iv_[i].lo + phi[i], iv_[i].hi + plo[i]});
        }
        return Box(r);
    }

    Box negated() const
    {
        std::vector<Interval> r;
        for (const auto& i : iv_) {
            r.push_back({-i.hi, -i.lo});
        }
        return Box(r);
    }

    void for_each_point(const std::function<void(const Weight&)>& f) const
    {
        if (empty() || rank() == 0) {
            return;
        }
        Weight w = Weight::zero(rank());
        for (std::size_t i = 0; i < rank(); ++i) {
            w[i] = iv_[i].lo;
        }
        while (true) {
            f(w);
            std::size_t i = rank();
            while (i-- > 0) {
                if (w[i] < iv_[i].hi) {
                    ++w[i];
                    break;
                }
                w[i] = iv_[i].lo;
            }
            if (i == static_cast<std::size_t>(-1)) {
                return;
            }
        }
    }

    std::string str() const
    {
        std::string s = "[";
        for (std::size_t i = 0; i < rank(); ++i) {
            s += (i ? "," : "") + std::to_string(iv_[i].lo) + ":" + std::to_string(iv_[i].hi);
        }
        return s + "]";
    }

    friend bool operator==(const Box&, const Box&) = default;

private:
    std::vector<Interval> iv_;
};

struct SupportWindow {
    Box box;
    Box exact;

    // Results of erosion may certify nothing; user-supplied windows must not.
    void validate(bool allow_empty_exact = false) const
    {
        if (box.rank() != exact.rank()) {
            throw ValidationError("window boxes have different ranks");
        }
        if (allow_empty_exact && exact.empty()) {
            return;
        }
        if (box.empty() || exact.empty()) {
            throw ValidationError("window box " + box.str() + " / exact " + exact.str() + " must be nonempty");
        }
        if (!exact.subset_of(box)) {
            throw ValidationError("exact box " + exact.str() + " is not inside " + box.str());
        }
    }
    friend bool operator==(const SupportWindow&, const SupportWindow&) = default;
};

// Sparse map weight -> rational. Finite series are Laurent polynomials and exact everywhere.
// Windowed series are truncations of unbounded series: terms live in `box`, and only
// coefficients inside `exact` are guaranteed to be the true ones.
class FormalSeries {
public:
    using Terms = std::map<Weight, Rational>;

    FormalSeries() = default;

    static FormalSeries zero(std::size_t rank)
    {
        FormalSeries s;
        s.rank_ = rank;
        return s;
    }
    static FormalSeries one(std::size_t rank) { return monomial(Weight::zero(rank)); }
    static FormalSeries monomial(const Weight& w, Rational c = 1)
    {
        FormalSeries s = zero(w.rank());
        s.add_term(w, c);
        return s;
    }
    static FormalSeries finite(std::size_t rank, const Terms& terms)
    {
        FormalSeries s = zero(rank);
        for (const auto& [w, c] : terms) {
            s.add_term(w, c);
        }
        return s;
    }
    // Terms outside the box are dropped.
    static FormalSeries windowed(std::size_t rank, const Terms& terms, SupportWindow win)
    {
        win.validate();
        return assemble(rank, terms, std::move(win));
    }
    // As windowed(), but the exact box may be empty (nothing certified).
    static FormalSeries assemble(std::size_t rank, const Terms& terms, SupportWindow win)
    {
        win.validate(true);
        if (win.box.rank() != rank) {
            throw ValidationError("window rank does not match series rank");
        }
        FormalSeries s = zero(rank);
        s.window_ = std::move(win);
        for (const auto& [w, c] : terms) {
            if (s.window_->box.contains(w)) {
                s.add_term(w, c);
            }
        }
        return s;
    }
    // A series that is exact on `region` (box = exact = region).
    static FormalSeries on_window(std::size_t rank, const Terms& terms, const Box& region)
    {
        return windowed(rank, terms, SupportWindow{region, region});
    }

    std::size_t rank() const { return rank_; }
    const Terms& terms() const { return terms_; }
    bool is_finite() const { return !window_.has_value(); }
    const std::optional<SupportWindow>& window() const { return window_; }
    bool is_zero() const { return terms_.empty(); }

    Rational coefficient(const Weight& w) const
    {
        auto it = terms_.find(w);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    bool certified_on(const Box& region) const
    {
        if (region.rank() != rank_) {
            throw DomainError("region rank mismatch");
        }
        return is_finite() || region.subset_of(window_->exact);
    }

    // Adds c to the coefficient of w, removing zeros.
    void add_term(const Weight& w, const Rational& c)
    {
        if (w.rank() != rank_) {
            throw DomainError("term " + w.str() + " has wrong rank for series of rank " + std::to_string(rank_));
        }
        if (window_ && !window_->box.contains(w)) {
            throw InternalError("term " + w.str() + " outside window box " + window_->box.str());
        }
        if (c == 0) {
            return;
        }
        auto [it, fresh] = terms_.emplace(w, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) {
                terms_.erase(it);
            }
        }
    }

    // Bounding box of stored terms; empty box for the zero series.
    Box bounding_box() const
    {
        if (terms_.empty()) {
            return Box::cube(rank_, 0, -1);
        }
        Weight lo = terms_.begin()->first, hi = lo;
        for (const auto& [w, c] : terms_) {
            for (std::size_t i = 0; i < rank_; ++i) {
                lo[i] = std::min(lo[i], w[i]);
                hi[i] = std::max(hi[i], w[i]);
            }
        }
        std::vector<Interval> iv;
        for (std::size_t i = 0; i < rank_; ++i) {
            iv.push_back({lo[i], hi[i]});
        }
        return Box(iv);
    }

    // Keeps only the terms inside region; the result is Finite (a plain polynomial).
    FormalSeries truncated(const Box& region) const
    {
        FormalSeries r = zero(rank_);
        for (const auto& [w, c] : terms_) {
            if (region.contains(w)) {
                r.add_term(w, c);
            }
        }
        return r;
    }

    FormalSeries scaled(const Rational& k) const
    {
        FormalSeries r = *this;
        if (k == 0) {
            r.terms_.clear();
            return r;
        }
        for (auto& [w, c] : r.terms_) {
            c *= k;
        }
        return r;
    }

    FormalSeries with_window(SupportWindow win) const { return assemble(rank_, terms_, std::move(win)); }

    // Structural equality: same terms and same support descriptor.
    friend bool operator==(const FormalSeries&, const FormalSeries&) = default;

    std::string str() const
    {
        if (terms_.empty()) {
            return "0";
        }
        std::string s;
        for (const auto& [w, c] : terms_) {
            if (!s.empty()) {
                s += " + ";
            }
            s += to_string(c) + "*" + w.str();
        }
        return s;
    }

private:
    std::size_t rank_ = 0;
    Terms terms_;
    std::optional<SupportWindow> window_;
};

namespace detail {

inline void check_same_rank(const FormalSeries& a, const FormalSeries& b)
{
    if (a.rank() != b.rank()) {
        throw DomainError("series rank mismatch");
    }
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
        --q;
    }
    return q;
}

} // namespace detail

inline FormalSeries add(const FormalSeries& a, const FormalSeries& b)
{
    detail::check_same_rank(a, b);
    std::optional<SupportWindow> win;
    if (!a.is_finite() || !b.is_finite()) {
        Box box = hull(a.bounding_box(), b.bounding_box());
        Box exact;
        if (!a.is_finite() && !b.is_finite()) {
            box = hull(box, hull(a.window()->box, b.window()->box));
            exact = intersect(a.window()->exact, b.window()->exact);
        } else {
            const auto& w = a.is_finite() ? *b.window() : *a.window();
            box = hull(box, w.box);
            exact = w.exact;
        }
        win = SupportWindow{box, exact};
    }
    FormalSeries::Terms t = a.terms();
    for (const auto& [w, c] : b.terms()) {
        t[w] += c;
    }
    std::erase_if(t, [](const auto& kv) { return kv.second == 0; });
    if (!win) {
        return FormalSeries::finite(a.rank(), t);
    }
    return FormalSeries::assemble(a.rank(), t, *win);
}

inline FormalSeries operator+(const FormalSeries& a, const FormalSeries& b) { return add(a, b); }
inline FormalSeries operator-(const FormalSeries& a) { return a.scaled(-1); }
inline FormalSeries operator-(const FormalSeries& a, const FormalSeries& b) { return add(a, -b); }
inline FormalSeries operator*(const Rational& k, const FormalSeries& a) { return a.scaled(k); }

// p * s for a Laurent polynomial p. On windows the exact box erodes by the support of p.
inline FormalSeries mul_poly_series(const FormalSeries& p, const FormalSeries& s)
{
    detail::check_same_rank(p, s);
    if (!p.is_finite()) {
        throw UnsupportedOperation("product of two unbounded series is not defined");
    }
    if (p.is_zero()) {
        return FormalSeries::zero(p.rank());
    }
    FormalSeries::Terms t;
    for (const auto& [u, a] : p.terms()) {
        for (const auto& [v, b] : s.terms()) {
            t[u + v] += a * b;
        }
    }
    std::erase_if(t, [](const auto& kv) { return kv.second == 0; });
    if (s.is_finite()) {
        return FormalSeries::finite(p.rank(), t);
    }
    Box pb = p.bounding_box();
    Weight lo = Weight::zero(p.rank()), hi = Weight::zero(p.rank());
    for (std::size_t i = 0; i < p.rank(); ++i) {
        lo[i] = pb[i].lo;
        hi[i] = pb[i].hi;
    }
    const auto& w = *s.window();
    Box exact = w.exact.empty() ? w.exact : w.exact.eroded(lo, hi);
    return FormalSeries::assemble(p.rank(), t, SupportWindow{w.box.dilated(lo, hi), exact});
}

// Product where at least one factor is a Laurent polynomial.
inline FormalSeries operator*(const FormalSeries& a, const FormalSeries& b)
{
    if (a.is_finite()) {
        return mul_poly_series(a, b);
    }
    if (b.is_finite()) {
        return mul_poly_series(b, a);
    }
    throw UnsupportedOperation("product of two unbounded series is not defined");
}

inline FormalSeries power(const FormalSeries& p, int n)
{
    if (n < 0) {
        throw DomainError("negative power");
    }
    FormalSeries r = FormalSeries::one(p.rank());
    for (int i = 0; i < n; ++i) {
        r = r * p;
    }
    return r;
}

// [w] * s
inline FormalSeries shift(const FormalSeries& s, const Weight& w) { return FormalSeries::monomial(w) * s; }

// Splits m by the sign of <mu, alpha>; ties go to the plus part.
inline std::pair<FormalSeries, FormalSeries> split_by_root(const FormalSeries& m, const Weight& alpha,
                                                           const RootDatum& datum)
{
    if (!datum.is_root(alpha)) {
        throw DomainError(alpha.str() + " is not a root of " + datum.name());
    }
    FormalSeries::Terms plus, minus;
    for (const auto& [w, c] : m.terms()) {
        (datum.pairing(w, alpha) >= 0 ? plus : minus)[w] = c;
    }
    if (m.is_finite()) {
        return {FormalSeries::finite(m.rank(), plus), FormalSeries::finite(m.rank(), minus)};
    }
    return {FormalSeries::assemble(m.rank(), plus, *m.window()), FormalSeries::assemble(m.rank(), minus, *m.window())};
}

// q with q * (1 - [-alpha])^m = num, if such a Laurent polynomial exists.
inline std::optional<FormalSeries> exact_divide(const FormalSeries& num, const Weight& alpha, int m = 1)
{
    if (!num.is_finite()) {
        throw UnsupportedOperation("exact_divide needs a Laurent polynomial numerator");
    }
    if (alpha.rank() != num.rank() || alpha.is_zero()) {
        throw DomainError("exact_divide: bad divisor weight " + alpha.str());
    }
    if (m < 0) {
        throw DomainError("exact_divide: negative multiplicity");
    }
    std::size_t p = 0;
    while (alpha[p] == 0) {
        ++p;
    }
    FormalSeries cur = num;
    for (int step = 0; step < m; ++step) {
        // Group terms on lines key + t*alpha; solve q_t - q_{t+1} = n_t from the top.
        std::map<Weight, std::map<std::int64_t, Rational>> lines;
        for (const auto& [w, c] : cur.terms()) {
            std::int64_t t = detail::floor_div(w[p], alpha[p]);
            lines[w - t * alpha][t] = c;
        }
        FormalSeries::Terms q;
        for (const auto& [key, line] : lines) {
            Rational run = 0;
            std::int64_t top = line.rbegin()->first, bottom = line.begin()->first;
            for (std::int64_t t = top; t >= bottom; --t) {
                if (auto it = line.find(t); it != line.end()) {
                    run += it->second;
                }
                if (run != 0) {
                    q[key + t * alpha] = run;
                }
            }
            if (run != 0) {
                return std::nullopt;
            }
        }
        cur = FormalSeries::finite(num.rank(), q);
    }
    return cur;
}

// mu -> -mu on terms and windows.
inline FormalSeries dual(const FormalSeries& s)
{
    FormalSeries::Terms t;
    for (const auto& [w, c] : s.terms()) {
        t[-w] = c;
    }
    if (s.is_finite()) {
        return FormalSeries::finite(s.rank(), t);
    }
    return FormalSeries::assemble(s.rank(), t,
                                  SupportWindow{s.window()->box.negated(), s.window()->exact.negated()});
}

// Compares coefficients on region, which must be certified for both series.
inline bool equal_on_window(const FormalSeries& a, const FormalSeries& b, const Box& region)
{
    detail::check_same_rank(a, b);
    if (!a.certified_on(region) || !b.certified_on(region)) {
        throw UncertifiedWindow("region " + region.str() + " is not inside the exact windows of both series");
    }
    for (const auto* s : {&a, &b}) {
        for (const auto& [w, c] : s->terms()) {
            if (region.contains(w) && a.coefficient(w) != b.coefficient(w)) {
                return false;
            }
        }
    }
    return true;
}

// Coefficientwise equality of two Laurent polynomials.
inline bool equal_finite(const FormalSeries& a, const FormalSeries& b)
{
    if (!a.is_finite() || !b.is_finite()) {
        throw UnsupportedOperation("equal_finite needs Laurent polynomials");
    }
    return a.rank() == b.rank() && a.terms() == b.terms();
}

} // namespace algchar
