#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"
#include "linalg.hpp"
#include "rational.hpp"

namespace algchar {

// Integer coordinates with respect to the basis of half simple roots (scaled, see RootDatum::scale).
class Weight {
public:
    Weight() = default;
    Weight(std::initializer_list<std::int64_t> c) : c_(c) {}
    explicit Weight(std::vector<std::int64_t> c) : c_(std::move(c)) {}

    static Weight zero(std::size_t rank) { return Weight(std::vector<std::int64_t>(rank, 0)); }
    static Weight unit(std::size_t rank, std::size_t i, std::int64_t value = 1)
    {
        Weight w = zero(rank);
        w.c_.at(i) = value;
        return w;
    }

    std::size_t rank() const { return c_.size(); }
    std::int64_t operator[](std::size_t i) const { return c_[i]; }
    std::int64_t& operator[](std::size_t i) { return c_[i]; }
    const std::vector<std::int64_t>& coords() const { return c_; }
    auto begin() const { return c_.begin(); }
    auto end() const { return c_.end(); }

    bool is_zero() const
    {
        return std::all_of(c_.begin(), c_.end(), [](std::int64_t x) { return x == 0; });
    }

    Weight& operator+=(const Weight& o)
    {
        check_rank(o);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            c_[i] += o.c_[i];
        }
        return *this;
    }
    Weight& operator-=(const Weight& o)
    {
        check_rank(o);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            c_[i] -= o.c_[i];
        }
        return *this;
    }
    friend Weight operator+(Weight a, const Weight& b) { return a += b; }
    friend Weight operator-(Weight a, const Weight& b) { return a -= b; }
    friend Weight operator-(Weight a)
    {
        for (auto& x : a.c_) {
            x = -x;
        }
        return a;
    }
    friend Weight operator*(std::int64_t k, Weight a)
    {
        for (auto& x : a.c_) {
            x *= k;
        }
        return a;
    }

    friend auto operator<=>(const Weight&, const Weight&) = default;
    friend bool operator==(const Weight&, const Weight&) = default;

    std::string str() const
    {
        std::string s = "(";
        for (std::size_t i = 0; i < c_.size(); ++i) {
            s += (i ? "," : "") + std::to_string(c_[i]);
        }
        return s + ")";
    }

private:
    void check_rank(const Weight& o) const
    {
        if (o.rank() != rank()) {
            throw DomainError("weight rank mismatch: " + str() + " vs " + o.str());
        }
    }

    std::vector<std::int64_t> c_;
};

namespace detail {

inline Rational bilinear(const RationalMatrix& g, const Weight& a, const Weight& b)
{
    if (a.rank() != g.rows() || b.rank() != g.rows()) {
        throw DomainError("dimension mismatch: weights " + a.str() + ", " + b.str() + " against rank "
                          + std::to_string(g.rows()));
    }
    Rational s = 0;
    for (std::size_t i = 0; i < a.rank(); ++i) {
        if (a[i] == 0) {
            continue;
        }
        for (std::size_t j = 0; j < b.rank(); ++j) {
            if (b[j] != 0) {
                s += g(i, j) * a[i] * b[j];
            }
        }
    }
    return s;
}

// lam - (2<lam,alpha>/<alpha,alpha>) alpha, required to stay integral.
inline Weight reflect_raw(const RationalMatrix& g, const Weight& alpha, const Weight& lam)
{
    Rational k = 2 * bilinear(g, lam, alpha) / bilinear(g, alpha, alpha);
    Weight r = lam;
    for (std::size_t i = 0; i < r.rank(); ++i) {
        Rational v = Rational(lam[i]) - k * alpha[i];
        if (!is_integral(v)) {
            throw InternalError("reflection of " + lam.str() + " in " + alpha.str() + " leaves the lattice");
        }
        r[i] = to_int64(v);
    }
    return r;
}

inline bool positive_semidefinite(RationalMatrix m)
{
    const std::size_t n = m.rows();
    for (std::size_t k = 0; k < n; ++k) {
        if (m(k, k) < 0) {
            return false;
        }
        if (m(k, k) == 0) {
            for (std::size_t j = k + 1; j < n; ++j) {
                if (m(k, j) != 0) {
                    return false;
                }
            }
            continue;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            Rational f = m(i, k) / m(k, k);
            for (std::size_t j = k; j < n; ++j) {
                m(i, j) -= f * m(k, j);
            }
        }
    }
    return true;
}

} // namespace detail

class RootDatum {
public:
    // Roots are given with multiplicity; negatives are added automatically.
    // Simple roots are the vectors 2*scale*e_i, which must be roots.
    static RootDatum from_data(std::string name, RationalMatrix gram, const std::vector<std::pair<Weight, int>>& roots,
                               std::int64_t scale = 1)
    {
        RootDatum d;
        d.name_ = std::move(name);
        d.rank_ = gram.rows();
        d.scale_ = scale;
        d.gram_ = std::move(gram);
        if (d.gram_.cols() != d.rank_ || d.rank_ == 0) {
            throw ValidationError("gram matrix must be square and nonempty");
        }
        if (scale <= 0) {
            throw ValidationError("scale must be positive");
        }
        for (std::size_t i = 0; i < d.rank_; ++i) {
            for (std::size_t j = 0; j < d.rank_; ++j) {
                if (d.gram_(i, j) != d.gram_(j, i)) {
                    throw ValidationError("gram matrix is not symmetric");
                }
            }
        }
        if (!detail::positive_semidefinite(d.gram_)) {
            throw ValidationError("gram matrix is not positive semidefinite");
        }
        for (const auto& [w, m] : roots) {
            if (w.rank() != d.rank_) {
                throw ValidationError("root " + w.str() + " has wrong rank");
            }
            if (m <= 0) {
                throw ValidationError("root " + w.str() + " has nonpositive multiplicity");
            }
            for (const Weight& v : {w, -w}) {
                auto [it, fresh] = d.mult_.emplace(v, m);
                if (!fresh && it->second != m) {
                    throw ValidationError("root " + v.str() + " listed with conflicting multiplicities");
                }
            }
        }
        d.finish();
        return d;
    }

    // A1, A1xA1, A2, B2, G2, BC1.
    static RootDatum named(std::string_view label)
    {
        // Symmetric form on simple roots, short roots of length 2.
        std::vector<std::vector<std::int64_t>> b;
        if (label == "A1" || label == "BC1") {
            b = {{2}};
        } else if (label == "A1xA1") {
            b = {{2, 0}, {0, 2}};
        } else if (label == "A2") {
            b = {{2, -1}, {-1, 2}};
        } else if (label == "B2") {
            b = {{4, -2}, {-2, 2}};
        } else if (label == "G2") {
            b = {{2, -3}, {-3, 6}};
        } else {
            throw ValidationError("unknown root system '" + std::string(label) + "'");
        }
        const std::size_t n = b.size();

        // Smallest scale making every fundamental weight integral.
        RationalMatrix cartan(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                cartan(i, j) = Rational(2 * b[i][j], b[j][j]);
            }
        }
        std::int64_t scale = 1;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<Rational> rhs(n, 0);
            rhs[i] = 1;
            // omega_i = sum_k c_k alpha_k with sum_k c_k cartan(k, j) = delta_ij
            RationalMatrix t(n, n);
            for (std::size_t j = 0; j < n; ++j) {
                for (std::size_t k = 0; k < n; ++k) {
                    t(j, k) = cartan(k, j);
                }
            }
            auto c = solve(t, rhs);
            for (const Rational& ck : *c) {
                Integer den = denominator_of(2 * ck);
                std::int64_t dd = den.convert_to<std::int64_t>();
                scale = std::lcm(scale, dd);
            }
        }
        RationalMatrix gram(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                gram(i, j) = Rational(b[i][j], 4 * scale * scale);
            }
        }
        std::set<Weight> found;
        std::vector<Weight> frontier;
        std::vector<Weight> simple;
        for (std::size_t i = 0; i < n; ++i) {
            simple.push_back(Weight::unit(n, i, 2 * scale));
        }
        for (const auto& s : simple) {
            if (found.insert(s).second) {
                frontier.push_back(s);
            }
        }
        while (!frontier.empty()) {
            Weight r = frontier.back();
            frontier.pop_back();
            for (const auto& s : simple) {
                Weight img = detail::reflect_raw(gram, s, r);
                if (found.insert(img).second) {
                    frontier.push_back(img);
                }
            }
        }
        std::vector<std::pair<Weight, int>> roots;
        for (const auto& r : found) {
            roots.emplace_back(r, 1);
        }
        if (label == "BC1") {
            roots.emplace_back(Weight{4}, 2);
        }
        return from_data(std::string(label), gram, roots, scale);
    }

    // Text format, one directive per line, '#' starts a comment:
    //   name <label>        (optional)
    //   rank <d>
    //   scale <k>           (optional, default 1)
    //   gram <p/q> ...      (d lines)
    //   root <c_1> ... <c_d> [mult]
    static RootDatum from_text(std::string_view text)
    {
        std::istringstream in{std::string(text)};
        std::string line;
        std::string name = "explicit";
        std::size_t rank = 0;
        std::int64_t scale = 1;
        std::vector<std::vector<Rational>> rows;
        std::vector<std::vector<std::string>> root_lines;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto h = line.find('#'); h != std::string::npos) {
                line.erase(h);
            }
            std::istringstream ls(line);
            std::string key;
            if (!(ls >> key)) {
                continue;
            }
            std::vector<std::string> toks;
            for (std::string t; ls >> t;) {
                toks.push_back(t);
            }
            auto fail = [&](const std::string& why) {
                throw ValidationError("Cartan data line " + std::to_string(lineno) + ": " + why);
            };
            try {
                if (key == "name") {
                    if (toks.size() != 1) {
                        fail("name takes one token");
                    }
                    name = toks[0];
                } else if (key == "rank") {
                    if (toks.size() != 1) {
                        fail("rank takes one integer");
                    }
                    rank = std::stoul(toks[0]);
                } else if (key == "scale") {
                    if (toks.size() != 1) {
                        fail("scale takes one integer");
                    }
                    scale = std::stoll(toks[0]);
                } else if (key == "gram") {
                    std::vector<Rational> row;
                    for (const auto& t : toks) {
                        row.push_back(parse_rational(t));
                    }
                    rows.push_back(std::move(row));
                } else if (key == "root") {
                    root_lines.push_back(toks);
                } else {
                    fail("unknown directive '" + key + "'");
                }
            } catch (const std::invalid_argument&) {
                fail("expected an integer");
            } catch (const std::out_of_range&) {
                fail("integer out of range");
            }
        }
        if (rank == 0) {
            throw ValidationError("Cartan data: missing or zero rank");
        }
        if (rows.size() != rank) {
            throw ValidationError("Cartan data: expected " + std::to_string(rank) + " gram rows");
        }
        RationalMatrix gram(rank, rank);
        for (std::size_t i = 0; i < rank; ++i) {
            if (rows[i].size() != rank) {
                throw ValidationError("Cartan data: gram row " + std::to_string(i) + " has wrong length");
            }
            for (std::size_t j = 0; j < rank; ++j) {
                gram(i, j) = rows[i][j];
            }
        }
        std::vector<std::pair<Weight, int>> roots;
        for (const auto& toks : root_lines) {
            if (toks.size() != rank && toks.size() != rank + 1) {
                throw ValidationError("Cartan data: root line needs " + std::to_string(rank) + " coordinates");
            }
            std::vector<std::int64_t> c;
            for (std::size_t i = 0; i < rank; ++i) {
                c.push_back(std::stoll(toks[i]));
            }
            int m = toks.size() > rank ? std::stoi(toks[rank]) : 1;
            roots.emplace_back(Weight(c), m);
        }
        return from_data(name, gram, roots, scale);
    }

    const std::string& name() const { return name_; }
    std::size_t rank() const { return rank_; }
    // Coordinates are taken with respect to alpha_i / (2 * scale).
    std::int64_t scale() const { return scale_; }
    const RationalMatrix& gram() const { return gram_; }

    const std::vector<Weight>& roots() const { return roots_; }
    const std::vector<Weight>& positive_roots() const { return positive_; }
    const std::vector<Weight>& simple_roots() const { return simple_; }

    int multiplicity(const Weight& w) const
    {
        auto it = mult_.find(w);
        return it == mult_.end() ? 0 : it->second;
    }
    bool is_root(const Weight& w) const { return mult_.count(w) > 0; }
    bool is_positive_root(const Weight& w) const { return std::binary_search(positive_.begin(), positive_.end(), w); }

    // beta/2 is not a root.
    bool is_indivisible(const Weight& w) const
    {
        Weight half = w;
        for (std::size_t i = 0; i < rank_; ++i) {
            if (w[i] % 2 != 0) {
                return true;
            }
            half[i] = w[i] / 2;
        }
        return !is_root(half);
    }

    Rational pairing(const Weight& a, const Weight& b) const { return detail::bilinear(gram_, a, b); }

    // 2<lam,alpha>/<alpha,alpha>
    Rational coroot_pairing(const Weight& lam, const Weight& alpha) const
    {
        Rational aa = pairing(alpha, alpha);
        if (aa == 0) {
            throw DomainError("coroot pairing with isotropic weight " + alpha.str());
        }
        return 2 * pairing(lam, alpha) / aa;
    }

    Weight reflect(const Weight& alpha, const Weight& lam) const
    {
        if (!is_root(alpha)) {
            throw DomainError(alpha.str() + " is not a root of " + name_);
        }
        return detail::reflect_raw(gram_, alpha, lam);
    }

    // Half sum of positive roots counted with multiplicity.
    Weight rho() const { return half_sum(positive_); }

    Weight half_sum(const std::vector<Weight>& roots) const
    {
        Weight s = Weight::zero(rank_);
        for (const auto& r : roots) {
            s += multiplicity(r) * r;
        }
        for (std::size_t i = 0; i < rank_; ++i) {
            if (s[i] % 2 != 0) {
                throw InternalError("half sum of roots is not in the lattice");
            }
            s[i] /= 2;
        }
        return s;
    }

    // sum_i labels_i * omega_i, where <omega_i, alpha_j^vee> = delta_ij.
    Weight from_fundamental(const std::vector<std::int64_t>& labels) const
    {
        if (labels.size() != rank_) {
            throw DomainError("expected " + std::to_string(rank_) + " fundamental coordinates");
        }
        RationalMatrix a(rank_, rank_);
        for (std::size_t i = 0; i < rank_; ++i) {
            for (std::size_t j = 0; j < rank_; ++j) {
                a(i, j) = coroot_pairing(Weight::unit(rank_, j), simple_[i]);
            }
        }
        std::vector<Rational> rhs(labels.begin(), labels.end());
        if (algchar::rank(a) != rank_) {
            throw DomainError("fundamental weights are undefined for a degenerate form");
        }
        auto x = solve(a, rhs);
        Weight w = Weight::zero(rank_);
        for (std::size_t i = 0; i < rank_; ++i) {
            if (!is_integral((*x)[i])) {
                throw DomainError("weight with these fundamental coordinates is not in the coordinate lattice");
            }
            w[i] = to_int64((*x)[i]);
        }
        return w;
    }

    std::vector<Rational> to_fundamental(const Weight& lam) const
    {
        std::vector<Rational> r;
        for (const auto& s : simple_) {
            r.push_back(coroot_pairing(lam, s));
        }
        return r;
    }

    // Integral and dominant for the positive system.
    bool is_dominant(const Weight& lam) const
    {
        for (const auto& c : to_fundamental(lam)) {
            if (c < 0 || !is_integral(c)) {
                return false;
            }
        }
        return true;
    }

private:
    void finish()
    {
        for (const auto& [w, m] : mult_) {
            if (w.is_zero()) {
                throw ValidationError("zero is not allowed as a root");
            }
            roots_.push_back(w);
            bool nonneg = std::all_of(w.begin(), w.end(), [](std::int64_t x) { return x >= 0; });
            bool nonpos = std::all_of(w.begin(), w.end(), [](std::int64_t x) { return x <= 0; });
            if (!nonneg && !nonpos) {
                throw ValidationError("root " + w.str() + " is neither positive nor negative");
            }
            for (std::size_t i = 0; i < rank_; ++i) {
                if (w[i] % (2 * scale_) != 0) {
                    throw ValidationError("root " + w.str() + " is not in the root lattice");
                }
            }
            if (pairing(w, w) <= 0) {
                throw ValidationError("form is not positive on root " + w.str());
            }
            if (nonneg) {
                positive_.push_back(w);
            }
        }
        for (std::size_t i = 0; i < rank_; ++i) {
            Weight s = Weight::unit(rank_, i, 2 * scale_);
            if (!is_root(s)) {
                throw ValidationError("simple root " + s.str() + " is missing from the root list");
            }
            simple_.push_back(s);
        }
        for (const auto& a : roots_) {
            for (const auto& b : roots_) {
                Rational k = coroot_pairing(b, a);
                if (!is_integral(k)) {
                    throw ValidationError("non-integral coroot pairing between " + b.str() + " and " + a.str());
                }
                Weight img = detail::reflect_raw(gram_, a, b);
                if (multiplicity(img) != multiplicity(b)) {
                    throw ValidationError("root set is not closed under the reflection in " + a.str());
                }
            }
        }
        std::sort(positive_.begin(), positive_.end());
    }

    std::string name_;
    std::size_t rank_ = 0;
    std::int64_t scale_ = 1;
    RationalMatrix gram_;
    std::map<Weight, int> mult_;
    std::vector<Weight> roots_;
    std::vector<Weight> positive_;
    std::vector<Weight> simple_;
};

inline RootDatum make_root_datum(std::string_view label)
{
    return RootDatum::named(label);
}

inline Rational pairing(const Weight& lam, const Weight& beta, const RootDatum& datum)
{
    return datum.pairing(lam, beta);
}

inline Weight reflect(const Weight& alpha, const Weight& lam, const RootDatum& datum)
{
    return datum.reflect(alpha, lam);
}

} // namespace algchar
