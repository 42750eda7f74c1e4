#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "lattice.hpp"
#include "series.hpp"
#include "weyl.hpp"

namespace algchar {

// A root datum with a choice of nilradical u, recorded as the multiset Delta(u).
// Standard parabolics are determined by the simple roots of their Levi factor.
class ParabolicDatum {
public:
    static ParabolicDatum standard(const RootDatum& datum, std::vector<std::size_t> levi_simple)
    {
        std::sort(levi_simple.begin(), levi_simple.end());
        levi_simple.erase(std::unique(levi_simple.begin(), levi_simple.end()), levi_simple.end());
        ParabolicDatum p;
        p.datum_ = datum;
        p.standard_ = true;
        p.levi_simple_ = levi_simple;
        std::string lbl = datum.name() + "/levi{";
        for (std::size_t k = 0; k < levi_simple.size(); ++k) {
            if (levi_simple[k] >= datum.rank()) {
                throw DomainError("Levi simple root index out of range");
            }
            lbl += (k ? "," : "") + std::to_string(levi_simple[k]);
        }
        p.label_ = levi_simple.empty() ? datum.name() + "/borel" : lbl + "}";
        for (const auto& r : datum.positive_roots()) {
            if (p.in_levi(r)) {
                p.levi_positive_.push_back(r);
            } else {
                p.delta_u_[r] = datum.multiplicity(r);
            }
        }
        return p;
    }
    static ParabolicDatum borel(const RootDatum& datum) { return standard(datum, {}); }
    // Maximal parabolic whose Levi contains every simple root except `omitted`.
    static ParabolicDatum maximal(const RootDatum& datum, std::size_t omitted)
    {
        if (omitted >= datum.rank()) {
            throw DomainError("simple root index out of range");
        }
        std::vector<std::size_t> levi;
        for (std::size_t i = 0; i < datum.rank(); ++i) {
            if (i != omitted) {
                levi.push_back(i);
            }
        }
        return standard(datum, levi);
    }
    // Arbitrary u given by its weights, e.g. u = g_{-alpha} for SL(2).
    static ParabolicDatum custom(const RootDatum& datum, std::map<Weight, int> delta_u, std::string label)
    {
        for (const auto& [w, m] : delta_u) {
            if (w.rank() != datum.rank() || w.is_zero() || m <= 0) {
                throw DomainError("invalid nilradical weight " + w.str());
            }
        }
        ParabolicDatum p;
        p.datum_ = datum;
        p.delta_u_ = std::move(delta_u);
        p.label_ = std::move(label);
        return p;
    }

    const RootDatum& datum() const { return datum_; }
    const std::string& label() const { return label_; }
    bool is_standard() const { return standard_; }
    bool is_borel() const { return standard_ && levi_simple_.empty(); }
    const std::vector<std::size_t>& levi_simple() const { return levi_simple_; }
    const std::vector<Weight>& levi_positive_roots() const { return levi_positive_; }
    // Delta(u) with multiplicities.
    const std::map<Weight, int>& nilradical() const { return delta_u_; }

    Weight rho_u() const
    {
        Weight s = Weight::zero(datum_.rank());
        for (const auto& [w, m] : delta_u_) {
            s += m * w;
        }
        for (std::size_t i = 0; i < s.rank(); ++i) {
            if (s[i] % 2 != 0) {
                throw InternalError("rho(u) is not in the lattice");
            }
            s[i] /= 2;
        }
        return s;
    }
    Weight rho_levi() const { return datum_.half_sum(levi_positive_); }

    bool in_levi(const Weight& r) const
    {
        for (std::size_t i = 0; i < r.rank(); ++i) {
            if (r[i] != 0 && !std::binary_search(levi_simple_.begin(), levi_simple_.end(), i)) {
                return false;
            }
        }
        return true;
    }

    void require_standard(const char* what) const
    {
        if (!standard_) {
            throw DomainError(std::string(what) + " needs a standard parabolic, got " + label_);
        }
    }

private:
    RootDatum datum_;
    bool standard_ = false;
    std::vector<std::size_t> levi_simple_;
    std::vector<Weight> levi_positive_;
    std::map<Weight, int> delta_u_;
    std::string label_;
};

// prod (1 - [-beta])^m
inline FormalSeries denominator_product(std::size_t rank, const std::map<Weight, int>& factors)
{
    FormalSeries r = FormalSeries::one(rank);
    for (const auto& [b, m] : factors) {
        FormalSeries f = FormalSeries::one(rank) - FormalSeries::monomial(-b);
        r = r * power(f, m);
    }
    return r;
}

// numerator / prod (1 - [-beta])^m in the localized ring.
struct CharacterFraction {
    FormalSeries numerator;
    std::map<Weight, int> denominator;
    std::string context;

    static CharacterFraction one(std::size_t rank) { return {FormalSeries::one(rank), {}, {}}; }

    std::size_t rank() const { return numerator.rank(); }
    FormalSeries denominator_poly() const { return denominator_product(rank(), denominator); }

    // Cancels denominator factors that divide the numerator.
    CharacterFraction canonical() const
    {
        CharacterFraction r = *this;
        for (auto it = r.denominator.begin(); it != r.denominator.end();) {
            while (it->second > 0) {
                auto q = exact_divide(r.numerator, it->first, 1);
                if (!q) {
                    break;
                }
                r.numerator = *q;
                --it->second;
            }
            it = it->second == 0 ? r.denominator.erase(it) : std::next(it);
        }
        return r;
    }

    // The Laurent polynomial this fraction equals, if it is one.
    std::optional<FormalSeries> expansion() const
    {
        CharacterFraction c = canonical();
        if (!c.denominator.empty()) {
            return std::nullopt;
        }
        return c.numerator;
    }
};

// Cross-multiplied equality.
inline bool frac_equal(const CharacterFraction& a, const CharacterFraction& b)
{
    if (a.rank() != b.rank()) {
        throw DomainError("fractions of different ranks");
    }
    return equal_finite(a.numerator * b.denominator_poly(), b.numerator * a.denominator_poly());
}

namespace detail {

inline std::string merge_context(const CharacterFraction& a, const CharacterFraction& b)
{
    if (!a.context.empty() && !b.context.empty() && a.context != b.context) {
        throw DomainError("fractions belong to different parabolics: " + a.context + " vs " + b.context);
    }
    return a.context.empty() ? b.context : a.context;
}

} // namespace detail

inline CharacterFraction frac_mul(const CharacterFraction& a, const CharacterFraction& b)
{
    CharacterFraction r{a.numerator * b.numerator, a.denominator, detail::merge_context(a, b)};
    for (const auto& [w, m] : b.denominator) {
        r.denominator[w] += m;
    }
    return r.canonical();
}

inline CharacterFraction frac_add(const CharacterFraction& a, const CharacterFraction& b)
{
    std::map<Weight, int> den = a.denominator;
    for (const auto& [w, m] : b.denominator) {
        den[w] = std::max(den[w], m);
    }
    auto cofactor = [&](const CharacterFraction& x) {
        std::map<Weight, int> c;
        for (const auto& [w, m] : den) {
            auto it = x.denominator.find(w);
            int have = it == x.denominator.end() ? 0 : it->second;
            if (m > have) {
                c[w] = m - have;
            }
        }
        return denominator_product(x.rank(), c);
    };
    CharacterFraction r{a.numerator * cofactor(a) + b.numerator * cofactor(b), den, detail::merge_context(a, b)};
    return r.canonical();
}

// mu -> -mu, renormalized using 1 - [beta] = -[beta](1 - [-beta]).
inline CharacterFraction frac_dual(const CharacterFraction& a)
{
    FormalSeries num = dual(a.numerator);
    for (const auto& [b, m] : a.denominator) {
        num = num * FormalSeries::monomial(m * -b, m % 2 == 0 ? 1 : -1);
    }
    return CharacterFraction{num, a.denominator, a.context}.canonical();
}

enum class DenominatorMode { product, alternating_sum };

// sum_w (-1)^{l(w)} [w(lam + rho) - rho]
inline FormalSeries weyl_numerator(const Weight& lam, const std::vector<WeylElement>& group, const Weight& rho)
{
    FormalSeries r = FormalSeries::zero(lam.rank());
    for (const auto& w : group) {
        r.add_term(w.apply(lam + rho) - rho, w.sign());
    }
    return r;
}

// Weyl group of the Levi factor of a standard parabolic.
inline std::vector<WeylElement> levi_weyl_group(const ParabolicDatum& par)
{
    par.require_standard("levi_weyl_group");
    return generate_parabolic_subgroup(par.datum(), par.levi_simple());
}

// w with w^{-1} Delta+(l) inside Delta+, i.e. minimal length representatives of W / W_l.
inline std::vector<WeylElement> minimal_coset_representatives(const ParabolicDatum& par)
{
    par.require_standard("minimal_coset_representatives");
    const auto& d = par.datum();
    auto group = generate_weyl_group(d);
    std::vector<WeylElement> reps;
    for (const auto& w : group) {
        WeylElement inv = inverse(w, group);
        bool ok = true;
        for (auto i : par.levi_simple()) {
            if (!d.is_positive_root(inv.apply(d.simple_roots()[i]))) {
                ok = false;
                break;
            }
        }
        if (ok) {
            reps.push_back(w);
        }
    }
    return reps;
}

inline bool is_levi_dominant(const Weight& mu, const ParabolicDatum& par)
{
    for (auto i : par.levi_simple()) {
        Rational c = par.datum().coroot_pairing(mu, par.datum().simple_roots()[i]);
        if (c < 0 || !is_integral(c)) {
            return false;
        }
    }
    return true;
}

// Torus character of the irreducible Levi module with highest weight mu.
inline FormalSeries levi_character(const Weight& mu, const ParabolicDatum& par)
{
    if (!is_levi_dominant(mu, par)) {
        throw DomainError(mu.str() + " is not dominant for the Levi factor of " + par.label());
    }
    FormalSeries num = weyl_numerator(mu, levi_weyl_group(par), par.rho_levi());
    for (const auto& r : par.levi_positive_roots()) {
        auto q = exact_divide(num, r, par.datum().multiplicity(r));
        if (!q) {
            throw InternalError("Levi Weyl numerator not divisible by its denominator");
        }
        num = *q;
    }
    return num;
}

// W_q as a Laurent polynomial.
inline FormalSeries weyl_denominator(const ParabolicDatum& par, DenominatorMode mode = DenominatorMode::product)
{
    const auto& d = par.datum();
    if (mode == DenominatorMode::product) {
        return denominator_product(d.rank(), par.nilradical());
    }
    // sum over minimal coset representatives of (-1)^{l(w)} ch(L_{w rho - rho})
    par.require_standard("alternating-sum denominator");
    const Weight rho = d.rho();
    FormalSeries r = FormalSeries::zero(d.rank());
    for (const auto& w : minimal_coset_representatives(par)) {
        r = r + w.sign() * levi_character(w.apply(rho) - rho, par);
    }
    return r;
}

inline void require_dominant(const Weight& lam, const RootDatum& d)
{
    if (lam.rank() != d.rank()) {
        throw DomainError("weight " + lam.str() + " has wrong rank for " + d.name());
    }
    if (!d.is_dominant(lam)) {
        throw DomainError("weight " + lam.str() + " is not dominant integral for " + d.name());
    }
}

// c_b(V_lam) = Weyl numerator / W_b, not canonicalized.
inline CharacterFraction weyl_character(const Weight& lam, const ParabolicDatum& par)
{
    if (!par.is_borel()) {
        throw DomainError("weyl_character needs a Borel parabolic, got " + par.label());
    }
    const auto& d = par.datum();
    require_dominant(lam, d);
    return {weyl_numerator(lam, generate_weyl_group(d), d.rho()), par.nilradical(), par.label()};
}

// Levi highest weights of H^q(u; V_lam), each of multiplicity one: w(lam + rho) - rho with
// w a minimal coset representative of length q. For the Borel rho = rho(u).
inline std::vector<std::pair<Weight, int>> kostant_cohomology(const Weight& lam, const ParabolicDatum& par, int q)
{
    const auto& d = par.datum();
    require_dominant(lam, d);
    std::vector<std::pair<Weight, int>> out;
    if (q < 0) {
        return out;
    }
    const Weight rho = d.rho();
    for (const auto& w : minimal_coset_representatives(par)) {
        if (w.length == q) {
            out.emplace_back(w.apply(lam + rho) - rho, 1);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// sum_q (-1)^q [H^q(u; V_lam)] as Levi highest weights.
inline FormalSeries euler_numerator(const Weight& lam, const ParabolicDatum& par)
{
    FormalSeries r = FormalSeries::zero(par.datum().rank());
    for (int q = 0; q <= static_cast<int>(par.datum().positive_roots().size()); ++q) {
        for (const auto& [mu, m] : kostant_cohomology(lam, par, q)) {
            r.add_term(mu, (q % 2 == 0 ? 1 : -1) * m);
        }
    }
    return r;
}

// c_q(V_lam) on the torus: sum_q (-1)^q ch(H^q(u; V_lam)) / prod_{Delta(u)} (1 - [-beta]).
inline CharacterFraction relative_character(const Weight& lam, const ParabolicDatum& par)
{
    const auto& d = par.datum();
    require_dominant(lam, d);
    const Weight rho = d.rho();
    FormalSeries num = FormalSeries::zero(d.rank());
    for (const auto& w : minimal_coset_representatives(par)) {
        num = num + w.sign() * levi_character(w.apply(lam + rho) - rho, par);
    }
    return {num, par.nilradical(), par.label()};
}

// Checks c_b(V) = c_{b cap l}(c_q(V)) for b the Borel inside q, by cross-multiplication.
inline bool compose_characters(const Weight& lam, const ParabolicDatum& big, const ParabolicDatum& mid)
{
    if (!big.is_borel() || !mid.is_standard() || big.datum().name() != mid.datum().name()
        || big.datum().rank() != mid.datum().rank()) {
        throw DomainError("compose_characters needs the Borel and a standard parabolic of the same root datum");
    }
    const auto& d = big.datum();
    CharacterFraction direct = weyl_character(lam, big);
    // Apply the Levi Weyl character formula to each Kostant constituent.
    const Weight rho = d.rho();
    const auto levi_group = levi_weyl_group(mid);
    const Weight rho_l = mid.rho_levi();
    FormalSeries num = FormalSeries::zero(d.rank());
    for (const auto& w : minimal_coset_representatives(mid)) {
        num = num + w.sign() * weyl_numerator(w.apply(lam + rho) - rho, levi_group, rho_l);
    }
    std::map<Weight, int> den = mid.nilradical();
    for (const auto& r : mid.levi_positive_roots()) {
        den[r] += d.multiplicity(r);
    }
    CharacterFraction composed{num, den, big.label()};
    return frac_equal(direct, composed);
}

// Denominator factors of an embedded fraction that are not accounted for by W_{q'}.
inline std::map<Weight, int> relative_denominator(const std::map<Weight, int>& image, const ParabolicDatum& par_small)
{
    std::map<Weight, int> rel = image;
    for (const auto& [w, m] : par_small.nilradical()) {
        auto it = rel.find(w);
        if (it == rel.end() || it->second < m) {
            throw DomainError("relative denominator does not factor: W_q' is not a divisor of the restricted W_q");
        }
        it->second -= m;
        if (it->second == 0) {
            rel.erase(it);
        }
    }
    return rel;
}

// Pushes a fraction forward along a linear map of coordinate lattices.
inline CharacterFraction restrict_fraction(const CharacterFraction& a, const IntMatrix& emb,
                                           const ParabolicDatum& par_small)
{
    if (emb.cols() != a.rank() || emb.rows() != par_small.datum().rank()) {
        throw DomainError("embedding has the wrong shape");
    }
    const WeylElement map{emb, 0};
    FormalSeries::Terms t;
    for (const auto& [w, c] : a.numerator.terms()) {
        t[map.apply(w)] += c;
    }
    std::erase_if(t, [](const auto& kv) { return kv.second == 0; });
    std::map<Weight, int> den;
    for (const auto& [w, m] : a.denominator) {
        Weight img = map.apply(w);
        if (img.is_zero()) {
            throw DomainError("denominator factor " + w.str() + " restricts to zero");
        }
        den[img] += m;
    }
    relative_denominator(den, par_small);
    return {FormalSeries::finite(par_small.datum().rank(), t), den, par_small.label()};
}

struct InfinitesimalCharacter {
    std::set<Weight> orbit;
};

// W-orbit of lam + rho.
inline InfinitesimalCharacter infinitesimal_character(const Weight& lam, const Weight& rho,
                                                      const std::vector<WeylElement>& group)
{
    InfinitesimalCharacter chi;
    for (const auto& w : group) {
        chi.orbit.insert(w.apply(lam + rho));
    }
    return chi;
}

// Keeps the terms [mu] with mu + rho in the orbit.
inline FormalSeries primary_projection(const FormalSeries& num, const InfinitesimalCharacter& chi, const Weight& rho)
{
    FormalSeries r = FormalSeries::zero(num.rank());
    for (const auto& [w, c] : num.terms()) {
        if (chi.orbit.count(w + rho)) {
            r.add_term(w, c);
        }
    }
    return r;
}

// Moves each term [w(lam+rho)-rho] to [w(lam+mu+rho)-rho], keeping its coefficient.
inline FormalSeries translate_numerator(const FormalSeries& num, const Weight& lam, const Weight& mu, const Weight& rho,
                                        const std::vector<WeylElement>& group, const RootDatum& datum)
{
    if (!num.is_finite()) {
        throw UnsupportedOperation("translate_numerator needs a Laurent polynomial");
    }
    const Weight src = lam + rho;
    const Weight dst = lam + mu + rho;
    for (const auto& r : datum.positive_roots()) {
        Rational a = datum.coroot_pairing(src, r), b = datum.coroot_pairing(dst, r);
        if (a < 0 || b < 0) {
            throw DomainError("lam + rho and lam + mu + rho must be integrally dominant");
        }
        if ((a == 0) != (b == 0)) {
            throw DomainError("translation across walls is not supported: source and target are not equisingular");
        }
    }
    std::map<Weight, Weight> target;
    for (const auto& w : group) {
        Weight from = w.apply(src) - rho;
        Weight to = w.apply(dst) - rho;
        auto [it, fresh] = target.emplace(from, to);
        if (!fresh && it->second != to) {
            throw InternalError("translation is not well defined on the orbit");
        }
    }
    FormalSeries r = FormalSeries::zero(num.rank());
    for (const auto& [w, c] : num.terms()) {
        auto it = target.find(w);
        if (it == target.end()) {
            throw DomainError("numerator term " + w.str() + " is not of the form w(lam+rho)-rho");
        }
        r.add_term(it->second, c);
    }
    return r;
}

} // namespace algchar
