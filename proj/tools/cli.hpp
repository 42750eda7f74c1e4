#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "algchar/branch.hpp"
#include "algchar/charring.hpp"
#include "algchar/io.hpp"
#include "algchar/kernel.hpp"
#include "algchar/lattice.hpp"
#include "algchar/weyl.hpp"

namespace algchar::cli {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        out.push_back(cur);
    }
    if (!s.empty() && s.back() == sep) {
        out.emplace_back();
    }
    return out;
}

inline std::int64_t parse_int(const std::string& s)
{
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        throw UsageError("expected an integer, got '" + s + "'");
    }
    if (used != s.size()) {
        throw UsageError("expected an integer, got '" + s + "'");
    }
    return v;
}

inline std::vector<std::int64_t> parse_ints(const std::string& s)
{
    std::vector<std::int64_t> out;
    for (const auto& p : split(s, ',')) {
        out.push_back(parse_int(p));
    }
    return out;
}

// "a,b;c,d" -> two weights
inline std::vector<Weight> parse_weights(const std::string& s)
{
    std::vector<Weight> out;
    for (const auto& p : split(s, ';')) {
        out.emplace_back(parse_ints(p));
    }
    return out;
}

// "lo:hi[,lo:hi...]"; a single interval is used for every coordinate.
inline Box parse_window(const std::string& s, std::size_t rank)
{
    std::vector<Interval> iv;
    for (const auto& p : split(s, ',')) {
        auto parts = split(p, ':');
        if (parts.size() != 2) {
            throw UsageError("window entries must look like lo:hi, got '" + p + "'");
        }
        iv.push_back({parse_int(parts[0]), parse_int(parts[1])});
    }
    if (iv.size() == 1 && rank > 1) {
        iv.assign(rank, iv.front());
    }
    if (iv.size() != rank) {
        throw UsageError("window has " + std::to_string(iv.size()) + " intervals, expected " + std::to_string(rank));
    }
    Box b(iv);
    if (b.empty()) {
        throw UsageError("window " + b.str() + " is empty");
    }
    return b;
}

inline std::string read_text(const std::string& arg)
{
    if (!arg.empty() && arg.front() == '@') {
        std::ifstream in(arg.substr(1));
        if (!in) {
            throw UsageError("cannot read " + arg.substr(1));
        }
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }
    return arg;
}

inline std::string fraction_str(const CharacterFraction& f)
{
    std::string den;
    for (const auto& [r, m] : f.denominator) {
        den += "(1-[" + (-r).str() + "])";
        if (m != 1) {
            den += "^" + std::to_string(m);
        }
    }
    return "(" + f.numerator.str() + ") / " + (den.empty() ? "1" : den);
}

inline std::string gram_str(const RootDatum& d)
{
    std::string s;
    for (std::size_t i = 0; i < d.rank(); ++i) {
        s += i ? "; " : "";
        for (std::size_t j = 0; j < d.rank(); ++j) {
            s += (j ? " " : "") + to_string(d.gram()(i, j));
        }
    }
    return s;
}

} // namespace detail

struct Options {
    std::string system;
    std::string datum_file;
    std::string highest;
    std::string mu;
    std::optional<std::size_t> parabolic;
    std::string roots;
    std::string powers;
    std::string window;
    std::string lambda0;
    std::string series;
    std::string ktypes;
    std::string inf;
    std::string setting = "sl2";
    int b = 1;
    int terms = 5;
    std::optional<int> degree;
    std::optional<int> min_ktype;
    bool json = false;
    bool check = false;
    bool expand = false;
    std::vector<int> positional;
};

class Runner {
public:
    Runner(const Options& o, std::ostream& out) : o_(o), out_(out) {}

    RootDatum datum() const
    {
        if (!o_.datum_file.empty()) {
            return RootDatum::from_text(detail::read_text("@" + o_.datum_file));
        }
        if (o_.system.empty()) {
            throw UsageError("--system or --datum-file is required");
        }
        return RootDatum::named(o_.system);
    }

    Weight highest(const RootDatum& d, const std::string& flag, const std::string& value) const
    {
        if (value.empty()) {
            throw UsageError(flag + " is required");
        }
        auto labels = detail::parse_ints(value);
        if (labels.size() != d.rank()) {
            throw UsageError(flag + " needs " + std::to_string(d.rank()) + " fundamental coordinates");
        }
        return d.from_fundamental(labels);
    }

    ParabolicDatum parabolic(const RootDatum& d) const
    {
        if (!o_.parabolic) {
            return ParabolicDatum::borel(d);
        }
        return ParabolicDatum::maximal(d, *o_.parabolic);
    }

    Box window(std::size_t rank) const
    {
        if (o_.window.empty()) {
            throw UsageError("--window is required");
        }
        return detail::parse_window(o_.window, rank);
    }

    void rootdatum()
    {
        const RootDatum d = datum();
        if (o_.json) {
            io::Json roots = io::Json::array();
            for (const auto& r : d.positive_roots()) {
                roots.push_back({{"root", io::to_json(r)}, {"mult", d.multiplicity(r)}});
            }
            io::Json simple = io::Json::array();
            for (const auto& r : d.simple_roots()) {
                simple.push_back(io::to_json(r));
            }
            io::Json gram = io::Json::array();
            for (std::size_t i = 0; i < d.rank(); ++i) {
                io::Json row = io::Json::array();
                for (std::size_t j = 0; j < d.rank(); ++j) {
                    row.push_back(to_string(d.gram()(i, j)));
                }
                gram.push_back(row);
            }
            out_ << io::Json{{"name", d.name()},
                             {"rank", d.rank()},
                             {"scale", d.scale()},
                             {"gram", gram},
                             {"simple_roots", simple},
                             {"positive_roots", roots},
                             {"rho", io::to_json(d.rho())},
                             {"weyl_order", generate_weyl_group(d).size()}}
                        .dump(2)
                 << "\n";
            return;
        }
        out_ << "name: " << d.name() << "\nrank: " << d.rank() << "\nscale: " << d.scale()
             << "\ngram: " << detail::gram_str(d) << "\nsimple roots:";
        for (const auto& r : d.simple_roots()) {
            out_ << " " << r.str();
        }
        out_ << "\npositive roots:";
        for (const auto& r : d.positive_roots()) {
            out_ << " " << r.str();
            if (d.multiplicity(r) != 1) {
                out_ << "x" << d.multiplicity(r);
            }
        }
        out_ << "\nrho: " << d.rho().str() << "\nweyl order: " << generate_weyl_group(d).size() << "\n";
    }

    void denom()
    {
        const RootDatum d = datum();
        const ParabolicDatum par = parabolic(d);
        FormalSeries prod = weyl_denominator(par, DenominatorMode::product);
        std::optional<FormalSeries> alt;
        if (o_.check) {
            alt = weyl_denominator(par, DenominatorMode::alternating_sum);
        }
        if (o_.json) {
            io::Json j{{"parabolic", par.label()}, {"product", io::to_json(prod)}};
            if (alt) {
                j["alternating_sum"] = io::to_json(*alt);
                j["equal"] = prod == *alt;
            }
            out_ << j.dump(2) << "\n";
            return;
        }
        out_ << "parabolic: " << par.label() << "\nproduct: " << prod.str() << "\n";
        if (alt) {
            out_ << "alternating sum: " << alt->str() << "\nequal: " << (prod == *alt ? "true" : "false") << "\n";
        }
    }

    void char_weyl()
    {
        const RootDatum d = datum();
        const Weight lam = highest(d, "--highest", o_.highest);
        CharacterFraction f = weyl_character(lam, ParabolicDatum::borel(d));
        auto ch = f.expansion();
        if (!ch) {
            throw InternalError("Weyl numerator not divisible by the denominator");
        }
        Rational dim = 0;
        for (const auto& [w, c] : ch->terms()) {
            dim += c;
        }
        if (o_.json) {
            out_ << io::Json{{"highest", io::to_json(lam)},
                             {"fraction", io::to_json(f)},
                             {"character", io::to_json(*ch)},
                             {"dimension", to_string(dim)}}
                        .dump(2)
                 << "\n";
            return;
        }
        out_ << "highest: " << lam.str() << "\nfraction: " << detail::fraction_str(f) << "\ncharacter: " << ch->str()
             << "\ndimension: " << to_string(dim) << "\n";
    }

    void char_compose()
    {
        const RootDatum d = datum();
        const Weight lam = highest(d, "--highest", o_.highest);
        if (!o_.parabolic) {
            throw UsageError("--parabolic is required");
        }
        const ParabolicDatum mid = parabolic(d);
        const ParabolicDatum big = ParabolicDatum::borel(d);
        CharacterFraction rel = relative_character(lam, mid);
        bool ok = compose_characters(lam, big, mid);
        if (o_.json) {
            out_ << io::Json{{"highest", io::to_json(lam)},
                             {"parabolic", mid.label()},
                             {"relative", io::to_json(rel)},
                             {"transitive", ok}}
                        .dump(2)
                 << "\n";
            return;
        }
        out_ << "highest: " << lam.str() << "\nparabolic: " << mid.label()
             << "\nrelative character: " << detail::fraction_str(rel) << "\ntransitive: " << (ok ? "true" : "false")
             << "\n";
    }

    void char_translate()
    {
        const RootDatum d = datum();
        const Weight lam = highest(d, "--highest", o_.highest);
        const Weight mu = highest(d, "--mu", o_.mu);
        const auto group = generate_weyl_group(d);
        FormalSeries num = weyl_numerator(lam, group, d.rho());
        FormalSeries moved = translate_numerator(num, lam, mu, d.rho(), group, d);
        if (o_.json) {
            out_ << io::Json{{"highest", io::to_json(lam)},
                             {"mu", io::to_json(mu)},
                             {"numerator", io::to_json(num)},
                             {"translated", io::to_json(moved)}}
                        .dump(2)
                 << "\n";
            return;
        }
        out_ << "numerator: " << num.str() << "\ntranslated: " << moved.str() << "\n";
    }

    void cohomology_kostant()
    {
        const RootDatum d = datum();
        const Weight lam = highest(d, "--highest", o_.highest);
        const ParabolicDatum par = parabolic(d);
        const int top = static_cast<int>(d.positive_roots().size());
        io::Json degrees = io::Json::array();
        for (int q = 0; q <= top; ++q) {
            if (o_.degree && *o_.degree != q) {
                continue;
            }
            auto h = kostant_cohomology(lam, par, q);
            if (h.empty() && !o_.degree) {
                continue;
            }
            if (o_.json) {
                io::Json ws = io::Json::array();
                for (const auto& [w, m] : h) {
                    ws.push_back({{"weight", io::to_json(w)}, {"mult", m}});
                }
                degrees.push_back({{"q", q}, {"weights", ws}});
            } else {
                out_ << "H^" << q << ":";
                for (const auto& [w, m] : h) {
                    out_ << " " << w.str();
                }
                out_ << "\n";
            }
        }
        if (o_.json) {
            out_ << io::Json{{"highest", io::to_json(lam)}, {"parabolic", par.label()}, {"degrees", degrees}}.dump(2)
                 << "\n";
        }
    }

    struct KernelSetup {
        RootDatum datum;
        std::vector<Weight> roots;
        std::vector<int> powers;
        Weight lambda0;
        Box window;
        std::vector<KernelGenerator> basis;
    };

    KernelSetup kernel_setup() const
    {
        RootDatum d = datum();
        // Without --roots the simple roots are used.
        auto roots = o_.roots.empty() ? d.simple_roots() : detail::parse_weights(o_.roots);
        std::vector<int> powers;
        if (o_.powers.empty()) {
            throw UsageError("--powers is required");
        }
        for (auto p : detail::parse_ints(o_.powers)) {
            powers.push_back(static_cast<int>(p));
        }
        Weight lambda0 = o_.lambda0.empty() ? Weight::zero(d.rank()) : Weight(detail::parse_ints(o_.lambda0));
        if (lambda0.rank() != d.rank()) {
            throw UsageError("--lambda0 has the wrong rank");
        }
        Box win = window(d.rank());
        auto reps = enumerate_representatives(roots, lambda0, win, d);
        auto basis = kernel_basis(roots, powers, lambda0, reps, d);
        return {std::move(d), std::move(roots), std::move(powers), lambda0, win, std::move(basis)};
    }

    void kernel_basis_cmd()
    {
        auto k = kernel_setup();
        if (o_.json) {
            io::Json gens = io::Json::array();
            for (const auto& g : k.basis) {
                io::Json j = io::to_json(g);
                if (o_.expand) {
                    j["expansion"] = io::to_json(g.expand(k.window));
                }
                gens.push_back(j);
            }
            out_ << io::Json{{"window", io::to_json(k.window)},
                             {"count", k.basis.size()},
                             {"independent", independent_subset(k.basis, k.window).size()},
                             {"generators", gens}}
                        .dump(2)
                 << "\n";
            return;
        }
        out_ << "window: " << k.window.str() << "\ngenerators: " << k.basis.size()
             << "\nindependent on window: " << independent_subset(k.basis, k.window).size() << "\n";
        for (const auto& g : k.basis) {
            out_ << "  " << g.describe() << "\n";
            if (o_.expand) {
                out_ << "    " << g.expand(k.window).str() << "\n";
            }
        }
    }

    void kernel_check()
    {
        auto k = kernel_setup();
        if (o_.series.empty()) {
            throw UsageError("--series is required");
        }
        io::Json parsed;
        try {
            parsed = io::Json::parse(detail::read_text(o_.series));
        } catch (const io::Json::parse_error& e) {
            throw UsageError(std::string("--series is not valid JSON: ") + e.what());
        }
        FormalSeries z = io::series_from_json(parsed);
        // Restrict to an independent subfamily so membership never trips over redundancy.
        std::vector<KernelGenerator> indep;
        for (auto i : independent_subset(k.basis, k.window)) {
            indep.push_back(k.basis[i]);
        }
        auto coords = membership_coordinates(z, indep, k.window);
        if (o_.json) {
            io::Json j{{"window", io::to_json(k.window)}, {"member", coords.has_value()}};
            if (coords) {
                io::Json cs = io::Json::array();
                for (std::size_t i = 0; i < indep.size(); ++i) {
                    cs.push_back({{"generator", indep[i].describe()}, {"c", to_string((*coords)[i])}});
                }
                j["coordinates"] = cs;
            }
            out_ << j.dump(2) << "\n";
            return;
        }
        out_ << "member: " << (coords ? "true" : "false") << "\n";
        if (coords) {
            for (std::size_t i = 0; i < indep.size(); ++i) {
                if ((*coords)[i] != 0) {
                    out_ << "  " << to_string((*coords)[i]) << " * " << indep[i].describe() << "\n";
                }
            }
        }
    }

    void kernel_regularity()
    {
        auto k = kernel_setup();
        auto rep = vanishing_check(k.basis, k.roots, k.powers, k.lambda0, k.window, k.datum);
        if (o_.json) {
            io::Json gens = io::Json::array();
            for (std::size_t i = 0; i < k.basis.size(); ++i) {
                gens.push_back({{"generator", k.basis[i].describe()}, {"nonzero_in_strip", bool(rep.nonzero_in_strip[i])}});
            }
            out_ << io::Json{{"window", io::to_json(k.window)},
                             {"strip_points", rep.strip_size},
                             {"independent", rep.independent},
                             {"strip_rank", rep.strip_rank},
                             {"generators", gens},
                             {"only_zero_vanishes", rep.injective_on_strip()}}
                        .dump(2)
                 << "\n";
            return;
        }
        out_ << "strip points in window: " << rep.strip_size << "\n";
        for (std::size_t i = 0; i < k.basis.size(); ++i) {
            out_ << "  " << k.basis[i].describe() << ": " << (rep.nonzero_in_strip[i] ? "nonzero in strip" : "VANISHES ON STRIP")
                 << "\n";
        }
        out_ << "independent: " << rep.independent << ", rank on strip: " << rep.strip_rank
             << "\nonly zero vanishes: " << (rep.injective_on_strip() ? "true" : "false") << "\n";
    }

    void print_branching(const BranchingResult& r)
    {
        if (o_.json) {
            out_ << io::to_json(r).dump(2) << "\n";
            return;
        }
        for (std::size_t i = 0; i < r.terms.size(); ++i) {
            out_ << (i ? " " : "") << r.terms[i].first;
        }
        if (!r.terms.empty()) {
            bool uniform = std::all_of(r.terms.begin(), r.terms.end(), [&](const auto& t) { return t.second == r.terms[0].second; });
            out_ << (uniform ? ", mult " + std::to_string(r.terms[0].second) : std::string()) << "\n";
        }
        for (const auto& [what, ok] : r.certificate) {
            out_ << (ok ? "ok: " : "FAILED: ") << what << "\n";
        }
    }

    void branch_sl2_tensor()
    {
        if (o_.positional.size() != 2) {
            throw UsageError("sl2-tensor needs two positional arguments m n");
        }
        Box win = o_.window.empty() ? Box::cube(1, 0, 60) : detail::parse_window(o_.window, 1);
        print_branching(sl2_tensor_discrete(o_.positional[0], o_.positional[1], o_.terms, win));
    }

    void branch_sl2_principal()
    {
        if (o_.positional.size() != 1) {
            throw UsageError("sl2-principal needs one positional argument delta");
        }
        print_branching(sl2_principal_restriction(o_.positional[0], window(1)));
    }

    void branch_so3_blattner()
    {
        auto data = so3_kernel_generators(o_.terms);
        auto thr = so3_thresholds(data);
        std::optional<bool> disjoint, s_holds;
        if (o_.min_ktype) {
            const int a = *o_.min_ktype;
            disjoint = thr.disjointness >= 0 && a >= thr.disjointness;
            const RootDatum d = gl3so3::datum();
            s_holds = condition_S_check(gl3so3::ktypes_from(a, 8), gl3so3::lambda0_shifted, gl3so3::roots_u_plus_n,
                                        gl3so3::roots_n, tau_group(d), d)
                          .ok;
        }
        auto vec = [](const std::vector<Rational>& v) {
            io::Json j = io::Json::array();
            for (const auto& x : v) {
                j.push_back(to_string(x));
            }
            return j;
        };
        if (o_.json) {
            io::Json gens = io::Json::array();
            for (std::size_t i = 0; i < data.generator_labels.size(); ++i) {
                io::Json g{{"generator", data.generator_labels[i]}, {"folded", vec(data.generator_folds[i])}};
                g["coordinates"] = data.coordinates[i] ? vec(*data.coordinates[i]) : io::Json(nullptr);
                gens.push_back(g);
            }
            io::Json j{{"max_k", data.max_k},
                       {"kappa1", vec(data.kappa1)},
                       {"kappa2", vec(data.kappa2)},
                       {"antisymmetric", data.antisymmetric},
                       {"generators", gens},
                       {"all_in_span", data.all_in_span()},
                       {"threshold_disjointness", thr.disjointness},
                       {"threshold_condition_s", thr.condition_s}};
            if (o_.min_ktype) {
                j["min_ktype"] = *o_.min_ktype;
                j["disjoint"] = *disjoint;
                j["condition_s"] = *s_holds;
            }
            out_ << j.dump(2) << "\n";
            return;
        }
        auto line = [&](const std::vector<Rational>& v) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i) {
                s += (i ? " " : "") + to_string(v[i]);
            }
            return s;
        };
        out_ << "kappa1: " << line(data.kappa1) << "\nkappa2: " << line(data.kappa2) << "\n";
        for (std::size_t i = 0; i < data.generator_labels.size(); ++i) {
            out_ << data.generator_labels[i] << " = ";
            if (data.coordinates[i]) {
                out_ << to_string((*data.coordinates[i])[0]) << " kappa1 + " << to_string((*data.coordinates[i])[1])
                     << " kappa2\n";
            } else {
                out_ << "not in span\n";
            }
        }
        out_ << "disjointness threshold: a >= " << thr.disjointness << "\ncondition (S) threshold: a >= "
             << thr.condition_s << "\n";
        if (o_.min_ktype) {
            out_ << "a = " << *o_.min_ktype << ": disjoint " << (*disjoint ? "true" : "false") << ", condition (S) "
                 << (*s_holds ? "true" : "false") << "\n";
        }
    }

    struct RegularitySetting {
        RootDatum datum;
        std::vector<Weight> roots;
        std::vector<Weight> count_roots;
        std::vector<WeylElement> group;
    };

    RegularitySetting setting() const
    {
        if (o_.setting == "sl2") {
            return {sl2::datum(), {sl2::nil_weight}, {}, trivial_group(1)};
        }
        if (o_.setting == "gl3so3") {
            RootDatum d = gl3so3::datum();
            return {d, gl3so3::roots_u_plus_n, gl3so3::roots_n, tau_group(d)};
        }
        throw UsageError("--setting must be sl2 or gl3so3");
    }

    void print_report(const RegularityReport& r)
    {
        if (o_.json) {
            out_ << io::to_json(r).dump(2) << "\n";
            return;
        }
        out_ << "holds: " << (r.ok ? "true" : "false") << "\nsum n bound: " << r.total_nsum_bound
             << "\nwidest strip: " << to_string(r.widest_strip) << "\n";
        if (r.first_violation) {
            const auto& v = *r.first_violation;
            out_ << "first violation: lambda " << v.lambda.str() << ", w #" << v.weyl_index << ", numbering";
            for (const auto& b : v.numbering) {
                out_ << " " << b.str();
            }
            out_ << ", n";
            for (auto x : v.n) {
                out_ << " " << x;
            }
            out_ << ": " << to_string(v.lhs) << " < " << to_string(v.rhs) << "\n";
        }
    }

    Weight lambda0_for(const RegularitySetting& s) const
    {
        Weight l = o_.lambda0.empty() ? Weight::zero(s.datum.rank()) : Weight(detail::parse_ints(o_.lambda0));
        if (l.rank() != s.datum.rank()) {
            throw UsageError("--lambda0 has the wrong rank");
        }
        return l;
    }

    void check_condition_s()
    {
        auto s = setting();
        if (o_.ktypes.empty()) {
            throw UsageError("--ktypes is required");
        }
        std::vector<std::pair<Weight, int>> kt;
        for (const auto& w : detail::parse_weights(o_.ktypes)) {
            kt.emplace_back(w, 1);
        }
        print_report(condition_S_check(kt, lambda0_for(s), s.roots, s.count_roots, s.group, s.datum));
    }

    void check_condition_sprime()
    {
        auto s = setting();
        if (o_.inf.empty()) {
            throw UsageError("--inf is required");
        }
        print_report(condition_Sprime_check(detail::parse_weights(o_.inf), lambda0_for(s), s.roots, s.count_roots, o_.b,
                                            s.group, s.datum));
    }

private:
    const Options& o_;
    std::ostream& out_;
};

// Exit codes: 0 success, 1 domain error, 2 usage error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Algebraic characters of reductive pairs: root data, Weyl characters, localization kernels, branching"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Expand all help");

    auto common = [&](CLI::App* c) {
        c->add_option("--system", o.system, "Root system label (A1, A1xA1, A2, B2, G2, BC1)");
        c->add_option("--datum-file", o.datum_file, "Root datum in text form");
        c->add_flag("--json", o.json, "Machine-readable output");
    };
    auto kernel_flags = [&](CLI::App* c) {
        common(c);
        c->add_option("--roots", o.roots, "Roots in coordinates, e.g. 2 or 2;4 (default: simple roots)");
        c->add_option("--powers", o.powers, "Exponents, e.g. 1,1");
        c->add_option("--lambda0", o.lambda0, "Base point in coordinates");
        c->add_option("--window", o.window, "lo:hi[,lo:hi...]");
    };

    std::function<void(Runner&)> action;
    auto bind = [&](CLI::App* c, void (Runner::*f)()) { c->callback([&action, f] { action = [f](Runner& r) { (r.*f)(); }; }); };

    auto* rd = app.add_subcommand("rootdatum", "Describe a root datum");
    common(rd);
    bind(rd, &Runner::rootdatum);

    auto* dn = app.add_subcommand("denom", "Weyl denominator of a parabolic");
    common(dn);
    dn->add_option("--parabolic", o.parabolic, "Omit this simple root from the Levi (default: Borel)");
    dn->add_flag("--check", o.check, "Also compute the alternating-sum form and compare");
    bind(dn, &Runner::denom);

    auto* ch = app.add_subcommand("char", "Characters of finite-dimensional modules");
    ch->require_subcommand(1);
    auto* cw = ch->add_subcommand("weyl", "Weyl character fraction and its expansion");
    common(cw);
    cw->add_option("--highest", o.highest, "Highest weight in fundamental coordinates");
    bind(cw, &Runner::char_weyl);
    auto* cc = ch->add_subcommand("compose", "Relative character and transitivity check");
    common(cc);
    cc->add_option("--highest", o.highest, "Highest weight in fundamental coordinates");
    cc->add_option("--parabolic", o.parabolic, "Omit this simple root from the Levi");
    bind(cc, &Runner::char_compose);
    auto* ct = ch->add_subcommand("translate", "Translate a Weyl numerator by mu");
    common(ct);
    ct->add_option("--highest", o.highest, "Highest weight in fundamental coordinates");
    ct->add_option("--mu", o.mu, "Translation weight in fundamental coordinates");
    bind(ct, &Runner::char_translate);

    auto* co = app.add_subcommand("cohomology", "Lie algebra cohomology");
    co->require_subcommand(1);
    auto* ck = co->add_subcommand("kostant", "Levi highest weights of u-cohomology by degree");
    common(ck);
    ck->add_option("--highest", o.highest, "Highest weight in fundamental coordinates");
    ck->add_option("--parabolic", o.parabolic, "Omit this simple root from the Levi (default: Borel)");
    ck->add_option("--degree", o.degree, "Only this degree");
    bind(ck, &Runner::cohomology_kostant);

    auto* ke = app.add_subcommand("kernel", "Localization kernel");
    ke->require_subcommand(1);
    auto* kb = ke->add_subcommand("basis", "Generators of the kernel");
    kernel_flags(kb);
    kb->add_flag("--expand", o.expand, "Print expansions on the window");
    bind(kb, &Runner::kernel_basis_cmd);
    auto* kc = ke->add_subcommand("check", "Membership of a series in the kernel span");
    kernel_flags(kc);
    kc->add_option("--series", o.series, "Series JSON, or @file");
    bind(kc, &Runner::kernel_check);
    auto* kr = ke->add_subcommand("regularity", "Generators against their regularity strips");
    kernel_flags(kr);
    bind(kr, &Runner::kernel_regularity);

    auto* br = app.add_subcommand("branch", "Branching computations");
    br->require_subcommand(1);
    auto* bt = br->add_subcommand("sl2-tensor", "D_m (x) D_n for SL(2,R)");
    bt->add_option("args", o.positional, "m n")->expected(2);
    bt->add_option("--terms", o.terms, "Number of summands to list");
    bt->add_option("--window", o.window, "Certificate window (default 0:60)");
    bt->add_flag("--json", o.json, "Machine-readable output");
    bind(bt, &Runner::branch_sl2_tensor);
    auto* bp = br->add_subcommand("sl2-principal", "Principal series restricted to SO(2)");
    bp->add_option("args", o.positional, "delta")->expected(1);
    bp->add_option("--window", o.window, "lo:hi");
    bp->add_flag("--json", o.json, "Machine-readable output");
    bind(bp, &Runner::branch_sl2_principal);
    auto* bs = br->add_subcommand("so3-blattner", "GL(3)/SO(3) kernel generators and thresholds");
    bs->add_option("--terms", o.terms, "Largest k of Z_k to compare (default 20)");
    bs->add_option("--min", o.min_ktype, "Test K-types a alpha, (a+1) alpha, ... for this a");
    bs->add_flag("--json", o.json, "Machine-readable output");
    bind(bs, &Runner::branch_so3_blattner);

    auto* ce = app.add_subcommand("check", "Regularity conditions");
    ce->require_subcommand(1);
    auto* cs = ce->add_subcommand("condition-s", "Condition (S) for a list of K-types");
    cs->add_option("--setting", o.setting, "sl2 or gl3so3");
    cs->add_option("--ktypes", o.ktypes, "K-type highest weights, e.g. 2;4;6");
    cs->add_option("--lambda0", o.lambda0, "Base point in coordinates");
    cs->add_flag("--json", o.json, "Machine-readable output");
    bind(cs, &Runner::check_condition_s);
    auto* cp = ce->add_subcommand("condition-sprime", "Condition (S') for infinitesimal characters");
    cp->add_option("--setting", o.setting, "sl2 or gl3so3");
    cp->add_option("--inf", o.inf, "Infinitesimal characters, e.g. 3;5");
    cp->add_option("--lambda0", o.lambda0, "Base point in coordinates");
    cp->add_option("--b", o.b, "Growth exponent");
    cp->add_flag("--json", o.json, "Machine-readable output");
    bind(cp, &Runner::check_condition_sprime);

    // Default for so3-blattner differs from sl2-tensor.
    bs->preparse_callback([&](std::size_t) { o.terms = 20; });

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }
    if (!action) {
        err << "usage error: no command selected\n";
        return 2;
    }
    try {
        Runner r(o, out);
        action(r);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace algchar::cli
