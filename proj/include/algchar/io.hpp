#pragma once

// JSON encodings shared by the command-line tool and the tests. Keys keep insertion order and
// terms are written in lexicographic weight order, so output is byte-stable.

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "branch.hpp"
#include "charring.hpp"
#include "error.hpp"
#include "kernel.hpp"
#include "lattice.hpp"
#include "rational.hpp"
#include "series.hpp"

namespace algchar::io {

using Json = nlohmann::ordered_json;

inline Json to_json(const Weight& w) { return Json(std::vector<std::int64_t>(w.begin(), w.end())); }

inline Json to_json(const Box& b)
{
    Json out = Json::array();
    for (const auto& iv : b.intervals()) {
        out.push_back({iv.lo, iv.hi});
    }
    return out;
}

inline Json to_json(const FormalSeries& s)
{
    Json terms = Json::array();
    for (const auto& [w, c] : s.terms()) {
        terms.push_back({{"w", to_json(w)}, {"c", to_string(c)}});
    }
    Json support;
    if (s.is_finite()) {
        support["kind"] = "finite";
    } else {
        support["kind"] = "window";
        support["box"] = to_json(s.window()->box);
        support["exact"] = to_json(s.window()->exact);
    }
    return {{"terms", terms}, {"support", support}};
}

inline Json to_json(const CharacterFraction& f)
{
    Json den = Json::array();
    for (const auto& [root, m] : f.denominator) {
        den.push_back({{"root", to_json(root)}, {"mult", m}});
    }
    return {{"num", to_json(f.numerator)}, {"den", den}};
}

inline Json to_json(const KernelGenerator& g)
{
    Json roots = Json::array();
    for (const auto& r : g.roots) {
        roots.push_back(to_json(r));
    }
    return {{"descriptor", g.describe()},
            {"roots", roots},
            {"powers", g.powers},
            {"dplus", g.dplus},
            {"representative", to_json(g.representative)},
            {"lambda0", to_json(g.lambda0)},
            {"removed", g.removed}};
}

inline Json to_json(const BranchingResult& r)
{
    Json out;
    Json terms = Json::array();
    for (const auto& [label, m] : r.terms) {
        terms.push_back({{"module", label}, {"mult", m}});
    }
    out["terms"] = terms;
    if (r.family) {
        out["family"] = {{"base", r.family->base}, {"step", r.family->step}, {"mult", r.family->mult}};
    }
    out["window"] = to_json(r.window);
    Json cert = Json::array();
    for (const auto& [what, ok] : r.certificate) {
        cert.push_back({{"check", what}, {"ok", ok}});
    }
    out["certificate"] = cert;
    out["verified"] = r.verified();
    return out;
}

inline Json to_json(const RegularityReport& r)
{
    Json out{{"ok", r.ok}, {"nsum_bound", r.total_nsum_bound}, {"widest_strip", to_string(r.widest_strip)}};
    if (r.first_violation) {
        const auto& v = *r.first_violation;
        Json numbering = Json::array();
        for (const auto& b : v.numbering) {
            numbering.push_back(to_json(b));
        }
        out["first_violation"] = {{"lambda", to_json(v.lambda)}, {"weyl_index", v.weyl_index},
                                  {"numbering", numbering},      {"n", v.n},
                                  {"lhs", to_string(v.lhs)},     {"rhs", to_string(v.rhs)}};
    }
    return out;
}

inline Weight weight_from_json(const Json& j)
{
    if (!j.is_array()) {
        throw ValidationError("weight must be a JSON array of integers");
    }
    std::vector<std::int64_t> c;
    for (const auto& x : j) {
        if (!x.is_number_integer()) {
            throw ValidationError("weight coordinates must be integers");
        }
        c.push_back(x.get<std::int64_t>());
    }
    return Weight(c);
}

inline Box box_from_json(const Json& j)
{
    std::vector<Interval> iv;
    for (const auto& p : j) {
        if (!p.is_array() || p.size() != 2) {
            throw ValidationError("box entries must be [min,max] pairs");
        }
        iv.push_back({p[0].get<std::int64_t>(), p[1].get<std::int64_t>()});
    }
    return Box(iv);
}

// Inverse of to_json(FormalSeries). An empty finite series needs an explicit "rank".
inline FormalSeries series_from_json(const Json& j)
{
    if (!j.is_object() || !j.contains("terms") || !j.contains("support")) {
        throw ValidationError("series JSON needs \"terms\" and \"support\"");
    }
    FormalSeries::Terms terms;
    std::size_t rank = j.value("rank", std::size_t{0});
    for (const auto& t : j.at("terms")) {
        Weight w = weight_from_json(t.at("w"));
        if (rank == 0) {
            rank = w.rank();
        } else if (w.rank() != rank) {
            throw ValidationError("series terms have mixed ranks");
        }
        terms[w] += parse_rational(t.at("c").get<std::string>());
    }
    const auto& sup = j.at("support");
    const std::string kind = sup.at("kind").get<std::string>();
    if (kind == "finite") {
        if (rank == 0) {
            throw ValidationError("empty finite series needs a \"rank\" field");
        }
        return FormalSeries::finite(rank, terms);
    }
    if (kind != "window") {
        throw ValidationError("unknown support kind '" + kind + "'");
    }
    Box box = box_from_json(sup.at("box"));
    Box exact = box_from_json(sup.at("exact"));
    return FormalSeries::windowed(box.rank(), terms, SupportWindow{box, exact});
}

} // namespace algchar::io
