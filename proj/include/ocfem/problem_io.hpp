#pragma once

// JSON problem documents.
//
//   { "name": "...", "bc": "dirichlet" | "mixed", "beta": 1.0,
//     "f": PS, "psi": PS, "yd": PS,
//     "exact": { "ybar": PS, "ubar": PS (optional, defaults to -ybar'' - f),
//                "active_set": { "points": [x...], "intervals": [[a, b]...] },
//                "mu": { "atoms": [[x, mass]...],
//                        "density_breakpoints": [...], "density_segments": [...] } } }
//
// PS (piecewise smooth) is either a number (a constant) or
//   { "breakpoints": [interior x...], "segments": [SEG...] }
// with one more segment than breakpoints. SEG is a single term or an array of
// terms that are summed:
//   { "kind": "poly", "coeffs": [c0, c1, ...] }            ascending powers
//   { "kind": "sin" | "cos", "amp": a, "freq": w, "phase": p }  a*sin(w x + p)

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "problems.hpp"

namespace ocfem {

namespace detail {

using nlohmann::json;

inline double number_at(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw SchemaError(where + ": missing numeric field '" + key + "'");
    return j.at(key).get<double>();
}

inline void parse_term(const json& t, Segment& seg, const std::string& where) {
    if (!t.is_object() || !t.contains("kind") || !t.at("kind").is_string())
        throw SchemaError(where + ": segment term needs a string 'kind'");
    const std::string kind = t.at("kind").get<std::string>();
    if (kind == "poly") {
        if (!t.contains("coeffs") || !t.at("coeffs").is_array())
            throw SchemaError(where + ": poly term needs a 'coeffs' array");
        Segment p;
        for (const auto& c : t.at("coeffs")) {
            if (!c.is_number()) throw SchemaError(where + ": poly coefficients must be numbers");
            p.poly.push_back(c.get<double>());
        }
        seg += p;
    } else if (kind == "sin" || kind == "cos") {
        TrigTerm term;
        term.kind = kind == "sin" ? TrigTerm::Kind::sin : TrigTerm::Kind::cos;
        term.amp = number_at(t, "amp", where);
        term.freq = number_at(t, "freq", where);
        term.phase = t.contains("phase") ? number_at(t, "phase", where) : 0.0;
        seg.trig.push_back(term);
    } else {
        throw SchemaError(where + ": unknown term kind '" + kind + "'");
    }
}

inline std::vector<double> parse_numbers(const json& j, const std::string& where) {
    if (!j.is_array()) throw SchemaError(where + ": expected an array of numbers");
    std::vector<double> v;
    for (const auto& x : j) {
        if (!x.is_number()) throw SchemaError(where + ": expected an array of numbers");
        v.push_back(x.get<double>());
    }
    return v;
}

inline PiecewiseSmooth parse_piecewise(const json& j, const std::string& where) {
    if (j.is_number()) return PiecewiseSmooth::constant(j.get<double>());
    if (!j.is_object()) throw SchemaError(where + ": expected a number or a piecewise object");
    std::vector<double> bps;
    if (j.contains("breakpoints")) bps = parse_numbers(j.at("breakpoints"), where + ".breakpoints");
    if (!j.contains("segments") || !j.at("segments").is_array())
        throw SchemaError(where + ": missing 'segments' array");
    std::vector<Segment> segs;
    for (const auto& s : j.at("segments")) {
        Segment seg;
        if (s.is_array()) {
            for (const auto& t : s) parse_term(t, seg, where);
        } else {
            parse_term(s, seg, where);
        }
        segs.push_back(std::move(seg));
    }
    try {
        return PiecewiseSmooth(std::move(bps), std::move(segs));
    } catch (const InvalidArgument& e) {
        throw SchemaError(where + ": " + e.what());
    }
}

inline json term_json(const TrigTerm& t) {
    return {{"kind", t.kind == TrigTerm::Kind::sin ? "sin" : "cos"}, {"amp", t.amp}, {"freq", t.freq}, {"phase", t.phase}};
}

inline json segment_json(const Segment& s) {
    json terms = json::array();
    if (!s.poly.empty() || s.trig.empty()) terms.push_back({{"kind", "poly"}, {"coeffs", s.poly.empty() ? std::vector<double>{0.0} : s.poly}});
    for (const auto& t : s.trig) terms.push_back(term_json(t));
    return terms.size() == 1 ? terms[0] : terms;
}

inline json piecewise_json(const PiecewiseSmooth& p) {
    json segs = json::array();
    for (const auto& s : p.segments()) segs.push_back(segment_json(s));
    return {{"breakpoints", std::vector<double>(p.breakpoints().begin(), p.breakpoints().end())}, {"segments", segs}};
}

} // namespace detail

/// Parse and validate a problem document.
inline ProblemSpec load_problem(const nlohmann::json& doc) {
    using detail::json;
    if (!doc.is_object()) throw SchemaError("problem: document must be a JSON object");
    ProblemSpec p;
    p.name = doc.value("name", std::string("custom"));
    if (!doc.contains("bc") || !doc.at("bc").is_string()) throw SchemaError("problem: missing string field 'bc'");
    const std::string bc = doc.at("bc").get<std::string>();
    if (bc == "dirichlet")
        p.bc = BcKind::dirichlet;
    else if (bc == "mixed")
        p.bc = BcKind::mixed;
    else
        throw SchemaError("problem: 'bc' must be \"dirichlet\" or \"mixed\", got \"" + bc + "\"");
    p.beta = detail::number_at(doc, "beta", "problem");
    for (const char* key : {"f", "psi", "yd"})
        if (!doc.contains(key)) throw SchemaError(std::string("problem: missing field '") + key + "'");
    p.f = detail::parse_piecewise(doc.at("f"), "f");
    p.psi = detail::parse_piecewise(doc.at("psi"), "psi");
    p.y_d = detail::parse_piecewise(doc.at("yd"), "yd");

    if (doc.contains("exact")) {
        const json& e = doc.at("exact");
        if (!e.is_object() || !e.contains("ybar")) throw SchemaError("exact: needs a 'ybar' field");
        ExactInfo ex;
        ex.ybar = detail::parse_piecewise(e.at("ybar"), "exact.ybar");
        ex.ubar = e.contains("ubar") ? detail::parse_piecewise(e.at("ubar"), "exact.ubar")
                                     : detail::control_from_state(ex.ybar, p.f);
        if (e.contains("active_set")) {
            const json& a = e.at("active_set");
            if (a.contains("points")) ex.active_set.points = detail::parse_numbers(a.at("points"), "exact.active_set.points");
            if (a.contains("intervals")) {
                for (const auto& iv : a.at("intervals")) {
                    const auto ab = detail::parse_numbers(iv, "exact.active_set.intervals");
                    if (ab.size() != 2 || ab[0] > ab[1]) throw SchemaError("exact.active_set.intervals: need [a, b] with a <= b");
                    ex.active_set.intervals.emplace_back(ab[0], ab[1]);
                }
            }
        }
        if (e.contains("mu")) {
            const json& m = e.at("mu");
            if (m.contains("atoms")) {
                for (const auto& at : m.at("atoms")) {
                    const auto xm = detail::parse_numbers(at, "exact.mu.atoms");
                    if (xm.size() != 2) throw SchemaError("exact.mu.atoms: need [x, mass] pairs");
                    ex.mu.atoms.push_back({xm[0], xm[1]});
                }
            }
            if (m.contains("density_segments")) {
                json ps = {{"segments", m.at("density_segments")}};
                if (m.contains("density_breakpoints")) ps["breakpoints"] = m.at("density_breakpoints");
                ex.mu.density = detail::parse_piecewise(ps, "exact.mu.density");
            }
        }
        p.exact = std::move(ex);
    }
    p.validate();
    return p;
}

inline nlohmann::json to_json(const ProblemSpec& p) {
    using detail::json;
    json doc = {{"name", p.name},
                {"bc", std::string(to_string(p.bc))},
                {"beta", p.beta},
                {"f", detail::piecewise_json(p.f)},
                {"psi", detail::piecewise_json(p.psi)},
                {"yd", detail::piecewise_json(p.y_d)}};
    if (p.exact) {
        const ExactInfo& ex = *p.exact;
        json e = {{"ybar", detail::piecewise_json(ex.ybar)}, {"ubar", detail::piecewise_json(ex.ubar)}};
        json intervals = json::array();
        for (auto [a, b] : ex.active_set.intervals) intervals.push_back({a, b});
        e["active_set"] = {{"points", ex.active_set.points}, {"intervals", intervals}};
        json atoms = json::array();
        for (const auto& a : ex.mu.atoms) atoms.push_back({a.x, a.mass});
        json mu = {{"atoms", atoms}};
        if (ex.mu.density) {
            const json d = detail::piecewise_json(*ex.mu.density);
            mu["density_breakpoints"] = d.at("breakpoints");
            mu["density_segments"] = d.at("segments");
        }
        e["mu"] = mu;
        doc["exact"] = e;
    }
    return doc;
}

inline ProblemSpec load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open problem file '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("problem file '" + path + "' is not valid JSON: " + e.what());
    }
    return load_problem(doc);
}

} // namespace ocfem
