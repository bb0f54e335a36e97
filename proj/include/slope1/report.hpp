// slope1/report.hpp
// SPDX-License-Identifier: Apache-2.0
//
// JSON renderings of engine and verifier results.  Keys keep insertion
// order so the same query always prints the same bytes.
#pragma once

#include <string>

#include "json.hpp"

#include "binomial.hpp"
#include "engine.hpp"
#include "structure.hpp"
#include "witness.hpp"

namespace slope1 {

using Json = nlohmann::ordered_json;

inline Json to_json(const Fq& x) { return Json{{"a0", x.a0()}, {"a1", x.a1()}}; }

inline Json to_json(const ReductionResult& res) {
    Json j;
    if (!res.reducible()) {
        j["type"] = "irreducible";
        j["omega2_exp"] = res.induced_exp;
        return j;
    }
    j["type"] = "reducible";
    j["lambda"] = to_json(*res.lambda);
    Json fs = Json::array();
    for (const auto& f : res.factors) fs.push_back({{"mu", f.inverse ? "lambda_inv" : "lambda"}, {"omega_exp", f.omega_exp}});
    j["factors"] = fs;
    return j;
}

inline Json to_json(const LLCDescriptor& d) {
    Json arr = Json::array();
    for (const auto& f : d) arr.push_back({{"r", f.r}, {"lambda", f.lambda.str()}, {"eta_omega_exp", f.eta_omega_exp}});
    return arr;
}

// The `reduce` record.  Ramification and LLC are optional sections.
inline Json reduce_json(const CrystallineParams& c, bool with_ramification, bool with_llc) {
    ReductionResult res = reduce_slope_one(c);
    Json j;
    j["p"] = c.p;
    j["k"] = c.k;
    j["ap"] = c.ap_text;
    j["slope_check"] = c.ap.valuation();
    j["reduction"] = to_json(res);
    if (with_ramification) {
        RamificationClass rc = classify_ramification(c, res);
        j["ramification"] = rc.str();
        if (!rc.note.empty()) j["ramification_note"] = rc.note;
    }
    if (with_llc) j["llc"] = to_json(llc(res, c.p));
    j["precision_used"] = needed_precision(c);
    return j;
}

inline Json to_json(const CongruenceReport& r) {
    Json params = Json::object();
    for (const auto& [k, v] : r.params) params[k] = v;
    return Json{{"suite", "lemmas"},    {"item", r.lemma},           {"params", params},
                {"lhs", r.lhs.str()},   {"rhs", r.rhs.str()},         {"modulus", r.modulus.str()},
                {"holds", r.pass}};
}

inline Json to_json(const StructureReport& r) {
    return Json{{"suite", "structure"}, {"item", r.lemma}, {"p", r.p}, {"r", r.r}, {"holds", r.pass}, {"detail", r.detail}};
}

inline Json to_json(const WitnessReport& w) {
    auto terms = [](const std::vector<WitnessImageTerm>& ts) {
        Json arr = Json::array();
        for (const auto& t : ts) arr.push_back({{"vertex", t.vertex.str()}, {"vector", t.vector}});
        return arr;
    };
    return Json{{"suite", "witnesses"},
                {"item", w.case_id},
                {"p", w.p},
                {"r", w.r},
                {"ap", w.ap},
                {"integral", w.integral},
                {"min_valuation", w.min_valuation},
                {"image_location", w.image_location},
                {"image", terms(w.image)},
                {"claim", terms(w.claim)},
                {"matches_claim", w.matches_claim},
                {"holds", w.integral && w.matches_claim},
                {"precision_used", w.precision_used},
                {"detail", w.detail}};
}

}  // namespace slope1
