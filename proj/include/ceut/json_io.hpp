// json_io.hpp - JSON documents for problems, markings, profiles and results.
//
//   problem  {"prospects":[{"name":"A","outcomes":[{"value":4000,"p":0.8},...]},...]}
//            "p" may also be {"num":1,"den":3}
//   marking  {"A":[false,true],"B":[false]}
//   profile  {"policy":"tolerant","tolerance_rel":0.01,"aspiration_gain":1000,"loss_pain_threshold":100}
//
// Output objects have sorted keys and full-precision numbers, so dump() is
// byte-stable for identical inputs.

#pragma once

#include "ceut/audit.hpp"
#include "ceut/evaluator.hpp"
#include "ceut/policy.hpp"
#include "ceut/prospect.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace ceut {

using Json = nlohmann::json;

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline const Json& member(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw FormatError(where + ": missing \"" + key + "\"");
    return j.at(key);
}

inline double number(const Json& j, const std::string& where) {
    if (!j.is_number()) throw FormatError(where + ": expected a number");
    return j.get<double>();
}

inline double probability(const Json& j, const std::string& where) {
    if (j.is_object()) {
        const double num = number(member(j, "num", where), where + ".num");
        const double den = number(member(j, "den", where), where + ".den");
        if (den == 0.0) throw FormatError(where + ": zero denominator");
        return num / den;
    }
    return number(j, where);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Problems
// ---------------------------------------------------------------------------

/// Structural parse only; call validate_problem() for the semantic checks.
inline DecisionProblem problem_from_json(const Json& doc) {
    const auto& list = detail::member(doc, "prospects", "problem");
    if (!list.is_array()) throw FormatError("problem.prospects: expected an array");
    DecisionProblem problem;
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string where = "prospects[" + std::to_string(i) + "]";
        const auto& jp = list[i];
        const auto& name = detail::member(jp, "name", where);
        if (!name.is_string()) throw FormatError(where + ".name: expected a string");
        const auto& outs = detail::member(jp, "outcomes", where);
        if (!outs.is_array()) throw FormatError(where + ".outcomes: expected an array");
        Prospect p{name.get<std::string>(), {}};
        for (std::size_t k = 0; k < outs.size(); ++k) {
            const std::string ow = where + ".outcomes[" + std::to_string(k) + "]";
            p.outcomes.push_back({detail::number(detail::member(outs[k], "value", ow), ow + ".value"),
                                  detail::probability(detail::member(outs[k], "p", ow), ow + ".p")});
        }
        problem.prospects.push_back(std::move(p));
    }
    return problem;
}

inline Json to_json(const DecisionProblem& problem) {
    Json list = Json::array();
    for (const auto& p : problem.prospects) {
        Json outs = Json::array();
        for (const auto& o : p.outcomes) outs.push_back({{"value", o.value}, {"p", o.probability}});
        list.push_back({{"name", p.name}, {"outcomes", std::move(outs)}});
    }
    return {{"prospects", std::move(list)}};
}

inline Json to_json(const ValidationReport& report) {
    auto issues = [](const std::vector<Issue>& v) {
        Json a = Json::array();
        for (const auto& i : v) a.push_back({{"kind", to_string(i.kind)}, {"prospect", i.prospect}, {"message", i.message}});
        return a;
    };
    return {{"errors", issues(report.errors)}, {"warnings", issues(report.warnings)}};
}

// ---------------------------------------------------------------------------
// Markings and profiles
// ---------------------------------------------------------------------------

inline Marking marking_from_json(const Json& doc) {
    if (!doc.is_object()) throw FormatError("marking: expected an object");
    Marking m;
    for (const auto& [name, flags] : doc.items()) {
        if (!flags.is_array()) throw FormatError("marking." + name + ": expected an array of booleans");
        std::vector<bool> v;
        for (const auto& f : flags) {
            if (!f.is_boolean()) throw FormatError("marking." + name + ": expected booleans");
            v.push_back(f.get<bool>());
        }
        m[name] = std::move(v);
    }
    return m;
}

inline Json to_json(const Marking& marking) {
    Json j = Json::object();
    for (const auto& [name, flags] : marking) {
        Json a = Json::array();
        for (bool f : flags) a.push_back(f);
        j[name] = std::move(a);
    }
    return j;
}

inline Policy policy_from_string(const std::string& s) {
    if (s == "manual") return Policy::Manual;
    if (s == "strict" || s == "strict_comparison") return Policy::StrictComparison;
    if (s == "tolerant") return Policy::Tolerant;
    throw FormatError("profile.policy: unknown policy '" + s + "'");
}

inline Profile profile_from_json(const Json& doc) {
    const auto& pol = detail::member(doc, "policy", "profile");
    if (!pol.is_string()) throw FormatError("profile.policy: expected a string");
    Profile p;
    p.policy = policy_from_string(pol.get<std::string>());
    auto opt = [&](const char* key, double& field) {
        if (doc.contains(key)) field = detail::number(doc.at(key), std::string("profile.") + key);
    };
    opt("tolerance_rel", p.tolerance_rel);
    opt("aspiration_gain", p.aspiration_gain);
    opt("loss_pain_threshold", p.loss_pain_threshold);
    try {
        validate_profile(p);
    } catch (const PolicyError& e) {
        throw FormatError(std::string("profile: ") + e.what());
    }
    return p;
}

inline Json to_json(const Profile& p) {
    return {{"policy", to_string(p.policy)},
            {"tolerance_rel", p.tolerance_rel},
            {"aspiration_gain", p.aspiration_gain},
            {"loss_pain_threshold", p.loss_pain_threshold}};
}

inline EvaluationMode mode_from_string(const std::string& s) {
    if (s == "joint") return EvaluationMode::Joint;
    if (s == "pairwise") return EvaluationMode::Pairwise;
    throw FormatError("unknown evaluation mode '" + s + "'");
}

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

inline Json to_json(const EvaluationRow& r) {
    return {{"prospect", r.prospect}, {"ex", r.ex},   {"best_alt", r.best_alt}, {"best_alt_ex", r.best_alt_ex},
            {"ccc_prob_mass", r.ccc_prob_mass}, {"ccc", r.ccc}, {"ceu", r.ceu},   {"best_alt_tie", r.best_alt_tie}};
}

inline Json to_json(const Ranking& ranking) {
    Json entries = Json::array();
    for (const auto& e : ranking.entries) entries.push_back({{"prospect", e.prospect}, {"score", e.score}, {"ex", e.ex}});
    return {{"order", entries}, {"tie_breaks", ranking.tie_breaks}};
}

/// Evaluation plus its ranking; the CLI and the service both emit this shape.
inline Json to_json(const Evaluation& ev) {
    Json rows = Json::array();
    for (const auto& r : ev.rows) rows.push_back(to_json(r));
    const auto ranking = rank(ev);
    return {{"mode", to_string(ev.mode)},
            {"rows", std::move(rows)},
            {"ranking", to_json(ranking)},
            {"recommend", ranking.top()},
            {"mixed_domain", ev.mixed_domain},
            {"warnings", ev.warnings}};
}

inline Json to_json(const AuditReport& report) {
    Json evidence = Json::array();
    for (const auto& e : report.evidence) {
        auto row = to_json(e.row);
        row["context"] = e.context;
        evidence.push_back(std::move(row));
    }
    Json j{{"axiom", report.axiom},
           {"verdict", to_string(report.verdict)},
           {"witness", report.witness},
           {"evidence", std::move(evidence)}};
    if (!report.metrics.empty()) j["metrics"] = report.metrics;
    return j;
}

}  // namespace ceut
