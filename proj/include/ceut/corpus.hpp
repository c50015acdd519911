// corpus.hpp - worked-example fixtures and their replay against the evaluator.
//
// A fixture is one or more decisions, each a problem document plus the
// verbatim marking and the printed Ex / |CCC| / CEU values with explicit
// per-field tolerances. Fixtures live as JSON files in a corpus directory:
// $CEUT_CORPUS_DIR when set, otherwise the directory compiled in as
// CEUT_DEFAULT_CORPUS_DIR.

#pragma once

#include "ceut/audit.hpp"
#include "ceut/evaluator.hpp"
#include "ceut/json_io.hpp"
#include "ceut/prospect.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#ifndef CEUT_DEFAULT_CORPUS_DIR
#define CEUT_DEFAULT_CORPUS_DIR "corpus"
#endif

namespace ceut {

class UnknownFixture : public std::runtime_error {
public:
    explicit UnknownFixture(const std::string& id) : std::runtime_error("unknown fixture '" + id + "'") {}
};

struct ExpectedValue final {
    double printed = 0.0;
    double tol = 0.0;
    std::optional<double> exact;  // when the printed figure is rounded or wrong
};

struct ExpectedRow final {
    std::string prospect;
    ExpectedValue ex, abs_ccc, ceu;
    std::string note;
};

struct PairwiseExpectation final {
    std::string first, second;
    double first_ceu = 0.0, second_ceu = 0.0;
    double tol = 0.0;
};

struct FixtureDecision final {
    DecisionProblem problem;
    Marking marking;
    EvaluationMode mode = EvaluationMode::Joint;
    std::string recommend;
    std::vector<ExpectedRow> expected;
    std::vector<PairwiseExpectation> pairwise;
    std::optional<Outcome> cancel;  // common branch for the independence audit
};

struct Fixture final {
    std::string id;
    std::string source;
    std::string note;
    std::optional<Profile> profile;  // tolerant parameters that reproduce the marking
    std::vector<FixtureDecision> decisions;
};

// ---------------------------------------------------------------------------
// (De)serialization
// ---------------------------------------------------------------------------

namespace detail {

inline ExpectedValue expected_value_from_json(const Json& j, const std::string& where) {
    ExpectedValue v;
    v.printed = number(member(j, "printed", where), where + ".printed");
    v.tol = number(member(j, "tol", where), where + ".tol");
    if (!(v.tol >= 0.0)) throw FormatError(where + ".tol: must be non-negative");
    if (j.contains("exact")) v.exact = number(j.at("exact"), where + ".exact");
    return v;
}

inline Json to_json(const ExpectedValue& v) {
    Json j{{"printed", v.printed}, {"tol", v.tol}};
    if (v.exact) j["exact"] = *v.exact;
    return j;
}

}  // namespace detail

inline Fixture fixture_from_json(const Json& doc) {
    Fixture f;
    const auto& id = detail::member(doc, "id", "fixture");
    if (!id.is_string()) throw FormatError("fixture.id: expected a string");
    f.id = id.get<std::string>();
    f.source = doc.value("source", "");
    f.note = doc.value("note", "");
    if (doc.contains("profile")) f.profile = profile_from_json(doc.at("profile"));
    const auto& decisions = detail::member(doc, "decisions", "fixture " + f.id);
    if (!decisions.is_array() || decisions.empty()) throw FormatError("fixture " + f.id + ": decisions must be a non-empty array");
    for (std::size_t d = 0; d < decisions.size(); ++d) {
        const auto& jd = decisions[d];
        const std::string where = f.id + ".decisions[" + std::to_string(d) + "]";
        FixtureDecision dec;
        dec.problem = problem_from_json(jd);
        dec.marking = marking_from_json(detail::member(jd, "marking", where));
        dec.mode = mode_from_string(jd.value("mode", "joint"));
        dec.recommend = jd.value("recommend", "");
        for (const auto& je : detail::member(jd, "expected", where)) {
            const std::string ew = where + ".expected";
            ExpectedRow row;
            row.prospect = detail::member(je, "prospect", ew).get<std::string>();
            row.ex = detail::expected_value_from_json(detail::member(je, "ex", ew), ew + ".ex");
            row.abs_ccc = detail::expected_value_from_json(detail::member(je, "abs_ccc", ew), ew + ".abs_ccc");
            row.ceu = detail::expected_value_from_json(detail::member(je, "ceu", ew), ew + ".ceu");
            row.note = je.value("note", "");
            dec.expected.push_back(std::move(row));
        }
        if (jd.contains("pairwise")) {
            for (const auto& jp : jd.at("pairwise")) {
                const std::string pw = where + ".pairwise";
                const auto& pair = detail::member(jp, "pair", pw);
                const auto& ceus = detail::member(jp, "ceu", pw);
                if (pair.size() != 2 || ceus.size() != 2) throw FormatError(pw + ": pair and ceu need two entries");
                dec.pairwise.push_back({pair[0].get<std::string>(), pair[1].get<std::string>(),
                                        detail::number(ceus[0], pw), detail::number(ceus[1], pw),
                                        detail::number(detail::member(jp, "tol", pw), pw + ".tol")});
            }
        }
        if (jd.contains("cancel")) {
            const auto& jc = jd.at("cancel");
            dec.cancel = Outcome{detail::number(detail::member(jc, "value", where + ".cancel"), where + ".cancel.value"),
                                 detail::probability(detail::member(jc, "p", where + ".cancel"), where + ".cancel.p")};
        }
        // every prospect needs an expectation
        for (const auto& p : dec.problem.prospects) {
            const bool covered = std::any_of(dec.expected.begin(), dec.expected.end(),
                                             [&](const ExpectedRow& r) { return r.prospect == p.name; });
            if (!covered) throw FormatError(where + ": no expected row for prospect '" + p.name + "'");
        }
        f.decisions.push_back(std::move(dec));
    }
    return f;
}

inline Json to_json(const Fixture& f) {
    Json decisions = Json::array();
    for (const auto& d : f.decisions) {
        Json jd = to_json(d.problem);
        jd["marking"] = to_json(d.marking);
        jd["mode"] = to_string(d.mode);
        jd["recommend"] = d.recommend;
        Json expected = Json::array();
        for (const auto& e : d.expected) {
            Json je{{"prospect", e.prospect},
                    {"ex", detail::to_json(e.ex)},
                    {"abs_ccc", detail::to_json(e.abs_ccc)},
                    {"ceu", detail::to_json(e.ceu)}};
            if (!e.note.empty()) je["note"] = e.note;
            expected.push_back(std::move(je));
        }
        jd["expected"] = std::move(expected);
        if (!d.pairwise.empty()) {
            Json pw = Json::array();
            for (const auto& p : d.pairwise)
                pw.push_back({{"pair", {p.first, p.second}}, {"ceu", {p.first_ceu, p.second_ceu}}, {"tol", p.tol}});
            jd["pairwise"] = std::move(pw);
        }
        if (d.cancel) jd["cancel"] = {{"value", d.cancel->value}, {"p", d.cancel->probability}};
        decisions.push_back(std::move(jd));
    }
    Json j{{"id", f.id}, {"source", f.source}, {"note", f.note}, {"decisions", std::move(decisions)}};
    if (f.profile) j["profile"] = to_json(*f.profile);
    return j;
}

// ---------------------------------------------------------------------------
// Loading
// ---------------------------------------------------------------------------

inline std::filesystem::path corpus_dir() {
    if (const char* env = std::getenv("CEUT_CORPUS_DIR"); env && *env) return env;
    return CEUT_DEFAULT_CORPUS_DIR;
}

inline std::vector<std::string> fixture_ids(const std::filesystem::path& dir = corpus_dir()) {
    std::vector<std::string> ids;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec))
        if (entry.is_regular_file() && entry.path().extension() == ".json") ids.push_back(entry.path().stem().string());
    std::sort(ids.begin(), ids.end());
    return ids;
}

inline Fixture load_fixture(const std::string& id, const std::filesystem::path& dir = corpus_dir()) {
    const bool safe = !id.empty() && std::all_of(id.begin(), id.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
    });
    if (!safe) throw UnknownFixture(id);
    std::ifstream in(dir / (id + ".json"));
    if (!in) throw UnknownFixture(id);
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw FormatError("fixture " + id + ": " + e.what());
    }
    auto f = fixture_from_json(doc);
    if (f.id != id) throw FormatError("fixture file " + id + ".json declares id '" + f.id + "'");
    return f;
}

/// The verbatim marking of every decision in the fixture, merged by prospect name.
inline Marking replicate_fixture_marking(const std::string& id, const std::filesystem::path& dir = corpus_dir()) {
    Marking merged;
    for (const auto& d : load_fixture(id, dir).decisions) merged.insert(d.marking.begin(), d.marking.end());
    return merged;
}

// ---------------------------------------------------------------------------
// Replay
// ---------------------------------------------------------------------------

struct FieldCheck final {
    std::string label;  // e.g. "A.ceu"
    double computed = 0.0;
    double expected = 0.0;
    double tol = 0.0;
    bool pass = false;
};

struct ReplayReport final {
    std::string fixture;
    std::vector<Evaluation> evaluations;
    std::vector<FieldCheck> checks;
    std::vector<std::string> failures;

    [[nodiscard]] bool pass() const { return failures.empty(); }
};

inline ReplayReport replay(const Fixture& fixture) {
    ReplayReport report;
    report.fixture = fixture.id;
    auto check = [&](std::string label, double computed, double expected, double tol) {
        const bool ok = std::fabs(computed - expected) <= tol;
        if (!ok) {
            std::ostringstream os;
            os.precision(10);
            os << label << ": computed " << computed << ", expected " << expected << " +/- " << tol;
            report.failures.push_back(os.str());
        }
        report.checks.push_back({std::move(label), computed, expected, tol, ok});
    };

    for (const auto& d : fixture.decisions) {
        Evaluation ev;
        try {
            ev = evaluate(d.problem, d.marking, d.mode);
        } catch (const std::exception& e) {
            report.failures.push_back(std::string("evaluation failed: ") + e.what());
            continue;
        }
        for (const auto& exp : d.expected) {
            const auto it = std::find_if(ev.rows.begin(), ev.rows.end(),
                                         [&](const EvaluationRow& r) { return r.prospect == exp.prospect; });
            if (it == ev.rows.end()) {
                report.failures.push_back("no computed row for '" + exp.prospect + "'");
                continue;
            }
            check(exp.prospect + ".ex", it->ex, exp.ex.printed, exp.ex.tol);
            check(exp.prospect + ".abs_ccc", std::fabs(it->ccc), exp.abs_ccc.printed, exp.abs_ccc.tol);
            check(exp.prospect + ".ceu", it->ceu, exp.ceu.printed, exp.ceu.tol);
        }
        if (!d.recommend.empty()) {
            const auto top = rank(ev).top();
            if (top != d.recommend) report.failures.push_back("recommendation: computed " + top + ", expected " + d.recommend);
        }
        for (const auto& pw : d.pairwise) {
            const auto pair = pair_of(d.problem, d.problem.index_of(pw.first), d.problem.index_of(pw.second));
            const auto pev = evaluate(pair, restrict_marking(d.marking, pair), EvaluationMode::Pairwise);
            const std::string ctx = pw.first + "/" + pw.second + " pairwise ";
            check(ctx + pw.first + ".ceu", pev.rows[0].ceu, pw.first_ceu, pw.tol);
            check(ctx + pw.second + ".ceu", pev.rows[1].ceu, pw.second_ceu, pw.tol);
        }
        report.evaluations.push_back(std::move(ev));
    }
    return report;
}

}  // namespace ceut
