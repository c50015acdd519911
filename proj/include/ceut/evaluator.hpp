// evaluator.hpp - comparative expected utility of mutually exclusive prospects.
//
// For each prospect P the pipeline computes
//   ex          = sum_i value_i * p_i
//   best_alt    = unchosen prospect with the largest ex (least loss in losses)
//   ccc         = (sum of p_i over marked outcomes of P) * ex(best_alt)
//   ceu         = ex - |ccc|
// and ranks prospects by ceu. Expected-utility and conventional
// opportunity-cost rankings are provided as baselines.

#pragma once

#include "ceut/prospect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ceut {

enum class EvaluationMode { Joint, Pairwise };

inline const char* to_string(EvaluationMode m) { return m == EvaluationMode::Joint ? "joint" : "pairwise"; }

class EvaluationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct EvaluationRow final {
    std::string prospect;
    double ex = 0.0;
    std::string best_alt;
    double best_alt_ex = 0.0;
    double ccc_prob_mass = 0.0;
    double ccc = 0.0;  // signed: mass * best_alt_ex
    double ceu = 0.0;
    bool best_alt_tie = false;  // another unchosen prospect had the same ex
};

struct Evaluation final {
    EvaluationMode mode = EvaluationMode::Joint;
    std::vector<EvaluationRow> rows;
    bool mixed_domain = false;  // some ex > 0 and some ex < 0
    std::vector<std::string> warnings;
};

struct RankEntry final {
    std::string prospect;
    double score = 0.0;  // ceu, ex or opportunity-cost score depending on the ranking
    double ex = 0.0;
};

struct Ranking final {
    std::vector<RankEntry> entries;  // best first
    std::vector<std::string> tie_breaks;

    [[nodiscard]] std::vector<std::string> order() const {
        std::vector<std::string> names;
        names.reserve(entries.size());
        for (const auto& e : entries) names.push_back(e.prospect);
        return names;
    }

    [[nodiscard]] const std::string& top() const { return entries.at(0).prospect; }
};

inline double expected_value(const Prospect& prospect) {
    double sum = 0.0;
    for (const auto& o : prospect.outcomes) sum += o.value * o.probability;
    return sum;
}

struct BestAlternative final {
    std::string name;
    double ex = 0.0;
    bool tie = false;
};

/// Unchosen prospect with maximal expected value; earliest in problem order on ties.
inline BestAlternative best_alternative(const DecisionProblem& problem, const std::string& chosen) {
    const auto ci = problem.index_of(chosen);
    if (ci == problem.size()) throw EvaluationError("unknown prospect '" + chosen + "'");
    BestAlternative best;
    bool found = false;
    for (std::size_t i = 0; i < problem.size(); ++i) {
        if (i == ci) continue;
        const double ex = expected_value(problem.prospects[i]);
        if (!found || ex > best.ex) {
            best = {problem.prospects[i].name, ex, false};
            found = true;
        } else if (ex == best.ex) {
            best.tie = true;
        }
    }
    if (!found) throw EvaluationError("prospect '" + chosen + "' has no alternative");
    return best;
}

struct CccResult final {
    double prob_mass = 0.0;
    double ccc = 0.0;
};

inline CccResult ccc(const Prospect& prospect, const std::vector<bool>& marks, double best_alt_ex) {
    if (marks.size() != prospect.outcomes.size())
        throw EvaluationError("marking for '" + prospect.name + "' has " + std::to_string(marks.size()) +
                              " flags, expected " + std::to_string(prospect.outcomes.size()));
    double mass = 0.0;
    for (std::size_t i = 0; i < marks.size(); ++i)
        if (marks[i]) mass += prospect.outcomes[i].probability;
    return {mass, mass * best_alt_ex};
}

/// The absolute value makes the cost of chance a penalty in gains and losses alike.
inline double ceu(double ex, double ccc_value) { return ex - std::fabs(ccc_value); }

inline Evaluation evaluate(const DecisionProblem& problem, const Marking& marking,
                           EvaluationMode mode = EvaluationMode::Joint) {
    require_valid(problem);
    require_marking(problem, marking);
    if (mode == EvaluationMode::Pairwise && problem.size() != 2)
        throw EvaluationError("pairwise evaluation needs exactly 2 prospects, got " + std::to_string(problem.size()));

    Evaluation out;
    out.mode = mode;
    bool any_gain = false, any_loss = false;
    for (const auto& p : problem.prospects) {
        EvaluationRow row;
        row.prospect = p.name;
        row.ex = expected_value(p);
        const auto alt = best_alternative(problem, p.name);
        row.best_alt = alt.name;
        row.best_alt_ex = alt.ex;
        row.best_alt_tie = alt.tie;
        const auto c = ccc(p, marking.at(p.name), alt.ex);
        row.ccc_prob_mass = c.prob_mass;
        row.ccc = c.ccc;
        row.ceu = ceu(row.ex, row.ccc);
        if (alt.tie)
            out.warnings.push_back("best alternative of '" + p.name + "' is tied; picked '" + alt.name +
                                   "' by problem order");
        any_gain = any_gain || row.ex > 0.0;
        any_loss = any_loss || row.ex < 0.0;
        out.rows.push_back(std::move(row));
    }
    out.mixed_domain = any_gain && any_loss;
    if (out.mixed_domain) out.warnings.emplace_back("mixed-domain problem: both gains and losses in expected values");
    return out;
}

namespace detail {

// Sort by score desc, then ex desc, then input order.
inline Ranking rank_entries(std::vector<RankEntry> entries) {
    Ranking r;
    std::vector<std::size_t> idx(entries.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (entries[a].score != entries[b].score) return entries[a].score > entries[b].score;
        return entries[a].ex > entries[b].ex;
    });
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const auto& e = entries[idx[k]];
        if (k + 1 < idx.size()) {
            const auto& next = entries[idx[k + 1]];
            if (e.score == next.score) {
                r.tie_breaks.push_back(e.prospect + " ahead of " + next.prospect +
                                       (e.ex != next.ex ? " (equal score, higher ex)" : " (equal score and ex, problem order)"));
            }
        }
        r.entries.push_back(e);
    }
    return r;
}

}  // namespace detail

inline Ranking rank(const std::vector<EvaluationRow>& rows) {
    if (rows.empty()) throw EvaluationError("cannot rank an empty evaluation");
    std::vector<RankEntry> entries;
    entries.reserve(rows.size());
    for (const auto& row : rows) entries.push_back({row.prospect, row.ceu, row.ex});
    return detail::rank_entries(std::move(entries));
}

inline Ranking rank(const Evaluation& evaluation) { return rank(evaluation.rows); }

inline Ranking eut_rank(const DecisionProblem& problem) {
    require_valid(problem);
    std::vector<RankEntry> entries;
    for (const auto& p : problem.prospects) {
        const double ex = expected_value(p);
        entries.push_back({p.name, ex, ex});
    }
    return detail::rank_entries(std::move(entries));
}

/// Ranks by ex_i - max_{j != i} ex_j, the textbook opportunity-cost adjustment.
inline Ranking conventional_oc_rank(const DecisionProblem& problem) {
    require_valid(problem);
    std::vector<RankEntry> entries;
    for (const auto& p : problem.prospects) {
        const double ex = expected_value(p);
        entries.push_back({p.name, ex - best_alternative(problem, p.name).ex, ex});
    }
    return detail::rank_entries(std::move(entries));
}

/// Population variance of outcome values; informational only.
inline double variance(const Prospect& prospect) {
    const double mean = expected_value(prospect);
    double v = 0.0;
    for (const auto& o : prospect.outcomes) v += o.probability * (o.value - mean) * (o.value - mean);
    return v;
}

}  // namespace ceut
