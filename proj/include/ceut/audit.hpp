// audit.hpp - concrete-input checks of classical choice axioms under CEU.
//
// Each audit evaluates real problems and reports what it saw: a verdict, a
// witness when something is violated, and the evaluation rows behind it.
// Nothing here proves an axiom in general; ensemble audits count outcomes
// over seeded random problems.

#pragma once

#include "ceut/evaluator.hpp"
#include "ceut/policy.hpp"
#include "ceut/prospect.hpp"
#include "ceut/random_problem.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ceut {

class AuditError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Preference { Preferred, Dispreferred, Indifferent };

enum class Verdict { HoldsOnInput, ViolatedOnInput };

inline const char* to_string(Verdict v) {
    return v == Verdict::HoldsOnInput ? "holds-on-input" : "violated-on-input";
}

/// Either a fixed marking or a profile from which markings are derived.
using MarkingSource = std::variant<Marking, Profile>;

struct PreferenceMatrix final {
    std::vector<std::string> names;
    std::vector<std::vector<Preference>> relation;  // relation[i][j]: how names[i] compares to names[j]
    EvaluationMode mode = EvaluationMode::Joint;
    std::string source;                    // "marking" or the policy name
    std::vector<Evaluation> evaluations;   // one joint evaluation, or one per pair

    [[nodiscard]] bool prefers(std::size_t i, std::size_t j) const { return relation[i][j] == Preference::Preferred; }
};

struct Cycle final {
    std::array<std::string, 3> members;  // members[0] > members[1] > members[2] > members[0]
};

struct EvidenceRow final {
    std::string context;
    EvaluationRow row;
};

struct AuditReport final {
    std::string axiom;
    Verdict verdict = Verdict::HoldsOnInput;
    std::string witness;
    std::vector<EvidenceRow> evidence;
    std::map<std::string, double> metrics;  // ensemble counts and rates

    [[nodiscard]] bool holds() const { return verdict == Verdict::HoldsOnInput; }
};

namespace detail {

inline Preference compare(double a, double b) {
    if (a > b) return Preference::Preferred;
    if (a < b) return Preference::Dispreferred;
    return Preference::Indifferent;
}

inline Marking resolve_marking(const DecisionProblem& problem, const MarkingSource& source) {
    if (const auto* m = std::get_if<Marking>(&source)) return restrict_marking(*m, problem);
    return apply_policy(problem, std::get<Profile>(source));
}

inline std::string source_name(const MarkingSource& source) {
    if (std::holds_alternative<Marking>(source)) return "marking";
    return to_string(std::get<Profile>(source).policy);
}

inline const char* symbol(Preference p) {
    switch (p) {
        case Preference::Preferred: return ">";
        case Preference::Dispreferred: return "<";
        case Preference::Indifferent: return "~";
    }
    return "?";
}

inline void append_rows(std::vector<EvidenceRow>& out, const std::string& context, const Evaluation& ev) {
    for (const auto& row : ev.rows) out.push_back({context, row});
}

}  // namespace detail

/// In pairwise mode each pair is evaluated in isolation, so each member's only
/// alternative is the other; supplied markings are restricted to the pair and
/// policies are re-run on it.
inline PreferenceMatrix preference_matrix(const DecisionProblem& problem, const MarkingSource& source,
                                          EvaluationMode mode) {
    require_valid(problem);
    const auto n = problem.size();
    PreferenceMatrix m;
    m.mode = mode;
    m.source = detail::source_name(source);
    for (const auto& p : problem.prospects) m.names.push_back(p.name);
    m.relation.assign(n, std::vector<Preference>(n, Preference::Indifferent));

    if (mode == EvaluationMode::Joint) {
        auto ev = evaluate(problem, detail::resolve_marking(problem, source), EvaluationMode::Joint);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) m.relation[i][j] = detail::compare(ev.rows[i].ceu, ev.rows[j].ceu);
        m.evaluations.push_back(std::move(ev));
        return m;
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto pair = pair_of(problem, i, j);
            auto ev = evaluate(pair, detail::resolve_marking(pair, source), EvaluationMode::Pairwise);
            const auto pref = detail::compare(ev.rows[0].ceu, ev.rows[1].ceu);
            m.relation[i][j] = pref;
            m.relation[j][i] = pref == Preference::Preferred     ? Preference::Dispreferred
                               : pref == Preference::Dispreferred ? Preference::Preferred
                                                                  : Preference::Indifferent;
            m.evaluations.push_back(std::move(ev));
        }
    }
    return m;
}

/// Every strict 3-cycle, reported once with its lowest-index member first.
inline std::vector<Cycle> find_cycles(const PreferenceMatrix& matrix) {
    std::vector<Cycle> cycles;
    const auto n = matrix.names.size();
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
            for (std::size_t w = u + 1; w < n; ++w)
                if (v != w && matrix.prefers(u, v) && matrix.prefers(v, w) && matrix.prefers(w, u))
                    cycles.push_back({{matrix.names[u], matrix.names[v], matrix.names[w]}});
    return cycles;
}

inline std::string describe(const Cycle& c) {
    return c.members[0] + " > " + c.members[1] + " > " + c.members[2] + " > " + c.members[0];
}

inline AuditReport audit_transitivity(const DecisionProblem& problem, const MarkingSource& source,
                                      EvaluationMode mode) {
    const auto matrix = preference_matrix(problem, source, mode);
    const auto cycles = find_cycles(matrix);
    AuditReport report;
    report.axiom = "transitivity";
    report.metrics["cycles"] = static_cast<double>(cycles.size());
    if (!cycles.empty()) {
        report.verdict = Verdict::ViolatedOnInput;
        report.witness = describe(cycles.front());
    }
    for (const auto& ev : matrix.evaluations) {
        std::string ctx = to_string(mode);
        if (mode == EvaluationMode::Pairwise) ctx += " " + ev.rows[0].prospect + "/" + ev.rows[1].prospect;
        detail::append_rows(report.evidence, ctx, ev);
    }
    return report;
}

struct EnsembleOptions final {
    std::size_t problems = 1000;
    std::uint64_t seed = 0;
    std::size_t prospects = 3;
    Profile profile{};
    EvaluationMode mode = EvaluationMode::Pairwise;
    GeneratorLimits limits{};
};

/// Cycle count over seeded random problems. The count is an empirical finding.
inline AuditReport transitivity_ensemble(const EnsembleOptions& opts) {
    ProblemGenerator gen(opts.seed, opts.limits);
    AuditReport report;
    report.axiom = "transitivity";
    std::size_t cyclic_problems = 0, total_cycles = 0;
    for (std::size_t k = 0; k < opts.problems; ++k) {
        const auto problem = gen.next(opts.prospects);
        const auto matrix = preference_matrix(problem, opts.profile, opts.mode);
        const auto cycles = find_cycles(matrix);
        if (cycles.empty()) continue;
        ++cyclic_problems;
        total_cycles += cycles.size();
        if (report.witness.empty()) {
            report.verdict = Verdict::ViolatedOnInput;
            report.witness = "problem #" + std::to_string(k) + ": " + describe(cycles.front());
            for (const auto& ev : matrix.evaluations) detail::append_rows(report.evidence, "problem #" + std::to_string(k), ev);
        }
    }
    report.metrics["problems"] = static_cast<double>(opts.problems);
    report.metrics["seed"] = static_cast<double>(opts.seed);
    report.metrics["problems_with_cycles"] = static_cast<double>(cyclic_problems);
    report.metrics["cycles"] = static_cast<double>(total_cycles);
    return report;
}

// ---------------------------------------------------------------------------
// Cancellation (independence)
// ---------------------------------------------------------------------------

/// A pair after cancelling a common branch. Probabilities sum to less than one,
/// so this is deliberately not a DecisionProblem.
struct ReducedPair final {
    std::array<Prospect, 2> prospects;
    double cancelled_probability = 0.0;
};

inline constexpr double kBranchTolerance = 1e-12;

namespace detail {

// Removes `branch` from `p`; an outcome at the same value with more mass is
// split into the branch plus the remainder.
inline Prospect cancel_branch(const Prospect& p, const Outcome& branch) {
    Prospect out = p;
    auto same_value = [&](const Outcome& o) { return o.value == branch.value; };
    for (auto it = out.outcomes.begin(); it != out.outcomes.end(); ++it) {
        if (same_value(*it) && std::fabs(it->probability - branch.probability) <= kBranchTolerance) {
            out.outcomes.erase(it);
            return out;
        }
    }
    for (auto& o : out.outcomes) {
        if (same_value(o) && o.probability > branch.probability) {
            o.probability -= branch.probability;
            return out;
        }
    }
    std::ostringstream os;
    os << "prospect '" << p.name << "' has no branch " << branch.value << "@" << branch.probability;
    throw AuditError(os.str());
}

inline bool same_distribution(const Prospect& a, const Prospect& b, double tol) {
    if (a.outcomes.size() != b.outcomes.size()) return false;
    auto sorted = [](std::vector<Outcome> v) {
        std::sort(v.begin(), v.end(), [](const Outcome& x, const Outcome& y) {
            return x.value != y.value ? x.value < y.value : x.probability < y.probability;
        });
        return v;
    };
    const auto sa = sorted(a.outcomes), sb = sorted(b.outcomes);
    for (std::size_t i = 0; i < sa.size(); ++i)
        if (sa[i].value != sb[i].value || std::fabs(sa[i].probability - sb[i].probability) > tol) return false;
    return true;
}

inline std::string render(const Prospect& p) {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < p.outcomes.size(); ++i)
        os << (i ? ", " : "") << p.outcomes[i].value << '@' << p.outcomes[i].probability;
    os << '}';
    return os.str();
}

}  // namespace detail

inline ReducedPair cancel_common_branch(const DecisionProblem& pair, const Outcome& branch) {
    if (pair.size() != 2) throw AuditError("cancellation needs a pair of prospects");
    ReducedPair out;
    out.cancelled_probability = branch.probability;
    if (branch.probability == 0.0) {
        out.prospects = {pair.prospects[0], pair.prospects[1]};
        return out;
    }
    out.prospects = {detail::cancel_branch(pair.prospects[0], branch), detail::cancel_branch(pair.prospects[1], branch)};
    return out;
}

inline bool same_reduction(const ReducedPair& a, const ReducedPair& b, double tol = 1e-9) {
    return detail::same_distribution(a.prospects[0], b.prospects[0], tol) &&
           detail::same_distribution(a.prospects[1], b.prospects[1], tol);
}

/// Compares CEU preferences on two pairs that cancel to the same reduced pair.
inline AuditReport audit_independence(const DecisionProblem& pair_one, const DecisionProblem& pair_two,
                                      const Outcome& branch_one, const Outcome& branch_two,
                                      const MarkingSource& source_one, const MarkingSource& source_two) {
    require_valid(pair_one);
    require_valid(pair_two);
    const auto red_one = cancel_common_branch(pair_one, branch_one);
    const auto red_two = cancel_common_branch(pair_two, branch_two);
    if (!same_reduction(red_one, red_two))
        throw AuditError("pairs do not cancel to the same reduced pair: " + detail::render(red_one.prospects[0]) +
                         " vs " + detail::render(red_two.prospects[0]) + ", " + detail::render(red_one.prospects[1]) +
                         " vs " + detail::render(red_two.prospects[1]));

    const auto ev_one = evaluate(pair_one, detail::resolve_marking(pair_one, source_one), EvaluationMode::Pairwise);
    const auto ev_two = evaluate(pair_two, detail::resolve_marking(pair_two, source_two), EvaluationMode::Pairwise);
    const auto pref_one = detail::compare(ev_one.rows[0].ceu, ev_one.rows[1].ceu);
    const auto pref_two = detail::compare(ev_two.rows[0].ceu, ev_two.rows[1].ceu);

    AuditReport report;
    report.axiom = "independence";
    detail::append_rows(report.evidence, "pair one", ev_one);
    detail::append_rows(report.evidence, "pair two", ev_two);
    const std::string relation_one = ev_one.rows[0].prospect + " " + detail::symbol(pref_one) + " " + ev_one.rows[1].prospect;
    const std::string relation_two = ev_two.rows[0].prospect + " " + detail::symbol(pref_two) + " " + ev_two.rows[1].prospect;
    if (pref_one != pref_two) {
        report.verdict = Verdict::ViolatedOnInput;
        report.witness = relation_one + " but " + relation_two + "; both reduce to " +
                         detail::render(red_one.prospects[0]) + " vs " + detail::render(red_one.prospects[1]);
    } else {
        report.witness = relation_one + " and " + relation_two;
    }
    return report;
}

// ---------------------------------------------------------------------------
// Frame shift (invariance)
// ---------------------------------------------------------------------------

inline DecisionProblem frame_shift(const DecisionProblem& problem, double offset) {
    DecisionProblem out = problem;
    for (auto& p : out.prospects)
        for (auto& o : p.outcomes) o.value += offset;
    return out;
}

namespace detail {

inline std::string join(const std::vector<std::string>& names) {
    std::string s;
    for (std::size_t i = 0; i < names.size(); ++i) s += (i ? " > " : "") + names[i];
    return s;
}

inline AuditReport compare_frames(const Evaluation& original, const Evaluation& shifted, double offset) {
    AuditReport report;
    report.axiom = "invariance";
    const auto order_a = rank(original).order();
    const auto order_b = rank(shifted).order();
    append_rows(report.evidence, "original", original);
    std::ostringstream ctx;
    ctx << "shifted by " << offset;
    append_rows(report.evidence, ctx.str(), shifted);
    if (order_a != order_b) {
        report.verdict = Verdict::ViolatedOnInput;
        report.witness = "original " + join(order_a) + " but shifted " + join(order_b);
    } else {
        report.witness = "both frames rank " + join(order_a);
    }
    return report;
}

}  // namespace detail

/// The same index-wise marking is applied in both frames.
inline AuditReport audit_invariance(const DecisionProblem& problem, double offset, const Marking& marking) {
    const auto shifted = frame_shift(problem, offset);
    return detail::compare_frames(evaluate(problem, marking), evaluate(shifted, marking), offset);
}

/// Variant that re-derives the marking from `profile` in each frame.
inline AuditReport audit_invariance_policy(const DecisionProblem& problem, double offset, const Profile& profile) {
    const auto shifted = frame_shift(problem, offset);
    return detail::compare_frames(evaluate(problem, apply_policy(problem, profile)),
                                  evaluate(shifted, apply_policy(shifted, profile)), offset);
}

/// Agreement rate of original and shifted rankings over random problems and offsets.
inline AuditReport invariance_ensemble(const EnsembleOptions& opts, std::int64_t offset_bound = 1000) {
    ProblemGenerator gen(opts.seed, opts.limits);
    AuditReport report;
    report.axiom = "invariance";
    std::size_t disagreements = 0;
    for (std::size_t k = 0; k < opts.problems; ++k) {
        const auto problem = gen.next(opts.prospects);
        const auto offset = static_cast<double>(gen.offset(offset_bound));
        const auto r = audit_invariance_policy(problem, offset, opts.profile);
        if (r.holds()) continue;
        if (disagreements++ == 0) {
            report.verdict = Verdict::ViolatedOnInput;
            report.witness = "problem #" + std::to_string(k) + ": " + r.witness;
            report.evidence = r.evidence;
        }
    }
    report.metrics["problems"] = static_cast<double>(opts.problems);
    report.metrics["seed"] = static_cast<double>(opts.seed);
    report.metrics["disagreements"] = static_cast<double>(disagreements);
    report.metrics["agreement_rate"] =
        opts.problems ? 1.0 - static_cast<double>(disagreements) / static_cast<double>(opts.problems) : 1.0;
    return report;
}

}  // namespace ceut
