// prospect.hpp - value types for mutually exclusive choice problems.
//
// A DecisionProblem holds two or more Prospects; exactly one may be chosen.
// Each Prospect is a finite lottery of (value, probability) Outcomes. A Marking
// flags, per prospect and per outcome index, the outcomes a decision-maker
// regards as regretful relative to the best unchosen alternative.
//
// The types are plain aggregates. Invariants are checked by validate_problem()
// and check_marking(), which report every violation rather than the first.

#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ceut {

/// Tolerance on |sum(p) - 1| for a prospect to count as a distribution.
inline constexpr double kProbabilitySumTolerance = 1e-9;

struct Outcome final {
    double value = 0.0;
    double probability = 0.0;

    friend bool operator==(const Outcome&, const Outcome&) = default;
};

struct Prospect final {
    std::string name;
    std::vector<Outcome> outcomes;

    [[nodiscard]] double probability_sum() const {
        double sum = 0.0;
        for (const auto& o : outcomes) sum += o.probability;
        return sum;
    }

    [[nodiscard]] bool is_certain() const {
        return outcomes.size() == 1 && outcomes.front().probability == 1.0;
    }

    friend bool operator==(const Prospect&, const Prospect&) = default;
};

struct DecisionProblem final {
    std::vector<Prospect> prospects;

    [[nodiscard]] std::size_t size() const { return prospects.size(); }

    /// Index of the prospect called `name`, or size() when absent.
    [[nodiscard]] std::size_t index_of(const std::string& name) const {
        for (std::size_t i = 0; i < prospects.size(); ++i)
            if (prospects[i].name == name) return i;
        return prospects.size();
    }

    [[nodiscard]] const Prospect& at(const std::string& name) const {
        const auto i = index_of(name);
        if (i == prospects.size()) throw std::out_of_range("unknown prospect '" + name + "'");
        return prospects[i];
    }

    friend bool operator==(const DecisionProblem&, const DecisionProblem&) = default;
};

/// Per-prospect CCC flags, indexed like the prospect's outcomes.
using Marking = std::map<std::string, std::vector<bool>>;

/// All-false marking shaped like `problem` (the expected-utility special case).
inline Marking empty_marking(const DecisionProblem& problem) {
    Marking m;
    for (const auto& p : problem.prospects) m[p.name] = std::vector<bool>(p.outcomes.size(), false);
    return m;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

enum class IssueKind {
    TooFewProspects,
    EmptyName,
    DuplicateName,
    NoOutcomes,
    ProbabilityOutOfRange,
    NonFiniteValue,
    ProbabilitySum,
    ZeroProbability,  // warning only
    MarkingMissingProspect,
    MarkingUnknownProspect,
    MarkingLength,
};

inline const char* to_string(IssueKind k) {
    switch (k) {
        case IssueKind::TooFewProspects: return "too_few_prospects";
        case IssueKind::EmptyName: return "empty_name";
        case IssueKind::DuplicateName: return "duplicate_name";
        case IssueKind::NoOutcomes: return "no_outcomes";
        case IssueKind::ProbabilityOutOfRange: return "probability_out_of_range";
        case IssueKind::NonFiniteValue: return "non_finite_value";
        case IssueKind::ProbabilitySum: return "probability_sum";
        case IssueKind::ZeroProbability: return "zero_probability";
        case IssueKind::MarkingMissingProspect: return "marking_missing_prospect";
        case IssueKind::MarkingUnknownProspect: return "marking_unknown_prospect";
        case IssueKind::MarkingLength: return "marking_length";
    }
    return "unknown";
}

struct Issue final {
    IssueKind kind;
    std::string prospect;  // empty when the issue concerns the whole problem
    std::string message;
};

struct ValidationReport final {
    std::vector<Issue> errors;
    std::vector<Issue> warnings;

    [[nodiscard]] bool ok() const { return errors.empty(); }

    [[nodiscard]] std::string summary() const {
        std::ostringstream os;
        for (const auto& e : errors) os << "error: " << e.message << '\n';
        for (const auto& w : warnings) os << "warning: " << w.message << '\n';
        return os.str();
    }
};

/// Thrown by require_valid() and the parsers; carries the full report.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(ValidationReport report)
        : std::runtime_error(report.summary()), report_(std::move(report)) {}

    [[nodiscard]] const ValidationReport& report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

inline ValidationReport validate_problem(const DecisionProblem& problem) {
    ValidationReport r;
    if (problem.prospects.size() < 2) {
        r.errors.push_back({IssueKind::TooFewProspects, "",
                            "a decision problem needs at least 2 prospects, got " +
                                std::to_string(problem.prospects.size())});
    }
    std::set<std::string> seen;
    for (std::size_t pi = 0; pi < problem.prospects.size(); ++pi) {
        const auto& p = problem.prospects[pi];
        const std::string label = p.name.empty() ? "#" + std::to_string(pi) : p.name;
        if (p.name.empty())
            r.errors.push_back({IssueKind::EmptyName, label, "prospect " + label + " has an empty name"});
        else if (!seen.insert(p.name).second)
            r.errors.push_back({IssueKind::DuplicateName, p.name, "duplicate prospect name '" + p.name + "'"});

        if (p.outcomes.empty()) {
            r.errors.push_back({IssueKind::NoOutcomes, label, "prospect " + label + " has no outcomes"});
            continue;
        }
        for (std::size_t oi = 0; oi < p.outcomes.size(); ++oi) {
            const auto& o = p.outcomes[oi];
            const std::string where = label + "[" + std::to_string(oi) + "]";
            if (!std::isfinite(o.value))
                r.errors.push_back({IssueKind::NonFiniteValue, label, "outcome " + where + " has a non-finite value"});
            if (!std::isfinite(o.probability) || o.probability < 0.0 || o.probability > 1.0) {
                std::ostringstream os;
                os << "outcome " << where << " has probability " << o.probability << " outside [0,1]";
                r.errors.push_back({IssueKind::ProbabilityOutOfRange, label, os.str()});
            } else if (o.probability == 0.0) {
                r.warnings.push_back({IssueKind::ZeroProbability, label, "outcome " + where + " has probability 0"});
            }
        }
        const double sum = p.probability_sum();
        if (!(std::fabs(sum - 1.0) <= kProbabilitySumTolerance)) {
            std::ostringstream os;
            os.precision(12);
            os << "probabilities of " << label << " sum to " << sum << " (deviation " << (sum - 1.0) << ")";
            r.errors.push_back({IssueKind::ProbabilitySum, label, os.str()});
        }
    }
    return r;
}

/// Returns `problem` unchanged, or throws ValidationError with every violation.
inline const DecisionProblem& require_valid(const DecisionProblem& problem) {
    auto report = validate_problem(problem);
    if (!report.ok()) throw ValidationError(std::move(report));
    return problem;
}

inline std::vector<Issue> check_marking(const DecisionProblem& problem, const Marking& marking) {
    std::vector<Issue> issues;
    for (const auto& p : problem.prospects) {
        const auto it = marking.find(p.name);
        if (it == marking.end()) {
            issues.push_back({IssueKind::MarkingMissingProspect, p.name, "marking does not cover prospect '" + p.name + "'"});
        } else if (it->second.size() != p.outcomes.size()) {
            issues.push_back({IssueKind::MarkingLength, p.name,
                              "marking for '" + p.name + "' has " + std::to_string(it->second.size()) +
                                  " flags but the prospect has " + std::to_string(p.outcomes.size()) + " outcomes"});
        }
    }
    for (const auto& [name, flags] : marking) {
        if (problem.index_of(name) == problem.size())
            issues.push_back({IssueKind::MarkingUnknownProspect, name, "marking names unknown prospect '" + name + "'"});
    }
    return issues;
}

inline void require_marking(const DecisionProblem& problem, const Marking& marking) {
    auto issues = check_marking(problem, marking);
    if (!issues.empty()) throw ValidationError(ValidationReport{std::move(issues), {}});
}

/// Sub-problem with the prospects at indices `i` and `j`, in that order.
inline DecisionProblem pair_of(const DecisionProblem& problem, std::size_t i, std::size_t j) {
    return DecisionProblem{{problem.prospects.at(i), problem.prospects.at(j)}};
}

/// Marking entries restricted to the prospects of `sub`.
inline Marking restrict_marking(const Marking& marking, const DecisionProblem& sub) {
    Marking out;
    for (const auto& p : sub.prospects) {
        const auto it = marking.find(p.name);
        if (it != marking.end()) out[p.name] = it->second;
    }
    return out;
}

}  // namespace ceut
