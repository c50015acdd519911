// policy.hpp - automatic CCC marking rules standing in for a decision-maker's
// risk profile. Manual markings are data and never pass through here.

#pragma once

#include "ceut/evaluator.hpp"
#include "ceut/prospect.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ceut {

enum class Policy { Manual, StrictComparison, Tolerant };

inline const char* to_string(Policy p) {
    switch (p) {
        case Policy::Manual: return "manual";
        case Policy::StrictComparison: return "strict_comparison";
        case Policy::Tolerant: return "tolerant";
    }
    return "unknown";
}

struct Profile final {
    Policy policy = Policy::StrictComparison;
    double tolerance_rel = 0.0;        // relative slack below the alternative's ex
    double aspiration_gain = 0.0;      // certain gains below this are regretful
    double loss_pain_threshold = 0.0;  // certain losses at least this large are regretful

    friend bool operator==(const Profile&, const Profile&) = default;
};

class PolicyError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline void validate_profile(const Profile& profile) {
    if (profile.policy == Policy::Manual) return;
    auto check = [](double v, const char* name) {
        if (!std::isfinite(v) || v < 0.0)
            throw PolicyError(std::string(name) + " must be finite and non-negative");
    };
    check(profile.tolerance_rel, "tolerance_rel");
    check(profile.aspiration_gain, "aspiration_gain");
    check(profile.loss_pain_threshold, "loss_pain_threshold");
}

namespace detail {

inline bool tolerant_marks(const Outcome& o, bool certain, double alt_ex, const Profile& profile) {
    if (certain) {
        if (o.value >= 0.0) return o.value < profile.aspiration_gain;
        return -o.value >= profile.loss_pain_threshold;
    }
    return o.value < alt_ex - profile.tolerance_rel * std::fabs(alt_ex);
}

}  // namespace detail

/// Marks each outcome against the expected value of its prospect's best alternative.
/// Outcomes with zero probability are never marked.
inline Marking apply_policy(const DecisionProblem& problem, const Profile& profile) {
    if (profile.policy == Policy::Manual)
        throw PolicyError("manual markings are supplied as data, not derived from a policy");
    validate_profile(profile);
    require_valid(problem);

    Marking marking;
    for (const auto& p : problem.prospects) {
        const double alt_ex = best_alternative(problem, p.name).ex;
        const bool certain = p.is_certain();
        std::vector<bool> flags(p.outcomes.size(), false);
        for (std::size_t i = 0; i < p.outcomes.size(); ++i) {
            const auto& o = p.outcomes[i];
            if (o.probability == 0.0) continue;
            flags[i] = profile.policy == Policy::StrictComparison ? o.value < alt_ex
                                                                  : detail::tolerant_marks(o, certain, alt_ex, profile);
        }
        marking[p.name] = std::move(flags);
    }
    return marking;
}

}  // namespace ceut
