// random_problem.hpp - seeded generator of small decision problems.
//
// Draws use raw mt19937_64 output with integer arithmetic only, so a given
// seed yields the same problems on every standard library.

#pragma once

#include "ceut/prospect.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace ceut {

struct GeneratorLimits final {
    std::size_t min_prospects = 2;
    std::size_t max_prospects = 6;
    std::size_t min_outcomes = 1;
    std::size_t max_outcomes = 5;
    std::int64_t min_value = -1000;
    std::int64_t max_value = 1000;
};

class ProblemGenerator {
public:
    explicit ProblemGenerator(std::uint64_t seed, GeneratorLimits limits = {}) : rng_(seed), limits_(limits) {}

    DecisionProblem next() { return next(uniform(limits_.min_prospects, limits_.max_prospects)); }

    DecisionProblem next(std::size_t prospect_count) {
        DecisionProblem problem;
        for (std::size_t k = 0; k < prospect_count; ++k) {
            Prospect p;
            p.name = prospect_name(k);
            const auto n = uniform(limits_.min_outcomes, limits_.max_outcomes);
            std::vector<std::uint64_t> weights(n);
            std::uint64_t total = 0;
            for (auto& w : weights) total += (w = uniform(1, 20));
            for (std::size_t i = 0; i < n; ++i) {
                const auto span = static_cast<std::uint64_t>(limits_.max_value - limits_.min_value);
                const auto value = limits_.min_value + static_cast<std::int64_t>(uniform(0, span));
                p.outcomes.push_back({static_cast<double>(value),
                                      static_cast<double>(weights[i]) / static_cast<double>(total)});
            }
            problem.prospects.push_back(std::move(p));
        }
        return problem;
    }

    /// Integer offset in [-bound, bound].
    std::int64_t offset(std::int64_t bound) {
        return static_cast<std::int64_t>(uniform(0, static_cast<std::uint64_t>(2 * bound))) - bound;
    }

    std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) { return lo + rng_() % (hi - lo + 1); }

    static std::string prospect_name(std::size_t k) {
        std::string name;
        do {
            name.insert(name.begin(), static_cast<char>('A' + k % 26));
            k /= 26;
        } while (k-- > 0);
        return name;
    }

private:
    std::mt19937_64 rng_;
    GeneratorLimits limits_;
};

}  // namespace ceut
