// problems.hpp - worked problems built in code, independent of the corpus files.
#pragma once

#include "ceut/prospect.hpp"

namespace testdata {

using ceut::DecisionProblem;
using ceut::Marking;

inline DecisionProblem gamble_4000_vs_3000() {
    return {{{"A", {{4000, 0.8}, {0, 0.2}}}, {"B", {{3000, 1.0}}}}};
}

inline DecisionProblem certain_loss_750() {
    return {{{"A", {{-750, 1.0}}}, {"B", {{-1000, 0.75}, {0, 0.25}}}}};
}

inline DecisionProblem three_gambles() {
    return {{{"A", {{4000, 0.8}, {0, 0.2}}}, {"B", {{3000, 1.0}}}, {"C", {{5000, 0.8}, {0, 0.2}}}}};
}

inline Marking three_gambles_marking() { return {{"A", {false, true}}, {"B", {false}}, {"C", {false, true}}}; }

inline DecisionProblem allais_first() { return {{{"s1", {{100, 1.0}}}, {"r1", {{115, 0.10}, {100, 0.89}, {0, 0.01}}}}}; }
inline DecisionProblem allais_second() { return {{{"s2", {{100, 0.11}, {0, 0.89}}}, {"r2", {{115, 0.10}, {0, 0.90}}}}}; }

inline DecisionProblem lives_saved() { return {{{"A", {{200, 1.0}}}, {"B", {{600, 1.0 / 3.0}, {0, 2.0 / 3.0}}}}}; }
inline DecisionProblem lives_lost() { return {{{"C", {{-400, 1.0}}}, {"D", {{0, 1.0 / 3.0}, {-600, 2.0 / 3.0}}}}}; }

inline DecisionProblem rare_gain() { return {{{"A", {{5000, 0.001}, {0, 0.999}}}, {"B", {{5, 1.0}}}}}; }
inline DecisionProblem rare_loss() { return {{{"C", {{-5000, 0.001}, {0, 0.999}}}, {"D", {{-5, 1.0}}}}}; }

}  // namespace testdata
