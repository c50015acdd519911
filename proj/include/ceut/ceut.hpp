// ceut.hpp - umbrella header (everything except the HTTP service).
#pragma once

#include "ceut/audit.hpp"
#include "ceut/corpus.hpp"
#include "ceut/evaluator.hpp"
#include "ceut/json_io.hpp"
#include "ceut/policy.hpp"
#include "ceut/prospect.hpp"
#include "ceut/random_problem.hpp"
