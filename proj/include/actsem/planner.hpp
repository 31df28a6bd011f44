#pragma once

#include <cstdint>
#include <vector>

#include "actsem/pddl.hpp"

namespace actsem {

struct SearchLimits {
    double wall_time_s = 30.0;    // 0 disables the wall clock; negative counts as expired
    uint64_t max_expansions = 0;  // 0 disables; preferred limit for reproducible runs
    int k = 3;                    // candidate trajectories to return
};

enum class PlanKind { solution, candidates, unsolvable };

struct PlanResult {
    PlanKind kind = PlanKind::unsolvable;
    Plan plan;                     // solution only
    std::vector<Plan> candidates;  // longest explored root paths, length desc then lex asc
    uint64_t expansions = 0;
};

// True iff every believed ground precondition (with polarity) holds.
bool applicable(const State& state, const GroundAction& action, const Domain& belief);

// True iff some recorded failed prefix is a prefix of the plan.
bool extends_failed_prefix(const Plan& plan, const std::vector<Plan>& failed_prefixes);

// Forward search over the believed domain. Blind breadth-first by default;
// greedy best-first with an additive relaxation heuristic when greedy is set.
// Returns a solution, or the k longest distinct explored root-to-node action
// sequences that survive the failed-prefix filter. kind == unsolvable only
// when the reachable space was exhausted within the limits.
PlanResult plan(const Domain& belief, const Problem& problem, const SearchLimits& limits,
                const std::vector<Plan>& failed_prefixes = {}, bool greedy = false,
                bool distinct_args = false);

}  // namespace actsem
