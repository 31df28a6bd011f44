#pragma once

#include <vector>

#include "actsem/pddl.hpp"
#include "actsem/prompts.hpp"
#include "actsem/rng.hpp"

namespace actsem {

struct SamplerConfig {
    int v = 10;  // prospection steps / random-sampler draw count
    int l = 1;   // trajectories per loop
    int k = 3;   // candidate trajectories passed to the sampler
    int g = 5;   // failed trajectories shown in the prompt
};

// Longest surviving candidate (if any) followed by exactly v uniform draws.
Plan sample_random(const std::vector<GroundAction>& ground_actions,
                   const std::vector<Plan>& candidates, int v, Rng& rng);

struct ProspectResult {
    Plan plan;
    bool diverged = false;  // some planned action was believed-inapplicable
    bool cap_hit = false;   // resampling found no applicable action at a position
};

// Validates/repairs the first v steps against the believed semantics without
// touching the environment. If the first min(v, len) planned actions are all
// believed-applicable the original plan is returned unchanged; otherwise the
// plan is cut at the first invalid position and refilled with uniformly
// resampled believed-applicable actions until v actions are fixed. Each
// position tries at most 100 * |ground actions| draws; hitting that cap
// returns the prefix fixed so far.
ProspectResult prospect(const Plan& plan, const Domain& belief, const Problem& problem,
                        const std::vector<GroundAction>& ground_actions, int v, Rng& rng);

// Candidates that do not extend any recorded failed prefix.
std::vector<Plan> filter_candidates(const std::vector<Plan>& candidates,
                                    const std::vector<Plan>& failed_prefixes);

// Prompt selection: only trajectories with at least 3 executed steps qualify;
// g of them are drawn uniformly without replacement, reported in original
// order.
std::vector<FailedTrajectory> select_failed_for_prompt(const std::vector<FailedTrajectory>& pool,
                                                       int g, Rng& rng);

// Count of leading actions applicable in believed forward simulation (used
// for prospection audits).
int believed_valid_prefix_len(const Plan& plan, const Domain& belief, const Problem& problem);

}  // namespace actsem
