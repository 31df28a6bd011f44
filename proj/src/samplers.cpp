#include "actsem/samplers.hpp"

#include <algorithm>
#include <numeric>

#include "actsem/planner.hpp"
#include "actsem/simulator.hpp"

namespace actsem {

Plan sample_random(const std::vector<GroundAction>& ground_actions,
                   const std::vector<Plan>& candidates, int v, Rng& rng) {
    if (ground_actions.empty()) throw std::runtime_error("no ground actions to sample from");
    Plan plan;
    const Plan* longest = nullptr;
    for (const auto& c : candidates)
        if (!c.empty() && (!longest || c.size() > longest->size())) longest = &c;
    if (longest) plan = *longest;
    for (int i = 0; i < v; ++i)
        plan.push_back(ground_actions[rng.next_index(ground_actions.size())]);
    return plan;
}

ProspectResult prospect(const Plan& plan, const Domain& belief, const Problem& problem,
                        const std::vector<GroundAction>& ground_actions, int v, Rng& rng) {
    ProspectResult result;
    State state = problem.init;
    const size_t check_len = std::min<size_t>(static_cast<size_t>(std::max(v, 0)), plan.size());
    size_t pos = 0;
    while (pos < check_len && applicable(state, plan[pos], belief)) {
        state = apply_step(state, plan[pos], belief);
        ++pos;
    }
    if (pos == check_len) {
        result.plan = plan;  // first min(v, len) actions all valid: keep the original
        return result;
    }
    result.diverged = true;
    result.plan.assign(plan.begin(), plan.begin() + static_cast<long>(pos));
    const size_t cap = 100 * ground_actions.size();
    for (; pos < static_cast<size_t>(v); ++pos) {
        bool found = false;
        for (size_t draw = 0; draw < cap; ++draw) {
            const GroundAction& a = ground_actions[rng.next_index(ground_actions.size())];
            if (applicable(state, a, belief)) {
                result.plan.push_back(a);
                state = apply_step(state, a, belief);
                found = true;
                break;
            }
        }
        if (!found) {
            result.cap_hit = true;
            return result;
        }
    }
    return result;
}

std::vector<Plan> filter_candidates(const std::vector<Plan>& candidates,
                                    const std::vector<Plan>& failed_prefixes) {
    std::vector<Plan> out;
    for (const auto& c : candidates)
        if (!extends_failed_prefix(c, failed_prefixes)) out.push_back(c);
    return out;
}

std::vector<FailedTrajectory> select_failed_for_prompt(const std::vector<FailedTrajectory>& pool,
                                                       int g, Rng& rng) {
    std::vector<size_t> eligible;
    for (size_t i = 0; i < pool.size(); ++i)
        if (pool[i].actions.size() >= 3) eligible.push_back(i);
    if (g < 0) g = 0;
    if (eligible.size() > static_cast<size_t>(g)) {
        // Partial Fisher-Yates draw of g distinct indices.
        for (size_t i = 0; i < static_cast<size_t>(g); ++i) {
            size_t j = i + rng.next_index(eligible.size() - i);
            std::swap(eligible[i], eligible[j]);
        }
        eligible.resize(static_cast<size_t>(g));
        std::sort(eligible.begin(), eligible.end());
    }
    std::vector<FailedTrajectory> out;
    out.reserve(eligible.size());
    for (size_t i : eligible) out.push_back(pool[i]);
    return out;
}

int believed_valid_prefix_len(const Plan& plan, const Domain& belief, const Problem& problem) {
    State state = problem.init;
    int n = 0;
    for (const auto& a : plan) {
        if (!applicable(state, a, belief)) break;
        state = apply_step(state, a, belief);
        ++n;
    }
    return n;
}

}  // namespace actsem
