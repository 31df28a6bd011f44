#pragma once

#include <optional>
#include <string>
#include <vector>

#include "actsem/pddl.hpp"

namespace actsem {

enum class StepStatus { applied, failed };

struct StepOutcome {
    StepStatus status = StepStatus::applied;
    State added;    // atoms that became true
    State deleted;  // atoms that became false
    std::vector<GroundLiteral> violated;  // unsatisfied preconditions, sorted; nonempty iff failed
};

struct TrajectoryFeedback {
    Plan valid_prefix;
    std::vector<StepOutcome> step_outcomes;  // one per prefix action, all applied
    std::optional<GroundAction> failed_action;
    std::string error_message;  // nonempty iff a step failed or the goal was missed
    bool goal_reached = false;
    State final_state;

    int executed_steps() const {
        return static_cast<int>(valid_prefix.size()) + (failed_action ? 1 : 0);
    }
};

// Applies one action to a state under the given (fully specified) domain.
// Fails, listing every unsatisfied ground precondition, when any is violated.
StepOutcome step(const State& state, const GroundAction& action, const Domain& truth);

// New state after an applied step: delete-then-add.
State apply_step(const State& state, const GroundAction& action, const Domain& domain);

// Runs the plan from the problem's initial state until the first failure or
// plan end, then tests the goal. With error_messages disabled the messages
// reduce to constants carrying no literals.
TrajectoryFeedback execute_trajectory(const Problem& problem, const Plan& plan,
                                      const Domain& truth, bool error_messages = true);

// Frozen message formats (the rule predictor parses these).
std::string format_failure_message(const GroundAction& action,
                                   const std::vector<GroundLiteral>& violated,
                                   bool error_messages);
std::string format_goal_miss_message(const std::vector<GroundLiteral>& unsatisfied,
                                     bool error_messages);

}  // namespace actsem
