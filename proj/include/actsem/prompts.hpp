#pragma once

#include <string>
#include <vector>

#include "actsem/llm.hpp"
#include "actsem/pddl.hpp"
#include "actsem/simulator.hpp"

namespace actsem {

// A trajectory that did not reach the goal, kept for prompting and for
// banning re-exploration of its failing prefix.
struct FailedTrajectory {
    Plan actions;  // executed actions including the failing one, if any
    std::string error_message;
};

// Everything a prompt builder may reference. All fields are plain data so
// identical contexts build byte-identical messages.
struct PromptContext {
    std::string domain_text;
    std::string problem_text;
    // (action name, semantics sentence) per action, in domain order.
    std::vector<std::pair<std::string, std::string>> memory_texts;
    std::vector<Plan> candidates;           // at most k, already filtered
    std::vector<FailedTrajectory> failed;   // at most g, already selected
    // Predictor context (from one executed trajectory); unused by the sampler.
    bool has_trajectory = false;
    Plan valid_prefix;
    std::vector<StepOutcome> step_outcomes;
    std::optional<GroundAction> failed_action;
    std::string error_message;
};

std::string domain_text_for_prompt(const Domain& skeleton);
std::string problem_text_for_prompt(const Problem& problem);

std::string plan_lines(const Plan& plan);

// Fixed-order sampler prompt: domain, problem, memory sentences, candidate
// trajectories (with the pick-and-extend instruction), failed trajectories,
// one-shot example, output-format instruction.
std::vector<ChatMessage> build_sampler_prompt(const PromptContext& ctx);

// Fixed-order predictor prompt for one action and one role: domain, problem,
// current memory sentence for the action, executed prefix with per-step
// deltas, the verbatim environment feedback, format example, instruction.
std::vector<ChatMessage> build_semantics_prompt(const PromptContext& ctx,
                                                const ActionSchema& schema, Role role);

}  // namespace actsem
