#include "actsem/simulator.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "actsem/ground.hpp"
#include "actsem/util.hpp"

namespace actsem {

namespace {

std::string literal_list(const std::vector<GroundLiteral>& lits) {
    std::vector<std::string> parts;
    parts.reserve(lits.size());
    for (const auto& l : lits) parts.push_back(literal_sexpr(l));
    return join(parts, "; ");
}

}  // namespace

std::string format_failure_message(const GroundAction& action,
                                   const std::vector<GroundLiteral>& violated,
                                   bool error_messages) {
    if (!error_messages) return "action failed";
    std::ostringstream os;
    os << "action " << action_sexpr(action)
       << " failed: unsatisfied precondition(s): " << literal_list(violated);
    return os.str();
}

std::string format_goal_miss_message(const std::vector<GroundLiteral>& unsatisfied,
                                     bool error_messages) {
    if (!error_messages) return "plan completed without reaching the goal";
    std::ostringstream os;
    os << "plan completed without reaching the goal: unsatisfied goal literal(s): "
       << literal_list(unsatisfied);
    return os.str();
}

StepOutcome step(const State& state, const GroundAction& action, const Domain& truth) {
    const ActionSchema* schema = truth.find_action(action.name);
    if (!schema) throw std::runtime_error("unknown action schema '" + action.name + "'");
    if (schema->params.size() != action.args.size())
        throw std::runtime_error("arity mismatch for action '" + action.name + "'");

    StepOutcome out;
    for (const auto& s : schema->semantics.preconditions) {
        GroundLiteral lit = ground_statement(s, *schema, action);
        if (!holds(state, lit)) out.violated.push_back(lit);
    }
    if (!out.violated.empty()) {
        std::sort(out.violated.begin(), out.violated.end());
        out.violated.erase(std::unique(out.violated.begin(), out.violated.end()),
                           out.violated.end());
        out.status = StepStatus::failed;
        return out;
    }

    State add, del;
    for (const auto& s : schema->semantics.effects) {
        GroundLiteral lit = ground_statement(s, *schema, action);
        if (lit.positive)
            add.insert(lit.atom);
        else
            del.insert(lit.atom);
    }
    // Reported deltas are the actual state difference under delete-then-add;
    // an atom both deleted and re-added by aliased bindings nets to no change.
    for (const auto& a : add)
        if (!state.count(a)) out.added.insert(a);
    for (const auto& a : del)
        if (state.count(a) && !add.count(a)) out.deleted.insert(a);
    return out;
}

State apply_step(const State& state, const GroundAction& action, const Domain& domain) {
    const ActionSchema* schema = domain.find_action(action.name);
    if (!schema) throw std::runtime_error("unknown action schema '" + action.name + "'");
    State add, del;
    for (const auto& s : schema->semantics.effects) {
        GroundLiteral lit = ground_statement(s, *schema, action);
        if (lit.positive)
            add.insert(lit.atom);
        else
            del.insert(lit.atom);
    }
    State next = state;
    for (const auto& a : del) next.erase(a);
    for (const auto& a : add) next.insert(a);
    return next;
}

TrajectoryFeedback execute_trajectory(const Problem& problem, const Plan& plan,
                                      const Domain& truth, bool error_messages) {
    TrajectoryFeedback fb;
    State state = problem.init;
    for (const auto& action : plan) {
        StepOutcome outcome = step(state, action, truth);
        if (outcome.status == StepStatus::failed) {
            fb.failed_action = action;
            fb.error_message = format_failure_message(action, outcome.violated, error_messages);
            fb.final_state = state;
            return fb;
        }
        for (const auto& a : outcome.deleted) state.erase(a);
        for (const auto& a : outcome.added) state.insert(a);
        fb.valid_prefix.push_back(action);
        fb.step_outcomes.push_back(std::move(outcome));
    }
    fb.final_state = state;
    if (goal_satisfied(state, problem.goal)) {
        fb.goal_reached = true;
        return fb;
    }
    std::vector<GroundLiteral> unsatisfied;
    for (const auto& l : problem.goal)
        if (!holds(state, l)) unsatisfied.push_back(l);
    std::sort(unsatisfied.begin(), unsatisfied.end());
    fb.error_message = format_goal_miss_message(unsatisfied, error_messages);
    return fb;
}

}  // namespace actsem
