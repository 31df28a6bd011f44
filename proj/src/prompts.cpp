#include "actsem/prompts.hpp"

#include <sstream>

#include "actsem/util.hpp"

namespace actsem {

namespace {

const char* kSystemMessage =
    "You are an expert in PDDL planning. Follow the output format instructions exactly.";

const char* kSamplerOneShot =
    "Example:\n"
    "In a blocksworld domain with actions pick-up, put-down, stack, and unstack, objects b1 and "
    "b2, initial state (on b2 b1), (on-table b1), (clear b2), (arm-empty), and goal (on b1 b2), a "
    "good trajectory is:\n"
    "(unstack b2 b1)\n"
    "(put-down b2)\n"
    "(pick-up b1)\n"
    "(stack b1 b2)";

const char* kSamplerInstruction =
    "Output a trajectory as ground actions, one per line, each formatted as "
    "(action-name object-1 object-2 ...). Output nothing else.";

const char* kCandidateInstruction =
    "Instruction: pick one of the candidate trajectories, and generate a trajectory starting "
    "from it.";

const char* kSemanticsOneShot =
    "Example output for the effects of an action named put-down with parameters (?ob):\n"
    "(on-table ?ob)\n"
    "(arm-empty)\n"
    "(clear ?ob)\n"
    "(not (holding ?ob))";

std::string param_list(const std::vector<std::pair<std::string, std::string>>& params) {
    std::vector<std::string> parts;
    parts.reserve(params.size());
    for (const auto& [var, type] : params)
        parts.push_back(type == "object" ? var : var + " - " + type);
    return "(" + join(parts, " ") + ")";
}

std::string deltas_line(const StepOutcome& outcome) {
    auto atom_list = [](const State& atoms) {
        if (atoms.empty()) return std::string("none");
        std::vector<std::string> parts;
        parts.reserve(atoms.size());
        for (const auto& a : atoms) parts.push_back(atom_sexpr(a));
        return join(parts, "; ");
    };
    return "added: " + atom_list(outcome.added) + " -- deleted: " + atom_list(outcome.deleted);
}

}  // namespace

std::string domain_text_for_prompt(const Domain& skeleton) {
    std::ostringstream os;
    os << "Domain: " << skeleton.name << "\n";
    if (!skeleton.types.parent.empty()) {
        std::vector<std::string> parts;
        for (const auto& [type, parent] : skeleton.types.parent)
            parts.push_back(type + " - " + parent);
        os << "Types: " << join(parts, "; ") << "\n";
    }
    std::vector<std::string> preds;
    for (const auto& p : skeleton.predicates) {
        std::ostringstream ps;
        ps << "(" << p.name;
        for (const auto& [var, type] : p.params) {
            ps << " " << var;
            if (type != "object") ps << " - " << type;
        }
        ps << ")";
        preds.push_back(ps.str());
    }
    os << "Predicates: " << join(preds, "; ") << "\n";
    std::vector<std::string> acts;
    for (const auto& a : skeleton.actions) acts.push_back(a.name + " " + param_list(a.params));
    os << "Actions: " << join(acts, "; ");
    return os.str();
}

std::string problem_text_for_prompt(const Problem& problem) {
    std::ostringstream os;
    std::vector<std::string> objs;
    for (const auto& [obj, type] : problem.objects)
        objs.push_back(type == "object" ? obj : obj + " - " + type);
    os << "Objects: " << join(objs, "; ") << "\n";
    std::vector<std::string> init;
    for (const auto& a : problem.init) init.push_back(atom_sexpr(a));
    os << "Initial state: " << join(init, "; ") << "\n";
    std::vector<std::string> goal;
    for (const auto& l : problem.goal) goal.push_back(literal_sexpr(l));
    os << "Goal: " << join(goal, "; ");
    return os.str();
}

std::string plan_lines(const Plan& plan) {
    std::vector<std::string> lines;
    lines.reserve(plan.size());
    for (const auto& a : plan) lines.push_back(action_sexpr(a));
    return join(lines, "\n");
}

std::vector<ChatMessage> build_sampler_prompt(const PromptContext& ctx) {
    std::ostringstream os;
    os << "Domain information:\n" << ctx.domain_text << "\n\n";
    os << "Problem information:\n" << ctx.problem_text << "\n\n";
    os << "Known action semantics:\n";
    for (const auto& [action, sentence] : ctx.memory_texts)
        os << "Action " << action << ". " << sentence << "\n";
    if (!ctx.candidates.empty()) {
        os << "\nCandidate trajectories:\n";
        for (size_t i = 0; i < ctx.candidates.size(); ++i)
            os << "Candidate " << i + 1 << ":\n" << plan_lines(ctx.candidates[i]) << "\n";
        os << kCandidateInstruction << "\n";
    }
    if (!ctx.failed.empty()) {
        os << "\nPreviously failed trajectories (avoid repeating them):\n";
        for (size_t i = 0; i < ctx.failed.size(); ++i) {
            os << "Failed trajectory " << i + 1 << ":\n"
               << plan_lines(ctx.failed[i].actions) << "\n"
               << "Failure: " << ctx.failed[i].error_message << "\n";
        }
    }
    os << "\n" << kSamplerOneShot << "\n\n" << kSamplerInstruction;
    return {{"system", kSystemMessage}, {"user", os.str()}};
}

std::vector<ChatMessage> build_semantics_prompt(const PromptContext& ctx,
                                                const ActionSchema& schema, Role role) {
    std::ostringstream os;
    os << "Domain information:\n" << ctx.domain_text << "\n\n";
    os << "Problem information:\n" << ctx.problem_text << "\n\n";
    for (const auto& [action, sentence] : ctx.memory_texts)
        if (action == schema.name)
            os << "Current knowledge of action " << action << ". " << sentence << "\n\n";
    if (ctx.has_trajectory) {
        os << "Executed trajectory:\n";
        if (ctx.valid_prefix.empty()) os << "(no action was applied)\n";
        for (size_t i = 0; i < ctx.valid_prefix.size(); ++i) {
            os << "Step " << i + 1 << ": " << action_sexpr(ctx.valid_prefix[i]);
            if (i < ctx.step_outcomes.size()) os << " -- " << deltas_line(ctx.step_outcomes[i]);
            os << "\n";
        }
        if (ctx.failed_action) os << "Failed action: " << action_sexpr(*ctx.failed_action) << "\n";
        if (!ctx.error_message.empty()) os << "Feedback: " << ctx.error_message << "\n";
        os << "\n";
    }
    os << kSemanticsOneShot << "\n\n";
    os << "Predict the " << role_name(role) << " of action " << schema.name << " with parameters "
       << param_list(schema.params)
       << ". Output one literal per line, each formatted as (predicate ?parameter ...) or "
          "(not (predicate ?parameter ...)), using only the action's parameters as variables. "
          "Output nothing else.";
    return {{"system", kSystemMessage}, {"user", os.str()}};
}

}  // namespace actsem
