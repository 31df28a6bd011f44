#include "actsem/rule_predictor.hpp"

#include <stdexcept>

#include "actsem/parser.hpp"
#include "actsem/util.hpp"

namespace actsem {

std::optional<Statement> lift_literal(const GroundLiteral& literal, const GroundAction& action,
                                      const ActionSchema& schema, Role role,
                                      std::vector<std::string>* rejections) {
    Statement out;
    out.role = role;
    out.polarity = literal.positive ? Polarity::positive : Polarity::negative;
    out.predicate = literal.atom.predicate;
    for (const auto& obj : literal.atom.args) {
        std::optional<size_t> bound;
        bool ambiguous = false;
        for (size_t i = 0; i < action.args.size(); ++i) {
            if (action.args[i] != obj) continue;
            if (bound) {
                ambiguous = true;
                break;
            }
            bound = i;
        }
        if (!bound) {
            if (rejections)
                rejections->push_back("dropped " + literal_sexpr(literal) + " for " +
                                      action_sexpr(action) + ": object '" + obj +
                                      "' is not in the binding");
            return std::nullopt;
        }
        if (ambiguous) {
            if (rejections)
                rejections->push_back("dropped " + literal_sexpr(literal) + " for " +
                                      action_sexpr(action) + ": object '" + obj +
                                      "' is bound to multiple parameters");
            return std::nullopt;
        }
        out.args.push_back(schema.params[*bound].first);
    }
    return out;
}

std::vector<GroundLiteral> parse_violated_literals(const std::string& error_message,
                                                   const GroundAction& failed_action) {
    static const std::string kMarker = " failed: unsatisfied precondition(s): ";
    static const std::string kPrefix = "action ";
    if (error_message == "action failed") return {};  // reduced (no-error-message) form
    if (error_message.rfind("plan completed without reaching the goal", 0) == 0)
        return {};  // goal miss carries no precondition violations
    if (error_message.rfind(kPrefix, 0) != 0)
        throw std::runtime_error("malformed failure message: " + error_message);
    size_t marker = error_message.find(kMarker);
    if (marker == std::string::npos)
        throw std::runtime_error("malformed failure message: " + error_message);
    std::string head = error_message.substr(kPrefix.size(), marker - kPrefix.size());
    if (head != action_sexpr(failed_action))
        throw std::runtime_error("failure message names " + head + ", expected " +
                                 action_sexpr(failed_action));
    std::string payload = error_message.substr(marker + kMarker.size());
    // Literals are "; "-separated; ';' would otherwise start a reader comment.
    for (char& c : payload)
        if (c == ';') c = ' ';
    std::vector<GroundLiteral> out;
    for (const auto& sexpr : read_all_sexprs(payload)) {
        if (sexpr.is_atom || sexpr.items.empty())
            throw std::runtime_error("malformed violated literal in: " + error_message);
        GroundLiteral lit;
        const Sexpr* body = &sexpr;
        if (sexpr.head_is("not")) {
            if (sexpr.size() != 2 || sexpr.at(1).is_atom)
                throw std::runtime_error("malformed violated literal in: " + error_message);
            lit.positive = false;
            body = &sexpr.at(1);
        }
        if (body->items.empty() || !body->at(0).is_atom)
            throw std::runtime_error("malformed violated literal in: " + error_message);
        lit.atom.predicate = body->at(0).atom;
        for (size_t i = 1; i < body->size(); ++i) {
            if (!body->at(i).is_atom)
                throw std::runtime_error("malformed violated literal in: " + error_message);
            lit.atom.args.push_back(body->at(i).atom);
        }
        out.push_back(std::move(lit));
    }
    if (out.empty()) throw std::runtime_error("failure message lists no literals: " + error_message);
    return out;
}

BeliefMap infer_from_feedback(const TrajectoryFeedback& feedback, const Domain& domain,
                              bool preconditions_enabled, bool effects_enabled,
                              std::vector<std::string>* rejections) {
    BeliefMap out;
    auto schema_of = [&](const GroundAction& a) -> const ActionSchema& {
        const ActionSchema* s = domain.find_action(a.name);
        if (!s) throw std::runtime_error("unknown action schema '" + a.name + "'");
        return *s;
    };

    if (effects_enabled) {
        for (size_t i = 0; i < feedback.valid_prefix.size(); ++i) {
            const GroundAction& action = feedback.valid_prefix[i];
            const ActionSchema& schema = schema_of(action);
            const StepOutcome& outcome = feedback.step_outcomes.at(i);
            for (const auto& atom : outcome.added) {
                auto s = lift_literal(GroundLiteral{true, atom}, action, schema, Role::effect,
                                      rejections);
                if (s) out[action.name].insert(*s);
            }
            for (const auto& atom : outcome.deleted) {
                auto s = lift_literal(GroundLiteral{false, atom}, action, schema, Role::effect,
                                      rejections);
                if (s) out[action.name].insert(*s);
            }
        }
    }

    if (preconditions_enabled && feedback.failed_action) {
        const GroundAction& action = *feedback.failed_action;
        const ActionSchema& schema = schema_of(action);
        for (const auto& lit : parse_violated_literals(feedback.error_message, action)) {
            // The message reports violations, so the literal as stated is a
            // required precondition.
            auto s = lift_literal(lit, action, schema, Role::precondition, rejections);
            if (s) out[action.name].insert(*s);
        }
    }
    return out;
}

}  // namespace actsem
