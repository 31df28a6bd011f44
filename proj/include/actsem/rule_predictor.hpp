#pragma once

#include <optional>
#include <string>
#include <vector>

#include "actsem/pddl.hpp"
#include "actsem/simulator.hpp"

namespace actsem {

// Rewrites a ground literal into a schema-level statement by replacing each
// object with the parameter bound to it. Returns nothing (with a note pushed
// to rejections, when given) if an object is not part of the binding, or is
// bound to more than one parameter: an ambiguous lift could fabricate a
// statement the environment never guaranteed.
std::optional<Statement> lift_literal(const GroundLiteral& literal, const GroundAction& action,
                                      const ActionSchema& schema, Role role,
                                      std::vector<std::string>* rejections = nullptr);

// Ground literals recovered from a failure message of the frozen format
// "action (...) failed: unsatisfied precondition(s): (a); (not (b)); ...".
// Throws on any other failure-message shape; goal-miss and reduced messages
// yield an empty list.
std::vector<GroundLiteral> parse_violated_literals(const std::string& error_message,
                                                   const GroundAction& failed_action);

// Exact statements guaranteed by one executed trajectory: per applied step,
// added atoms lift to positive effects and deleted atoms to negative effects;
// the failed action's violated literals (parsed from the error message, when
// enabled) lift to preconditions.
BeliefMap infer_from_feedback(const TrajectoryFeedback& feedback, const Domain& domain,
                              bool preconditions_enabled = true, bool effects_enabled = true,
                              std::vector<std::string>* rejections = nullptr);

}  // namespace actsem
