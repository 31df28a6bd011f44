#pragma once

#include <string>

#include "actsem/pddl.hpp"

namespace actsem {

// Renders a parseable PDDL domain file. Statements are emitted sorted by
// (role, predicate, args, polarity); empty conjunctions render as "(and )";
// output ends with a trailing newline.
std::string render_domain(const Domain& domain);

// Substitutes the belief into the skeleton first (validating every statement
// against its schema), adding :negative-preconditions to the requirements when
// the belief needs it.
std::string render_domain(const Domain& skeleton, const BeliefMap& belief);

std::string render_problem(const Problem& problem);

// Throws when a statement references an undeclared predicate, has the wrong
// arity, uses a variable that is not a schema parameter, or binds a variable
// of an incompatible type.
void validate_statement(const Domain& domain, const ActionSchema& schema, const Statement& s);

}  // namespace actsem
