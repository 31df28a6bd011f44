#pragma once

#include <vector>

#include "actsem/pddl.hpp"

namespace actsem {

// All type-consistent action instantiations over the problem's objects, in
// lexicographic (name, args) order. No filtering by semantics. When
// distinct_args is set, bindings that repeat an object are skipped.
std::vector<GroundAction> ground_problem(const Domain& domain, const Problem& problem,
                                         bool distinct_args = false);

// Substitutes a ground binding into a lifted statement.
GroundLiteral ground_statement(const Statement& s, const ActionSchema& schema,
                               const GroundAction& action);

}  // namespace actsem
