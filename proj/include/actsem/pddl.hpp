#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace actsem {

enum class Role { precondition, effect };
enum class Polarity { positive, negative };

inline const char* role_name(Role r) { return r == Role::precondition ? "preconditions" : "effects"; }

// One lifted literal of an action's semantics, e.g. the effect (not (holding ?ob)).
struct Statement {
    Role role = Role::precondition;
    Polarity polarity = Polarity::positive;
    std::string predicate;
    std::vector<std::string> args;  // schema variables, e.g. "?ob"

    auto key() const { return std::tie(role, predicate, args, polarity); }
    bool operator<(const Statement& o) const { return key() < o.key(); }
    bool operator==(const Statement& o) const { return key() == o.key(); }
    bool operator!=(const Statement& o) const { return !(*this == o); }
};

// Renders "(pred ?a ?b)" or "(not (pred ?a ?b))".
std::string statement_sexpr(const Statement& s);

// Two statement lists in declaration order. Order is preserved so that prompt
// sentences can quote statements exactly as given; set-style comparison is
// available via as_set().
struct ActionSemantics {
    std::vector<Statement> preconditions;
    std::vector<Statement> effects;

    const std::vector<Statement>& of(Role r) const {
        return r == Role::precondition ? preconditions : effects;
    }
    std::vector<Statement>& of(Role r) { return r == Role::precondition ? preconditions : effects; }
    bool empty() const { return preconditions.empty() && effects.empty(); }
    size_t size() const { return preconditions.size() + effects.size(); }
    std::set<Statement> as_set() const;
    // Appends unless an equal statement is already present.
    void insert(const Statement& s);
    bool contains(const Statement& s) const;
};

inline bool semantics_equal(const ActionSemantics& a, const ActionSemantics& b) {
    return a.as_set() == b.as_set();
}

struct TypeHierarchy {
    std::set<std::string> types{"object"};
    std::map<std::string, std::string> parent;  // no entry for "object"

    void add(const std::string& type, const std::string& parent_type);
    bool declared(const std::string& type) const { return types.count(type) > 0; }
    // Reflexive-transitive subtype query.
    bool is_subtype(const std::string& type, const std::string& ancestor) const;
    // Throws if the parent relation contains a cycle.
    void check_acyclic() const;
};

struct PredicateSignature {
    std::string name;
    std::vector<std::pair<std::string, std::string>> params;  // (variable, type)
};

struct ActionSchema {
    std::string name;
    std::vector<std::pair<std::string, std::string>> params;  // (variable, type)
    ActionSemantics semantics;  // may be empty during induction

    std::optional<size_t> param_index(const std::string& var) const;
    std::optional<std::string> param_type(const std::string& var) const;
};

struct Domain {
    std::string name;
    std::vector<std::string> requirements;  // subset of :strips :typing :negative-preconditions
    TypeHierarchy types;
    std::vector<PredicateSignature> predicates;  // declaration order
    std::vector<ActionSchema> actions;           // declaration order

    const PredicateSignature* find_predicate(const std::string& name) const;
    const ActionSchema* find_action(const std::string& name) const;
    bool has_requirement(const std::string& req) const;
};

struct GroundAtom {
    std::string predicate;
    std::vector<std::string> args;

    auto key() const { return std::tie(predicate, args); }
    bool operator<(const GroundAtom& o) const { return key() < o.key(); }
    bool operator==(const GroundAtom& o) const { return key() == o.key(); }
    bool operator!=(const GroundAtom& o) const { return !(*this == o); }
};

std::string atom_sexpr(const GroundAtom& a);

struct GroundLiteral {
    bool positive = true;
    GroundAtom atom;

    // Sorted by atom; positive literals sort before negative ones.
    bool operator<(const GroundLiteral& o) const {
        if (atom != o.atom) return atom < o.atom;
        return positive && !o.positive;
    }
    bool operator==(const GroundLiteral& o) const {
        return positive == o.positive && atom == o.atom;
    }
};

std::string literal_sexpr(const GroundLiteral& l);

using State = std::set<GroundAtom>;

struct GroundAction {
    std::string name;
    std::vector<std::string> args;

    auto key() const { return std::tie(name, args); }
    bool operator<(const GroundAction& o) const { return key() < o.key(); }
    bool operator==(const GroundAction& o) const { return key() == o.key(); }
    bool operator!=(const GroundAction& o) const { return !(*this == o); }
};

std::string action_sexpr(const GroundAction& a);

using Plan = std::vector<GroundAction>;

struct Problem {
    std::string name;
    std::string domain_name;
    std::vector<std::pair<std::string, std::string>> objects;  // (name, type) declaration order
    State init;
    std::vector<GroundLiteral> goal;  // conjunction

    std::optional<std::string> object_type(const std::string& obj) const;
};

bool holds(const State& s, const GroundLiteral& l);
bool goal_satisfied(const State& s, const std::vector<GroundLiteral>& goal);

// Per-action semantics map; the "belief" handed to the solver each loop.
using BeliefMap = std::map<std::string, ActionSemantics>;

// Rewrites a statement's variables to the schema's declared parameter names.
// When every argument already names a schema parameter the statement is kept
// as-is (identity). When none does, variables are mapped positionally: the
// i-th distinct variable becomes the i-th parameter. Mixed or unmappable
// arguments are an error.
Statement canonicalize_statement(const Statement& raw, const ActionSchema& schema);

// Variant with an explicit variable -> parameter-variable mapping.
Statement canonicalize_statement(const Statement& raw, const ActionSchema& schema,
                                 const std::map<std::string, std::string>& var_map);

// Fixed-form natural-language rendering used in prompts, e.g.
// "The effects are (on-table ?ob), (arm-empty)." Statement order is preserved.
std::string role_sentence(Role role, const std::vector<Statement>& statements);
std::string semantics_to_text(const ActionSemantics& semantics);

// Domain with all action semantics removed (the induction agent's starting
// knowledge).
Domain strip_semantics(const Domain& domain);

// Extraction / substitution of the per-action semantics.
BeliefMap semantics_of(const Domain& domain);
Domain apply_semantics(const Domain& skeleton, const BeliefMap& belief);

// Structural domain equality up to statement order (used by round-trip tests).
bool domains_equivalent(const Domain& a, const Domain& b);

}  // namespace actsem
