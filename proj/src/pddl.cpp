#include "actsem/pddl.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "actsem/util.hpp"

namespace actsem {

std::string statement_sexpr(const Statement& s) {
    std::ostringstream os;
    if (s.polarity == Polarity::negative) os << "(not ";
    os << "(" << s.predicate;
    for (const auto& a : s.args) os << " " << a;
    os << ")";
    if (s.polarity == Polarity::negative) os << ")";
    return os.str();
}

std::set<Statement> ActionSemantics::as_set() const {
    std::set<Statement> out(preconditions.begin(), preconditions.end());
    out.insert(effects.begin(), effects.end());
    return out;
}

void ActionSemantics::insert(const Statement& s) {
    auto& vec = of(s.role);
    if (std::find(vec.begin(), vec.end(), s) == vec.end()) vec.push_back(s);
}

bool ActionSemantics::contains(const Statement& s) const {
    const auto& vec = of(s.role);
    return std::find(vec.begin(), vec.end(), s) != vec.end();
}

void TypeHierarchy::add(const std::string& type, const std::string& parent_type) {
    if (type == "object") {
        if (parent_type != "object")
            throw std::runtime_error("type 'object' cannot have a parent");
        return;
    }
    types.insert(type);
    types.insert(parent_type);
    auto it = parent.find(type);
    if (it != parent.end() && it->second != parent_type)
        throw std::runtime_error("type '" + type + "' declared with conflicting parents '" +
                                 it->second + "' and '" + parent_type + "'");
    parent[type] = parent_type;
    if (parent_type != "object" && !parent.count(parent_type)) parent[parent_type] = "object";
}

bool TypeHierarchy::is_subtype(const std::string& type, const std::string& ancestor) const {
    std::string cur = type;
    size_t guard = 0;
    while (true) {
        if (cur == ancestor) return true;
        auto it = parent.find(cur);
        if (it == parent.end()) return ancestor == "object" && cur == "object";
        cur = it->second;
        if (++guard > types.size() + 1)
            throw std::runtime_error("type hierarchy contains a cycle at '" + type + "'");
    }
}

void TypeHierarchy::check_acyclic() const {
    for (const auto& t : types) is_subtype(t, "object");
}

std::optional<size_t> ActionSchema::param_index(const std::string& var) const {
    for (size_t i = 0; i < params.size(); ++i)
        if (params[i].first == var) return i;
    return std::nullopt;
}

std::optional<std::string> ActionSchema::param_type(const std::string& var) const {
    auto i = param_index(var);
    if (!i) return std::nullopt;
    return params[*i].second;
}

const PredicateSignature* Domain::find_predicate(const std::string& name) const {
    for (const auto& p : predicates)
        if (p.name == name) return &p;
    return nullptr;
}

const ActionSchema* Domain::find_action(const std::string& name) const {
    for (const auto& a : actions)
        if (a.name == name) return &a;
    return nullptr;
}

bool Domain::has_requirement(const std::string& req) const {
    return std::find(requirements.begin(), requirements.end(), req) != requirements.end();
}

std::string atom_sexpr(const GroundAtom& a) {
    std::ostringstream os;
    os << "(" << a.predicate;
    for (const auto& arg : a.args) os << " " << arg;
    os << ")";
    return os.str();
}

std::string literal_sexpr(const GroundLiteral& l) {
    if (l.positive) return atom_sexpr(l.atom);
    return "(not " + atom_sexpr(l.atom) + ")";
}

std::string action_sexpr(const GroundAction& a) {
    std::ostringstream os;
    os << "(" << a.name;
    for (const auto& arg : a.args) os << " " << arg;
    os << ")";
    return os.str();
}

std::optional<std::string> Problem::object_type(const std::string& obj) const {
    for (const auto& [name, type] : objects)
        if (name == obj) return type;
    return std::nullopt;
}

bool holds(const State& s, const GroundLiteral& l) {
    bool present = s.count(l.atom) > 0;
    return l.positive ? present : !present;
}

bool goal_satisfied(const State& s, const std::vector<GroundLiteral>& goal) {
    for (const auto& l : goal)
        if (!holds(s, l)) return false;
    return true;
}

Statement canonicalize_statement(const Statement& raw, const ActionSchema& schema) {
    bool any_match = false, all_match = true;
    for (const auto& a : raw.args) {
        if (schema.param_index(a))
            any_match = true;
        else
            all_match = false;
    }
    if (raw.args.empty() || all_match) return raw;
    if (any_match)
        throw std::runtime_error("statement " + statement_sexpr(raw) + " for action '" +
                                 schema.name + "' mixes parameter and foreign variables");
    // Positional fallback: i-th distinct variable -> i-th parameter.
    std::map<std::string, std::string> var_map;
    size_t next = 0;
    for (const auto& a : raw.args) {
        if (var_map.count(a)) continue;
        if (next >= schema.params.size())
            throw std::runtime_error("statement " + statement_sexpr(raw) +
                                     " has more distinct variables than '" + schema.name +
                                     "' has parameters");
        var_map[a] = schema.params[next].first;
        ++next;
    }
    return canonicalize_statement(raw, schema, var_map);
}

Statement canonicalize_statement(const Statement& raw, const ActionSchema& schema,
                                 const std::map<std::string, std::string>& var_map) {
    Statement out = raw;
    for (auto& a : out.args) {
        auto it = var_map.find(a);
        if (it == var_map.end())
            throw std::runtime_error("no mapping for variable '" + a + "' in statement " +
                                     statement_sexpr(raw));
        a = it->second;
        if (!schema.param_index(a))
            throw std::runtime_error("variable '" + a + "' is not a parameter of action '" +
                                     schema.name + "'");
    }
    return out;
}

std::string role_sentence(Role role, const std::vector<Statement>& statements) {
    std::string head = role == Role::precondition ? "The preconditions are " : "The effects are ";
    if (statements.empty())
        return role == Role::precondition ? "The preconditions are unknown."
                                          : "The effects are unknown.";
    std::vector<std::string> parts;
    parts.reserve(statements.size());
    for (const auto& s : statements) parts.push_back(statement_sexpr(s));
    return head + join(parts, ", ") + ".";
}

std::string semantics_to_text(const ActionSemantics& semantics) {
    return role_sentence(Role::precondition, semantics.preconditions) + " " +
           role_sentence(Role::effect, semantics.effects);
}

Domain strip_semantics(const Domain& domain) {
    Domain out = domain;
    for (auto& a : out.actions) a.semantics = ActionSemantics{};
    return out;
}

BeliefMap semantics_of(const Domain& domain) {
    BeliefMap out;
    for (const auto& a : domain.actions) out[a.name] = a.semantics;
    return out;
}

Domain apply_semantics(const Domain& skeleton, const BeliefMap& belief) {
    Domain out = skeleton;
    for (const auto& [action, sem] : belief)
        if (!out.find_action(action))
            throw std::runtime_error("belief references unknown action '" + action + "'");
    for (auto& a : out.actions) {
        auto it = belief.find(a.name);
        a.semantics = it == belief.end() ? ActionSemantics{} : it->second;
    }
    return out;
}

bool domains_equivalent(const Domain& a, const Domain& b) {
    if (a.name != b.name) return false;
    if (std::set<std::string>(a.requirements.begin(), a.requirements.end()) !=
        std::set<std::string>(b.requirements.begin(), b.requirements.end()))
        return false;
    if (a.types.types != b.types.types || a.types.parent != b.types.parent) return false;
    auto sig_key = [](const PredicateSignature& p) { return std::make_pair(p.name, p.params); };
    std::set<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> pa, pb;
    for (const auto& p : a.predicates) pa.insert(sig_key(p));
    for (const auto& p : b.predicates) pb.insert(sig_key(p));
    if (pa != pb) return false;
    if (a.actions.size() != b.actions.size()) return false;
    for (const auto& act : a.actions) {
        const ActionSchema* other = b.find_action(act.name);
        if (!other) return false;
        if (act.params != other->params) return false;
        if (!semantics_equal(act.semantics, other->semantics)) return false;
    }
    return true;
}

}  // namespace actsem
