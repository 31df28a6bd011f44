#include "actsem/render.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace actsem {

namespace {

std::string typed_list(const std::vector<std::pair<std::string, std::string>>& params) {
    std::ostringstream os;
    for (size_t i = 0; i < params.size(); ++i) {
        if (i) os << " ";
        os << params[i].first;
        if (params[i].second != "object") os << " - " << params[i].second;
    }
    return os.str();
}

std::string conjunction(std::vector<Statement> statements) {
    std::sort(statements.begin(), statements.end());
    if (statements.empty()) return "(and )";
    std::ostringstream os;
    os << "(and";
    for (const auto& s : statements) os << " " << statement_sexpr(s);
    os << ")";
    return os.str();
}

}  // namespace

void validate_statement(const Domain& domain, const ActionSchema& schema, const Statement& s) {
    const PredicateSignature* sig = domain.find_predicate(s.predicate);
    if (!sig)
        throw std::runtime_error("statement " + statement_sexpr(s) +
                                 " references undeclared predicate '" + s.predicate + "'");
    if (sig->params.size() != s.args.size())
        throw std::runtime_error("statement " + statement_sexpr(s) + ": predicate '" +
                                 s.predicate + "' expects " + std::to_string(sig->params.size()) +
                                 " arguments");
    for (size_t i = 0; i < s.args.size(); ++i) {
        auto type = schema.param_type(s.args[i]);
        if (!type)
            throw std::runtime_error("statement " + statement_sexpr(s) + ": variable '" +
                                     s.args[i] + "' is not a parameter of action '" + schema.name +
                                     "'");
        if (!domain.types.is_subtype(*type, sig->params[i].second))
            throw std::runtime_error("statement " + statement_sexpr(s) + ": variable '" +
                                     s.args[i] + "' of type '" + *type +
                                     "' is incompatible with '" + sig->params[i].second + "'");
    }
}

std::string render_domain(const Domain& domain) {
    std::ostringstream os;
    os << "(define (domain " << domain.name << ")\n";
    if (!domain.requirements.empty()) {
        os << "  (:requirements";
        for (const auto& r : domain.requirements) os << " " << r;
        os << ")\n";
    }
    // Group declared types by parent, both levels sorted.
    std::map<std::string, std::vector<std::string>> by_parent;
    for (const auto& [type, parent] : domain.types.parent) by_parent[parent].push_back(type);
    if (!by_parent.empty()) {
        os << "  (:types";
        bool first = true;
        for (auto& [parent, kids] : by_parent) {
            std::sort(kids.begin(), kids.end());
            os << (first ? " " : "\n          ");
            first = false;
            for (const auto& k : kids) os << k << " ";
            os << "- " << parent;
        }
        os << ")\n";
    }
    if (!domain.predicates.empty()) {
        os << "  (:predicates\n";
        for (const auto& p : domain.predicates) {
            os << "    (" << p.name;
            if (!p.params.empty()) os << " " << typed_list(p.params);
            os << ")\n";
        }
        os << "  )\n";
    }
    for (const auto& a : domain.actions) {
        os << "  (:action " << a.name << "\n";
        os << "    :parameters (" << typed_list(a.params) << ")\n";
        os << "    :precondition " << conjunction(a.semantics.preconditions) << "\n";
        os << "    :effect " << conjunction(a.semantics.effects) << ")\n";
    }
    os << ")\n";
    return os.str();
}

std::string render_domain(const Domain& skeleton, const BeliefMap& belief) {
    Domain d = apply_semantics(skeleton, belief);
    bool needs_negative = false;
    for (const auto& a : d.actions) {
        for (const auto& s : a.semantics.preconditions) {
            validate_statement(d, a, s);
            if (s.polarity == Polarity::negative) needs_negative = true;
        }
        for (const auto& s : a.semantics.effects) validate_statement(d, a, s);
    }
    if (needs_negative && !d.has_requirement(":negative-preconditions"))
        d.requirements.push_back(":negative-preconditions");
    return render_domain(d);
}

std::string render_problem(const Problem& problem) {
    std::ostringstream os;
    os << "(define (problem " << problem.name << ")\n";
    os << "  (:domain " << problem.domain_name << ")\n";
    if (!problem.objects.empty())
        os << "  (:objects " << typed_list(problem.objects) << ")\n";
    os << "  (:init";
    for (const auto& atom : problem.init) os << "\n    " << atom_sexpr(atom);
    os << ")\n";
    os << "  (:goal (and";
    for (const auto& lit : problem.goal) os << " " << literal_sexpr(lit);
    os << "))\n";
    os << ")\n";
    return os.str();
}

}  // namespace actsem
