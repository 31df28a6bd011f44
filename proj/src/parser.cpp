#include "actsem/parser.hpp"

#include <algorithm>
#include <set>

#include "actsem/util.hpp"

namespace actsem {

namespace {

struct Reader {
    const std::string& text;
    size_t pos = 0;
    int line = 1, col = 1;

    explicit Reader(const std::string& t) : text(t) {}

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }

    void advance() {
        if (text[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }

    void skip_ws() {
        while (!eof()) {
            char c = peek();
            if (c == ';') {
                while (!eof() && peek() != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else {
                break;
            }
        }
    }

    Sexpr read() {
        skip_ws();
        if (eof()) throw ParseError("unexpected end of input", line, col);
        Sexpr node;
        node.line = line;
        node.col = col;
        if (peek() == '(') {
            advance();
            while (true) {
                skip_ws();
                if (eof()) throw ParseError("unclosed '('", node.line, node.col);
                if (peek() == ')') {
                    advance();
                    return node;
                }
                node.items.push_back(read());
            }
        }
        if (peek() == ')') throw ParseError("unexpected ')'", line, col);
        node.is_atom = true;
        std::string a;
        while (!eof()) {
            char c = peek();
            if (c == '(' || c == ')' || c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == ';')
                break;
            a.push_back(c);
            advance();
        }
        node.atom = to_lower(a);
        return node;
    }
};

[[noreturn]] void fail(const Sexpr& at, const std::string& msg) {
    throw ParseError(msg, at.line, at.col);
}

const std::string& atom_of(const Sexpr& s, const std::string& what) {
    if (!s.is_atom) fail(s, "expected " + what + ", got a list");
    return s.atom;
}

// Parses a PDDL typed list "x y - t z - t2 w" into (name, type) pairs;
// untyped names default to "object".
std::vector<std::pair<std::string, std::string>> parse_typed_list(
    const std::vector<Sexpr>& items, size_t begin, const std::string& what) {
    std::vector<std::pair<std::string, std::string>> out;
    std::vector<std::string> pending;
    for (size_t i = begin; i < items.size(); ++i) {
        const std::string& tok = atom_of(items[i], what);
        if (tok == "-") {
            if (pending.empty()) fail(items[i], "'-' with no preceding " + what + " names");
            if (i + 1 >= items.size()) fail(items[i], "'-' with no following type");
            const std::string& type = atom_of(items[i + 1], "type name");
            for (const auto& name : pending) out.emplace_back(name, type);
            pending.clear();
            ++i;
        } else {
            pending.push_back(tok);
        }
    }
    for (const auto& name : pending) out.emplace_back(name, "object");
    return out;
}

struct LiteralAst {
    Polarity polarity = Polarity::positive;
    std::string predicate;
    std::vector<std::string> args;
    const Sexpr* node = nullptr;
};

LiteralAst parse_literal(const Sexpr& s, bool allow_negative) {
    if (s.is_atom) fail(s, "expected a literal");
    if (s.items.empty()) fail(s, "empty literal");
    LiteralAst lit;
    lit.node = &s;
    const Sexpr* body = &s;
    if (s.items[0].is_atom && s.items[0].atom == "not") {
        if (!allow_negative) fail(s, "negative literal not allowed here");
        if (s.items.size() != 2 || s.items[1].is_atom)
            fail(s, "'not' takes exactly one literal");
        lit.polarity = Polarity::negative;
        body = &s.items[1];
        if (body->items.empty()) fail(*body, "empty literal");
    }
    lit.predicate = atom_of(body->items[0], "predicate name");
    if (lit.predicate == "not") fail(*body, "nested 'not' is not supported");
    for (size_t i = 1; i < body->items.size(); ++i)
        lit.args.push_back(atom_of(body->items[i], "argument"));
    return lit;
}

// A goal description: "(and lit*)", "(and )", or a single literal.
std::vector<LiteralAst> parse_conjunction(const Sexpr& s, bool allow_negative) {
    std::vector<LiteralAst> out;
    if (s.is_atom) fail(s, "expected a conjunction or literal");
    if (!s.items.empty() && s.items[0].is_atom && s.items[0].atom == "and") {
        for (size_t i = 1; i < s.items.size(); ++i)
            out.push_back(parse_literal(s.items[i], allow_negative));
        return out;
    }
    if (s.items.empty()) return out;  // "()" treated as empty conjunction
    out.push_back(parse_literal(s, allow_negative));
    return out;
}

const std::set<std::string> kKnownRequirements = {":strips", ":typing", ":negative-preconditions"};

void check_predicate_use(const Domain& d, const LiteralAst& lit,
                         const std::vector<std::pair<std::string, std::string>>& scope_params,
                         const TypeHierarchy& types) {
    const PredicateSignature* sig = d.find_predicate(lit.predicate);
    if (!sig) fail(*lit.node, "undeclared predicate '" + lit.predicate + "'");
    if (sig->params.size() != lit.args.size())
        fail(*lit.node, "predicate '" + lit.predicate + "' expects " +
                            std::to_string(sig->params.size()) + " arguments, got " +
                            std::to_string(lit.args.size()));
    for (size_t i = 0; i < lit.args.size(); ++i) {
        const std::string& arg = lit.args[i];
        if (arg.empty() || arg[0] != '?')
            fail(*lit.node, "expected a variable, got '" + arg + "'");
        auto it = std::find_if(scope_params.begin(), scope_params.end(),
                               [&](const auto& p) { return p.first == arg; });
        if (it == scope_params.end())
            fail(*lit.node, "variable '" + arg + "' is not a declared parameter");
        if (!types.is_subtype(it->second, sig->params[i].second))
            fail(*lit.node, "variable '" + arg + "' of type '" + it->second +
                                "' is not compatible with '" + sig->params[i].second +
                                "' in predicate '" + lit.predicate + "'");
    }
}

}  // namespace

const Sexpr& Sexpr::at(size_t i) const {
    if (i >= items.size()) throw ParseError("missing list element", line, col);
    return items[i];
}

bool Sexpr::head_is(const std::string& name) const {
    return !is_atom && !items.empty() && items[0].is_atom && items[0].atom == name;
}

Sexpr read_sexpr(const std::string& text) {
    Reader r(text);
    Sexpr s = r.read();
    r.skip_ws();
    if (!r.eof()) throw ParseError("trailing content after s-expression", r.line, r.col);
    return s;
}

std::vector<Sexpr> read_all_sexprs(const std::string& text) {
    Reader r(text);
    std::vector<Sexpr> out;
    while (true) {
        r.skip_ws();
        if (r.eof()) return out;
        out.push_back(r.read());
    }
}

Domain parse_domain(const std::string& text) {
    Sexpr root = read_sexpr(text);
    if (!root.head_is("define")) fail(root, "expected (define (domain ...) ...)");
    if (root.size() < 2 || !root.at(1).head_is("domain") || root.at(1).size() != 2)
        fail(root, "expected (domain NAME)");
    Domain d;
    d.name = atom_of(root.at(1).at(1), "domain name");

    for (size_t i = 2; i < root.size(); ++i) {
        const Sexpr& sec = root.at(i);
        if (sec.head_is(":requirements")) {
            for (size_t j = 1; j < sec.size(); ++j) {
                const std::string& req = atom_of(sec.at(j), "requirement");
                if (!kKnownRequirements.count(req))
                    fail(sec.at(j), "unknown requirement '" + req + "'");
                if (!d.has_requirement(req)) d.requirements.push_back(req);
            }
        } else if (sec.head_is(":types")) {
            auto pairs = parse_typed_list(sec.items, 1, "type");
            for (const auto& [t, parent] : pairs) d.types.add(t, parent);
            d.types.check_acyclic();
        } else if (sec.head_is(":predicates")) {
            for (size_t j = 1; j < sec.size(); ++j) {
                const Sexpr& p = sec.at(j);
                if (p.is_atom || p.items.empty()) fail(p, "expected a predicate declaration");
                PredicateSignature sig;
                sig.name = atom_of(p.at(0), "predicate name");
                if (d.find_predicate(sig.name))
                    fail(p, "duplicate predicate '" + sig.name + "'");
                sig.params = parse_typed_list(p.items, 1, "parameter");
                for (const auto& [var, type] : sig.params) {
                    if (var.empty() || var[0] != '?')
                        fail(p, "predicate parameter '" + var + "' must start with '?'");
                    if (!d.types.declared(type))
                        fail(p, "undeclared type '" + type + "'");
                }
                d.predicates.push_back(std::move(sig));
            }
        } else if (sec.head_is(":action")) {
            ActionSchema schema;
            schema.name = atom_of(sec.at(1), "action name");
            if (d.find_action(schema.name)) fail(sec, "duplicate action '" + schema.name + "'");
            const Sexpr* precondition = nullptr;
            const Sexpr* effect = nullptr;
            for (size_t j = 2; j < sec.size(); ++j) {
                const std::string& kw = atom_of(sec.at(j), "action keyword");
                if (j + 1 >= sec.size()) fail(sec.at(j), "missing value after '" + kw + "'");
                const Sexpr& val = sec.at(j + 1);
                ++j;
                if (kw == ":parameters") {
                    if (val.is_atom) fail(val, "expected a parameter list");
                    schema.params = parse_typed_list(val.items, 0, "parameter");
                } else if (kw == ":precondition") {
                    precondition = &val;
                } else if (kw == ":effect") {
                    effect = &val;
                } else {
                    fail(sec.at(j - 1), "unknown action keyword '" + kw + "'");
                }
            }
            std::set<std::string> seen_vars;
            for (const auto& [var, type] : schema.params) {
                if (var.empty() || var[0] != '?')
                    fail(sec, "action parameter '" + var + "' must start with '?'");
                if (!seen_vars.insert(var).second)
                    fail(sec, "duplicate parameter '" + var + "' in action '" + schema.name + "'");
                if (!d.types.declared(type)) fail(sec, "undeclared type '" + type + "'");
            }
            bool allow_neg_pre = d.has_requirement(":negative-preconditions");
            if (precondition) {
                for (const auto& lit : parse_conjunction(*precondition, allow_neg_pre)) {
                    check_predicate_use(d, lit, schema.params, d.types);
                    Statement s{Role::precondition, lit.polarity, lit.predicate, lit.args};
                    schema.semantics.insert(s);
                }
            }
            if (effect) {
                for (const auto& lit : parse_conjunction(*effect, true)) {
                    check_predicate_use(d, lit, schema.params, d.types);
                    Statement s{Role::effect, lit.polarity, lit.predicate, lit.args};
                    Statement complement = s;
                    complement.polarity =
                        s.polarity == Polarity::positive ? Polarity::negative : Polarity::positive;
                    if (schema.semantics.contains(complement))
                        fail(*lit.node, "complementary effect literals for predicate '" +
                                            lit.predicate + "' in action '" + schema.name + "'");
                    schema.semantics.insert(s);
                }
            }
            d.actions.push_back(std::move(schema));
        } else {
            fail(sec, "unknown domain section");
        }
    }
    return d;
}

Problem parse_problem(const std::string& text, const Domain& domain) {
    Sexpr root = read_sexpr(text);
    if (!root.head_is("define")) fail(root, "expected (define (problem ...) ...)");
    if (root.size() < 2 || !root.at(1).head_is("problem") || root.at(1).size() != 2)
        fail(root, "expected (problem NAME)");
    Problem p;
    p.name = atom_of(root.at(1).at(1), "problem name");

    auto ground_literal = [&](const LiteralAst& lit) {
        const PredicateSignature* sig = domain.find_predicate(lit.predicate);
        if (!sig) fail(*lit.node, "undeclared predicate '" + lit.predicate + "'");
        if (sig->params.size() != lit.args.size())
            fail(*lit.node, "predicate '" + lit.predicate + "' expects " +
                                std::to_string(sig->params.size()) + " arguments, got " +
                                std::to_string(lit.args.size()));
        GroundLiteral out;
        out.positive = lit.polarity == Polarity::positive;
        out.atom.predicate = lit.predicate;
        for (size_t i = 0; i < lit.args.size(); ++i) {
            const std::string& obj = lit.args[i];
            auto type = p.object_type(obj);
            if (!type) fail(*lit.node, "undeclared object '" + obj + "'");
            if (!domain.types.is_subtype(*type, sig->params[i].second))
                fail(*lit.node, "object '" + obj + "' of type '" + *type +
                                    "' is not compatible with '" + sig->params[i].second +
                                    "' in predicate '" + lit.predicate + "'");
            out.atom.args.push_back(obj);
        }
        return out;
    };

    for (size_t i = 2; i < root.size(); ++i) {
        const Sexpr& sec = root.at(i);
        if (sec.head_is(":domain")) {
            p.domain_name = atom_of(sec.at(1), "domain name");
            if (p.domain_name != domain.name)
                fail(sec, "problem is for domain '" + p.domain_name + "', not '" + domain.name +
                              "'");
        } else if (sec.head_is(":objects")) {
            auto pairs = parse_typed_list(sec.items, 1, "object");
            for (const auto& [obj, type] : pairs) {
                if (!domain.types.declared(type))
                    fail(sec, "object '" + obj + "' has undeclared type '" + type + "'");
                if (p.object_type(obj)) fail(sec, "duplicate object '" + obj + "'");
                p.objects.emplace_back(obj, type);
            }
        } else if (sec.head_is(":init")) {
            for (size_t j = 1; j < sec.size(); ++j) {
                LiteralAst lit = parse_literal(sec.at(j), false);
                p.init.insert(ground_literal(lit).atom);
            }
        } else if (sec.head_is(":goal")) {
            if (sec.size() != 2) fail(sec, "goal takes exactly one goal description");
            bool allow_neg = domain.has_requirement(":negative-preconditions");
            for (const auto& lit : parse_conjunction(sec.at(1), allow_neg)) {
                GroundLiteral g = ground_literal(lit);
                if (std::find(p.goal.begin(), p.goal.end(), g) == p.goal.end())
                    p.goal.push_back(g);
            }
        } else {
            fail(sec, "unknown problem section");
        }
    }
    return p;
}

GroundAction parse_ground_action(const std::string& line, const Domain& domain,
                                 const Problem& problem) {
    Sexpr s = read_sexpr(line);
    if (s.is_atom || s.items.empty()) throw ParseError("expected (action obj ...): " + line);
    GroundAction a;
    a.name = atom_of(s.at(0), "action name");
    for (size_t i = 1; i < s.size(); ++i) a.args.push_back(atom_of(s.at(i), "object"));
    const ActionSchema* schema = domain.find_action(a.name);
    if (!schema) throw ParseError("unknown action '" + a.name + "'");
    if (schema->params.size() != a.args.size())
        throw ParseError("action '" + a.name + "' expects " +
                         std::to_string(schema->params.size()) + " arguments, got " +
                         std::to_string(a.args.size()));
    for (size_t i = 0; i < a.args.size(); ++i) {
        auto type = problem.object_type(a.args[i]);
        if (!type) throw ParseError("undeclared object '" + a.args[i] + "'");
        if (!domain.types.is_subtype(*type, schema->params[i].second))
            throw ParseError("object '" + a.args[i] + "' is not compatible with parameter type '" +
                             schema->params[i].second + "' of action '" + a.name + "'");
    }
    return a;
}

Plan parse_plan_text(const std::string& text, const Domain& domain, const Problem& problem) {
    Plan plan;
    for (const auto& raw : split_lines(text)) {
        std::string line = trim(raw);
        if (line.empty() || line[0] == ';') continue;
        plan.push_back(parse_ground_action(line, domain, problem));
    }
    return plan;
}

}  // namespace actsem
