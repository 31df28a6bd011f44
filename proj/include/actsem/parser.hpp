#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "actsem/pddl.hpp"

namespace actsem {

struct ParseError : std::runtime_error {
    int line = 0, col = 0;
    ParseError(const std::string& msg, int line_, int col_)
        : std::runtime_error("line " + std::to_string(line_) + ", col " + std::to_string(col_) +
                             ": " + msg),
          line(line_),
          col(col_) {}
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// S-expression node. Atoms are lowercased at read time (PDDL identifiers are
// case-insensitive).
struct Sexpr {
    bool is_atom = false;
    std::string atom;
    std::vector<Sexpr> items;
    int line = 0, col = 0;

    const Sexpr& at(size_t i) const;
    size_t size() const { return items.size(); }
    bool head_is(const std::string& name) const;
};

// Reads one s-expression; trailing whitespace/comments allowed, anything else
// is an error. ';' starts a comment running to end of line.
Sexpr read_sexpr(const std::string& text);

// Reads all top-level s-expressions (used by lenient response scanning).
std::vector<Sexpr> read_all_sexprs(const std::string& text);

Domain parse_domain(const std::string& text);
Problem parse_problem(const std::string& text, const Domain& domain);

// One "(name obj ...)" line; validated against the domain/problem (arity and
// types). Used by the CLI validate subcommand's plan files.
GroundAction parse_ground_action(const std::string& line, const Domain& domain,
                                 const Problem& problem);
Plan parse_plan_text(const std::string& text, const Domain& domain, const Problem& problem);

}  // namespace actsem
