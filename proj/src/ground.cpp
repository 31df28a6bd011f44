#include "actsem/ground.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace actsem {

std::vector<GroundAction> ground_problem(const Domain& domain, const Problem& problem,
                                         bool distinct_args) {
    std::vector<GroundAction> out;
    for (const auto& schema : domain.actions) {
        // Objects compatible with each parameter, sorted by name.
        std::vector<std::vector<std::string>> choices(schema.params.size());
        for (size_t i = 0; i < schema.params.size(); ++i) {
            for (const auto& [obj, type] : problem.objects)
                if (domain.types.is_subtype(type, schema.params[i].second))
                    choices[i].push_back(obj);
            std::sort(choices[i].begin(), choices[i].end());
        }
        std::vector<std::string> binding(schema.params.size());
        auto enumerate = [&](auto&& self, size_t depth) -> void {
            if (depth == schema.params.size()) {
                if (distinct_args) {
                    std::set<std::string> uniq(binding.begin(), binding.end());
                    if (uniq.size() != binding.size()) return;
                }
                out.push_back(GroundAction{schema.name, binding});
                return;
            }
            for (const auto& obj : choices[depth]) {
                binding[depth] = obj;
                self(self, depth + 1);
            }
        };
        enumerate(enumerate, 0);
    }
    std::sort(out.begin(), out.end());
    return out;
}

GroundLiteral ground_statement(const Statement& s, const ActionSchema& schema,
                               const GroundAction& action) {
    if (action.args.size() != schema.params.size())
        throw std::runtime_error("binding arity mismatch for action '" + schema.name + "'");
    GroundLiteral out;
    out.positive = s.polarity == Polarity::positive;
    out.atom.predicate = s.predicate;
    for (const auto& var : s.args) {
        auto idx = schema.param_index(var);
        if (!idx)
            throw std::runtime_error("statement variable '" + var +
                                     "' is not a parameter of action '" + schema.name + "'");
        out.atom.args.push_back(action.args[*idx]);
    }
    return out;
}

}  // namespace actsem
