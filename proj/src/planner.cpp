#include "actsem/planner.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include "actsem/ground.hpp"
#include "actsem/util.hpp"

namespace actsem {

bool applicable(const State& state, const GroundAction& action, const Domain& belief) {
    const ActionSchema* schema = belief.find_action(action.name);
    if (!schema) throw std::runtime_error("unknown action schema '" + action.name + "'");
    for (const auto& s : schema->semantics.preconditions)
        if (!holds(state, ground_statement(s, *schema, action))) return false;
    return true;
}

bool extends_failed_prefix(const Plan& plan, const std::vector<Plan>& failed_prefixes) {
    for (const auto& p : failed_prefixes) {
        if (p.empty() || p.size() > plan.size()) continue;
        if (std::equal(p.begin(), p.end(), plan.begin())) return true;
    }
    return false;
}

namespace {

using AtomId = uint32_t;
using StateVec = std::vector<AtomId>;  // sorted atom ids

struct StateVecHash {
    size_t operator()(const StateVec& v) const {
        return static_cast<size_t>(fnv1a64(v.data(), v.size() * sizeof(AtomId)));
    }
};

struct GroundOp {
    GroundAction action;
    StateVec pre_pos, pre_neg, add, del;  // all sorted
};

bool subset(const StateVec& small, const StateVec& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

bool disjoint(const StateVec& a, const StateVec& b) {
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib)
            ++ia;
        else if (*ib < *ia)
            ++ib;
        else
            return false;
    }
    return true;
}

StateVec successor(const StateVec& state, const GroundOp& op) {
    StateVec without;
    without.reserve(state.size());
    std::set_difference(state.begin(), state.end(), op.del.begin(), op.del.end(),
                        std::back_inserter(without));
    StateVec next;
    next.reserve(without.size() + op.add.size());
    std::set_union(without.begin(), without.end(), op.add.begin(), op.add.end(),
                   std::back_inserter(next));
    return next;
}

struct Node {
    uint32_t state_index;
    int32_t parent;  // -1 for root
    int32_t op;      // index into ops, -1 for root
    uint32_t depth;
};

constexpr uint32_t kInfCost = std::numeric_limits<uint32_t>::max();

// Additive relaxation heuristic: ignores delete lists and negative
// preconditions; atom costs reach a fixpoint by repeated sweeps (states are
// desk-scale).
uint32_t h_add(const StateVec& state, const std::vector<GroundOp>& ops, size_t num_atoms,
               const StateVec& goal_pos) {
    std::vector<uint32_t> cost(num_atoms, kInfCost);
    for (AtomId a : state) cost[a] = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& op : ops) {
            uint64_t c = 1;
            bool reachable = true;
            for (AtomId a : op.pre_pos) {
                if (cost[a] == kInfCost) {
                    reachable = false;
                    break;
                }
                c += cost[a];
            }
            if (!reachable) continue;
            uint32_t cc = c > kInfCost ? kInfCost : static_cast<uint32_t>(c);
            for (AtomId a : op.add) {
                if (cc < cost[a]) {
                    cost[a] = cc;
                    changed = true;
                }
            }
        }
    }
    uint64_t h = 0;
    for (AtomId a : goal_pos) {
        if (cost[a] == kInfCost) return kInfCost;
        h += cost[a];
    }
    return h > kInfCost ? kInfCost : static_cast<uint32_t>(h);
}

}  // namespace

PlanResult plan(const Domain& belief, const Problem& problem, const SearchLimits& limits,
                const std::vector<Plan>& failed_prefixes, bool greedy, bool distinct_args) {
    // Intern atoms mentioned anywhere; new atoms get ids on demand.
    std::map<GroundAtom, AtomId> atom_ids;
    auto intern = [&](const GroundAtom& a) {
        auto it = atom_ids.find(a);
        if (it != atom_ids.end()) return it->second;
        AtomId id = static_cast<AtomId>(atom_ids.size());
        atom_ids.emplace(a, id);
        return id;
    };

    std::vector<GroundOp> ops;
    for (const auto& ga : ground_problem(belief, problem, distinct_args)) {
        const ActionSchema* schema = belief.find_action(ga.name);
        GroundOp op;
        op.action = ga;
        for (const auto& s : schema->semantics.preconditions) {
            GroundLiteral lit = ground_statement(s, *schema, ga);
            (lit.positive ? op.pre_pos : op.pre_neg).push_back(intern(lit.atom));
        }
        for (const auto& s : schema->semantics.effects) {
            GroundLiteral lit = ground_statement(s, *schema, ga);
            (lit.positive ? op.add : op.del).push_back(intern(lit.atom));
        }
        for (auto* v : {&op.pre_pos, &op.pre_neg, &op.add, &op.del}) {
            std::sort(v->begin(), v->end());
            v->erase(std::unique(v->begin(), v->end()), v->end());
        }
        // Delete-then-add: an atom in both lists stays true.
        StateVec del_only;
        std::set_difference(op.del.begin(), op.del.end(), op.add.begin(), op.add.end(),
                            std::back_inserter(del_only));
        op.del = std::move(del_only);
        ops.push_back(std::move(op));
    }

    StateVec goal_pos, goal_neg;
    for (const auto& l : problem.goal) (l.positive ? goal_pos : goal_neg).push_back(intern(l.atom));
    std::sort(goal_pos.begin(), goal_pos.end());
    std::sort(goal_neg.begin(), goal_neg.end());

    StateVec init;
    for (const auto& a : problem.init) init.push_back(intern(a));
    std::sort(init.begin(), init.end());

    auto is_goal = [&](const StateVec& s) {
        return subset(goal_pos, s) && disjoint(goal_neg, s);
    };

    std::vector<StateVec> states;
    std::vector<Node> nodes;
    std::unordered_map<StateVec, uint32_t, StateVecHash> seen;

    auto rebuild_plan = [&](int32_t node) {
        Plan out;
        while (node >= 0 && nodes[static_cast<size_t>(node)].op >= 0) {
            out.push_back(ops[static_cast<size_t>(nodes[static_cast<size_t>(node)].op)].action);
            node = nodes[static_cast<size_t>(node)].parent;
        }
        std::reverse(out.begin(), out.end());
        return out;
    };

    PlanResult result;
    states.push_back(init);
    nodes.push_back(Node{0, -1, -1, 0});
    seen.emplace(init, 0);
    if (is_goal(init)) {
        result.kind = PlanKind::solution;
        return result;  // empty plan
    }

    // BFS expands nodes in insertion order; greedy best-first orders by
    // (h_add, insertion sequence). No atom is interned after this point.
    const size_t num_atoms = atom_ids.size();
    using PQItem = std::pair<uint32_t, uint32_t>;  // (h, node index)
    std::priority_queue<PQItem, std::vector<PQItem>, std::greater<PQItem>> open;
    size_t bfs_head = 0;
    if (greedy) open.emplace(h_add(init, ops, num_atoms, goal_pos), 0);

    auto start_time = std::chrono::steady_clock::now();
    auto time_exceeded = [&]() {
        if (limits.wall_time_s == 0) return false;
        if (limits.wall_time_s < 0) return true;  // treated as already expired
        auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time);
        return elapsed.count() >= limits.wall_time_s;
    };

    bool exhausted = false;
    bool limit_hit = false;
    std::optional<uint32_t> goal_node;
    while (true) {
        uint32_t current;
        if (greedy) {
            if (open.empty()) {
                exhausted = true;
                break;
            }
            current = open.top().second;
            open.pop();
        } else {
            if (bfs_head >= nodes.size()) {
                exhausted = true;
                break;
            }
            current = static_cast<uint32_t>(bfs_head++);
        }
        if ((limits.max_expansions > 0 && result.expansions >= limits.max_expansions) ||
            (result.expansions % 64 == 0 && time_exceeded())) {
            limit_hit = true;
            break;
        }
        ++result.expansions;

        const StateVec state = states[nodes[current].state_index];
        for (size_t oi = 0; oi < ops.size(); ++oi) {
            const GroundOp& op = ops[oi];
            if (!subset(op.pre_pos, state) || !disjoint(op.pre_neg, state)) continue;
            StateVec next = successor(state, op);
            if (seen.count(next)) continue;
            uint32_t node_id = static_cast<uint32_t>(nodes.size());
            seen.emplace(next, node_id);
            states.push_back(std::move(next));
            nodes.push_back(Node{static_cast<uint32_t>(states.size() - 1),
                                 static_cast<int32_t>(current), static_cast<int32_t>(oi),
                                 nodes[current].depth + 1});
            const StateVec& stored = states.back();
            if (is_goal(stored)) {
                goal_node = node_id;
                break;
            }
            if (greedy) open.emplace(h_add(stored, ops, num_atoms, goal_pos), node_id);
        }
        if (goal_node) break;
    }

    if (goal_node) {
        result.kind = PlanKind::solution;
        result.plan = rebuild_plan(static_cast<int32_t>(*goal_node));
        return result;
    }
    if (limit_hit && result.expansions == 0)
        throw std::runtime_error("search limits exhausted before any expansion");

    result.kind = exhausted ? PlanKind::unsolvable : PlanKind::candidates;
    if (limits.k > 0) {
        std::map<uint32_t, std::vector<uint32_t>> by_depth;
        for (uint32_t i = 0; i < nodes.size(); ++i)
            if (nodes[i].depth > 0) by_depth[nodes[i].depth].push_back(i);
        for (auto it = by_depth.rbegin(); it != by_depth.rend(); ++it) {
            std::vector<Plan> group;
            group.reserve(it->second.size());
            for (uint32_t id : it->second) group.push_back(rebuild_plan(static_cast<int32_t>(id)));
            std::sort(group.begin(), group.end());
            for (auto& p : group) {
                if (extends_failed_prefix(p, failed_prefixes)) continue;
                result.candidates.push_back(std::move(p));
                if (result.candidates.size() == static_cast<size_t>(limits.k)) break;
            }
            if (result.candidates.size() == static_cast<size_t>(limits.k)) break;
        }
    }
    return result;
}

}  // namespace actsem
