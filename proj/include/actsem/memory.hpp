#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "actsem/pddl.hpp"

namespace actsem {

enum class PredictionSource { llm, rule };

struct MemoryEntry {
    Statement statement;
    double p = 0.0;              // p(statement is part of the action's semantics)
    bool rule_confirmed = false;  // once set, p stays 1 and never decays
};

// Per-action probabilistic store of predicted statements with exponential
// forgetting. One prediction event covers a single (action, role) pair and
// updates every remembered statement of that pair: predicted ones are
// reinforced, non-predicted ones decay by factor 0.8 unless rule-confirmed.
class Memory {
public:
    static constexpr double kForgetting = 0.8;
    static constexpr double kPruneBelow = 1e-6;

    Memory() = default;
    explicit Memory(const std::vector<std::string>& action_names);

    void ensure_action(const std::string& action);
    bool has_action(const std::string& action) const { return entries_.count(action) > 0; }
    std::vector<std::string> actions() const;

    // Applies one prediction event. First-ever predictions enter at p = 1;
    // rule predictions set p = 1 and mark the entry rule-confirmed. All
    // statements must be canonical and carry the given role.
    void update(const std::string& action, Role role, const std::vector<Statement>& predicted,
                PredictionSource source);

    // Independent Bernoulli draw per entry; p = 1 entries are always included.
    // A pure function of (memory contents, seed).
    BeliefMap sample_belief(uint64_t seed) const;

    // Deterministic cut: statements with p >= threshold.
    BeliefMap snapshot_belief(double threshold) const;

    const std::map<Statement, MemoryEntry>& entries(const std::string& action) const;
    double probability(const std::string& action, const Statement& s) const;

    nlohmann::json to_json() const;
    static Memory from_json(const nlohmann::json& j);

private:
    // statement key includes its role, so one map per action covers both lists
    std::map<std::string, std::map<Statement, MemoryEntry>> entries_;
};

}  // namespace actsem
