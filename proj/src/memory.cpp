#include "actsem/memory.hpp"

#include <algorithm>
#include <stdexcept>

#include "actsem/rng.hpp"

namespace actsem {

Memory::Memory(const std::vector<std::string>& action_names) {
    for (const auto& a : action_names) entries_[a];
}

void Memory::ensure_action(const std::string& action) { entries_[action]; }

std::vector<std::string> Memory::actions() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [a, _] : entries_) out.push_back(a);
    return out;
}

void Memory::update(const std::string& action, Role role,
                    const std::vector<Statement>& predicted, PredictionSource source) {
    auto it = entries_.find(action);
    if (it == entries_.end()) throw std::runtime_error("unknown action '" + action + "'");
    auto& stmts = it->second;

    for (const auto& s : predicted)
        if (s.role != role)
            throw std::runtime_error("predicted statement " + statement_sexpr(s) +
                                     " does not carry the updated role");

    auto is_predicted = [&](const Statement& s) {
        return std::find(predicted.begin(), predicted.end(), s) != predicted.end();
    };

    // Every remembered statement of this (action, role) takes part in the
    // event: p <- gamma * p + (1 - gamma) * [predicted], gamma = 1 once
    // rule-confirmed, else 0.8. A rule prediction pins p at 1 permanently.
    for (auto& [key, entry] : stmts) {
        if (key.role != role) continue;
        bool hit = is_predicted(key);
        if (hit && source == PredictionSource::rule) {
            entry.p = 1.0;
            entry.rule_confirmed = true;
            continue;
        }
        double gamma = entry.rule_confirmed ? 1.0 : kForgetting;
        entry.p = gamma * entry.p + (1.0 - gamma) * (hit ? 1.0 : 0.0);
    }
    // First-ever predictions enter at probability 1.
    for (const auto& s : predicted) {
        if (stmts.count(s)) continue;
        stmts.emplace(s, MemoryEntry{s, 1.0, source == PredictionSource::rule});
    }
    // Exponential decay never reaches zero; prune to bound memory and prompts.
    for (auto st = stmts.begin(); st != stmts.end();) {
        if (st->second.p < kPruneBelow && !st->second.rule_confirmed)
            st = stmts.erase(st);
        else
            ++st;
    }
}

BeliefMap Memory::sample_belief(uint64_t seed) const {
    Rng rng(seed);
    BeliefMap out;
    for (const auto& [action, stmts] : entries_) {
        ActionSemantics sem;
        for (const auto& [key, entry] : stmts) {
            double u = rng.next_unit();
            if (entry.p >= 1.0 || u < entry.p) sem.insert(key);
        }
        out[action] = std::move(sem);
    }
    return out;
}

BeliefMap Memory::snapshot_belief(double threshold) const {
    if (threshold < 0.0 || threshold > 1.0)
        throw std::invalid_argument("threshold must be within [0, 1]");
    BeliefMap out;
    for (const auto& [action, stmts] : entries_) {
        ActionSemantics sem;
        for (const auto& [key, entry] : stmts)
            if (entry.p >= threshold) sem.insert(key);
        out[action] = std::move(sem);
    }
    return out;
}

const std::map<Statement, MemoryEntry>& Memory::entries(const std::string& action) const {
    auto it = entries_.find(action);
    if (it == entries_.end()) throw std::runtime_error("unknown action '" + action + "'");
    return it->second;
}

double Memory::probability(const std::string& action, const Statement& s) const {
    const auto& stmts = entries(action);
    auto it = stmts.find(s);
    return it == stmts.end() ? 0.0 : it->second.p;
}

nlohmann::json Memory::to_json() const {
    nlohmann::json actions = nlohmann::json::object();
    for (const auto& [action, stmts] : entries_) {
        nlohmann::json pre = nlohmann::json::array();
        nlohmann::json eff = nlohmann::json::array();
        for (const auto& [key, entry] : stmts) {
            nlohmann::json e{{"predicate", key.predicate},
                             {"args", key.args},
                             {"polarity", key.polarity == Polarity::positive ? "positive"
                                                                             : "negative"},
                             {"p", entry.p},
                             {"rule_confirmed", entry.rule_confirmed}};
            (key.role == Role::precondition ? pre : eff).push_back(std::move(e));
        }
        actions[action] = {{"preconditions", std::move(pre)}, {"effects", std::move(eff)}};
    }
    return nlohmann::json{{"actions", std::move(actions)}};
}

Memory Memory::from_json(const nlohmann::json& j) {
    Memory m;
    for (const auto& [action, roles] : j.at("actions").items()) {
        m.ensure_action(action);
        for (Role role : {Role::precondition, Role::effect}) {
            for (const auto& e : roles.at(role_name(role))) {
                Statement s;
                s.role = role;
                s.predicate = e.at("predicate").get<std::string>();
                s.args = e.at("args").get<std::vector<std::string>>();
                s.polarity = e.at("polarity").get<std::string>() == "negative"
                                 ? Polarity::negative
                                 : Polarity::positive;
                MemoryEntry entry{s, e.at("p").get<double>(), e.at("rule_confirmed").get<bool>()};
                m.entries_[action].emplace(s, entry);
            }
        }
    }
    return m;
}

}  // namespace actsem
