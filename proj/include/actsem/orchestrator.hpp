#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "actsem/llm.hpp"
#include "actsem/memory.hpp"
#include "actsem/pddl.hpp"

namespace actsem {

struct InductionConfig {
    std::string sampler = "random";  // "random" | "llm"
    bool llm_asp = false;            // LLM-based semantics predictor
    bool rule_asp = true;            // rule-based semantics predictor
    bool prospection = true;
    int v = 10;
    int l = 1;
    int k = 3;
    int g = 5;
    double wall_time_s = 30.0;    // solver wall clock per loop (0 = off)
    uint64_t max_expansions = 0;  // solver expansion cap (0 = off)
    int max_loops = 1000;
    std::string belief_mode = "bernoulli";  // "bernoulli" | "threshold"
    double belief_threshold = 0.5;
    bool error_messages = true;
    bool deltas_observable = true;  // rule effect channel stays on without error messages
    bool llm_prior = false;         // ask for semantics before any trajectory
    uint64_t seed = 0;
    std::string model = "gpt-4";
    double temperature = 0.0;
    int retry_budget = 2;
    double request_timeout_s = 60.0;
    double backoff_base_s = 0.5;
    bool greedy = false;        // solver: greedy best-first instead of blind BFS
    bool distinct_args = false;

    void validate() const;
    nlohmann::json to_json() const;
    static InductionConfig from_json(const nlohmann::json& j);
};

struct RunReport {
    bool success = false;
    int nr = 0;   // environment resets (every episode, including verification)
    int nes = 0;  // executed steps, failing attempts included
    int nr_no_final = 0;   // excluding the final successful verification episode
    int nes_no_final = 0;
    int loops_used = 0;
    std::vector<double> acc_per_loop;           // on the belief handed to the solver
    std::vector<double> acc_snapshot_per_loop;  // deterministic p >= 0.5 snapshot
    double final_acc = 0.0;
    double final_acc_snapshot = 0.0;
    uint64_t seed = 0;
    InductionConfig config;
    nlohmann::json final_belief;  // memory checkpoint
    std::string transcript_path;
    double wall_time_s = 0.0;

    nlohmann::json to_json() const;
};

// Run plumbing that is not part of the experimental configuration.
struct InductionRun {
    Backend* backend = nullptr;
    std::string transcript_path;   // JSONL log of llm + loop records ("" = off)
    std::string checkpoint_path;   // memory snapshot, loaded when present ("" = off)
    std::optional<Memory> initial_memory;
};

// The outer loop: sample trajectories, execute them, predict semantics,
// update memory, sample a belief, plan, and verify solver solutions in the
// environment until one reaches the goal or the loop budget runs out.
RunReport run_induction(const Domain& truth, const Domain& skeleton, const Problem& problem,
                        const InductionConfig& config, const InductionRun& io = {});

}  // namespace actsem
