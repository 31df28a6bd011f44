#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "actsem/orchestrator.hpp"
#include "actsem/pddl.hpp"

namespace actsem {

// Recall of the true semantics: sum over true actions of |predicted ∩ truth|
// divided by the total true statement count (preconditions and effects pooled,
// tagged by role). Spurious predictions do not reduce the score. Throws when
// the prediction names an action the truth does not have.
double accuracy(const BeliefMap& predicted, const BeliefMap& truth);

// Returns the base configuration with one named variant applied:
//   "default"          unchanged
//   "w/o prospection"  v = 0
//   "w/o LLM-TS"       random sampler (prospection kept)
//   "v=N" "l=N" "k=N" "g=N"  one axis overridden
InductionConfig apply_variant(InductionConfig base, const std::string& variant);

// The ablation axis grid: v ∈ {0,1,5,10}, l ∈ {1,3,5}, k ∈ {0,1,3}, g ∈ {0,1,5}.
std::vector<std::string> axis_sweep_variants();

struct SuiteRow {
    std::string domain;
    std::string variant;
    std::string seed;  // decimal seed, or "aggregate" for the per-(domain,variant) mean row
    double success = 0.0;
    double loops = 0.0;
    double nr = 0.0;
    double nes = 0.0;
    double final_acc = 0.0;
    double wall_time_s = 0.0;
    std::vector<double> acc_per_loop;  // per-run rows only
    bool aggregate = false;
    double nr_min = 0.0, nr_max = 0.0;
    double nes_min = 0.0, nes_max = 0.0;
    double acc_min = 0.0, acc_max = 0.0;
};

struct SuiteResult {
    std::vector<SuiteRow> rows;
    bool partial = false;  // true when the budget stopped cells from running

    // Columns: domain,variant,seed,success,loops,NR,NES,final_acc,wall_time_s.
    // Deterministic except for the wall-time column.
    std::string csv() const;
    nlohmann::json to_json() const;  // mirror with per-loop accuracy traces and min/max
};

// Builds a fresh backend for one sweep cell; return nullptr for none.
using BackendFactory =
    std::function<std::unique_ptr<Backend>(const std::string& domain, const std::string& variant,
                                           uint64_t seed)>;

// Runs every (domain × variant × seed) cell and appends one aggregate row per
// (domain, variant). Domains name subdirectories of assets_dir holding
// domain.pddl and p01.pddl; the induced domain is the ground truth with its
// semantics stripped. jobs bounds worker threads; budget_s > 0 stops claiming
// new cells once exceeded (finished rows are kept and the result is flagged
// partial).
SuiteResult run_suite(const std::string& assets_dir, const std::vector<std::string>& domains,
                      const std::vector<std::string>& variants,
                      const std::vector<uint64_t>& seeds, const InductionConfig& base,
                      int jobs = 1, double budget_s = 0.0,
                      const BackendFactory& make_backend = {});

}  // namespace actsem
