#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "actsem/eval.hpp"
#include "actsem/llm.hpp"
#include "actsem/orchestrator.hpp"
#include "actsem/parser.hpp"
#include "actsem/pddl.hpp"
#include "actsem/planner.hpp"
#include "actsem/render.hpp"
#include "actsem/simulator.hpp"
#include "actsem/util.hpp"

namespace {

using namespace actsem;

nlohmann::json state_json(const State& state) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& atom : state) out.push_back(atom_sexpr(atom));
    return out;
}

nlohmann::json plan_json(const Plan& plan) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& a : plan) out.push_back(action_sexpr(a));
    return out;
}

nlohmann::json feedback_json(const TrajectoryFeedback& fb) {
    nlohmann::json steps = nlohmann::json::array();
    for (size_t i = 0; i < fb.step_outcomes.size(); ++i) {
        steps.push_back({{"action", action_sexpr(fb.valid_prefix[i])},
                         {"added", state_json(fb.step_outcomes[i].added)},
                         {"deleted", state_json(fb.step_outcomes[i].deleted)}});
    }
    nlohmann::json out{{"goal_reached", fb.goal_reached},
                       {"valid_prefix", plan_json(fb.valid_prefix)},
                       {"step_outcomes", std::move(steps)},
                       {"executed_steps", fb.executed_steps()},
                       {"error_message", fb.error_message},
                       {"final_state", state_json(fb.final_state)}};
    out["failed_action"] =
        fb.failed_action ? nlohmann::json(action_sexpr(*fb.failed_action)) : nlohmann::json();
    return out;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty())
        std::cout << text;
    else
        write_file(path, text);
}

std::unique_ptr<Backend> backend_from_env() {
    const char* key = std::getenv("ACTSEM_API_KEY");
    if (!key || !*key)
        throw BackendError("ACTSEM_API_KEY is not set; required for a live LLM backend");
    const char* base = std::getenv("ACTSEM_BASE_URL");
    return std::make_unique<HttpBackend>(base && *base ? base : "https://api.openai.com", key);
}

const std::vector<std::string> kBundledDomains = {
    "barman", "blocksworld", "floortile", "grippers", "storage", "termes", "tyreworld"};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PDDL action-semantics induction: parse, simulate, plan, induce, sweep"};
    app.set_version_flag("--version", "actsem 1.0.0");
    app.require_subcommand(1);

    // ---- parse ----------------------------------------------------------
    auto* cmd_parse = app.add_subcommand("parse", "Parse, type-check, and pretty-print a file");
    std::string parse_file, parse_problem_of;
    bool parse_strip = false;
    cmd_parse->add_option("file", parse_file, "Domain file (or problem file with --problem-of)")
        ->required();
    cmd_parse->add_option("--problem-of", parse_problem_of,
                          "Treat the file as a problem for this domain file");
    cmd_parse->add_flag("--strip-semantics", parse_strip,
                        "Empty every action's preconditions and effects before printing");

    // ---- validate -------------------------------------------------------
    auto* cmd_validate =
        app.add_subcommand("validate", "Execute a plan file and report the trajectory feedback");
    std::string val_domain, val_problem, val_plan;
    bool val_no_error = false;
    cmd_validate->add_option("domain", val_domain, "Ground-truth domain file")->required();
    cmd_validate->add_option("problem", val_problem, "Problem file")->required();
    cmd_validate->add_option("plan", val_plan, "Plan file: one (action obj ...) per line")
        ->required();
    cmd_validate->add_flag("--no-error-message", val_no_error,
                           "Reduce feedback to constants without literals");

    // ---- plan -----------------------------------------------------------
    auto* cmd_plan = app.add_subcommand("plan", "Search for a plan under the given domain");
    std::string plan_domain, plan_problem;
    double plan_time = 30.0;
    uint64_t plan_expansions = 0;
    int plan_k = 3;
    bool plan_greedy = false, plan_distinct = false;
    cmd_plan->add_option("domain", plan_domain, "Domain file")->required();
    cmd_plan->add_option("problem", plan_problem, "Problem file")->required();
    cmd_plan->add_option("--time-limit", plan_time, "Wall-clock limit in seconds (0 = off)");
    cmd_plan->add_option("--max-expansions", plan_expansions, "Expansion limit (0 = off)");
    cmd_plan->add_option("--k", plan_k, "Candidate trajectories to report when unsolved");
    cmd_plan->add_flag("--greedy", plan_greedy, "Greedy best-first instead of blind BFS");
    cmd_plan->add_flag("--distinct-args", plan_distinct,
                       "Ground only actions with pairwise-distinct arguments");

    // ---- induce ---------------------------------------------------------
    auto* cmd_induce =
        app.add_subcommand("induce", "Induce action semantics by environment interaction");
    std::string ind_truth, ind_skeleton, ind_problem;
    std::string ind_config, ind_out, ind_transcript, ind_checkpoint, ind_replay;
    cmd_induce->add_option("domain-truth", ind_truth, "Fully specified domain (the environment)")
        ->required();
    cmd_induce->add_option("domain-skeleton", ind_skeleton, "Domain whose semantics to induce")
        ->required();
    cmd_induce->add_option("problem", ind_problem, "Problem file")->required();
    cmd_induce->add_option("--config", ind_config, "JSON config file (flags override it)");
    cmd_induce->add_option("--out", ind_out, "Write the run report here instead of stdout");
    cmd_induce->add_option("--transcript", ind_transcript, "Append a JSONL transcript here");
    cmd_induce->add_option("--checkpoint", ind_checkpoint,
                           "Memory snapshot path (loaded when present, updated per loop)");
    cmd_induce->add_option(
        "--replay", ind_replay,
        "Replay LLM responses from a transcript (JSONL) or pairs (JSON array) file");

    InductionConfig flags;  // CLI values land here; applied only when given
    auto* o_sampler = cmd_induce->add_option("--sampler", flags.sampler, "random | llm");
    auto* o_llm_asp =
        cmd_induce->add_flag("--llm-asp,!--no-llm-asp", flags.llm_asp, "LLM semantics predictor");
    auto* o_rule_asp = cmd_induce->add_flag("--rule-asp,!--no-rule-asp", flags.rule_asp,
                                            "Rule-based semantics predictor");
    auto* o_prosp = cmd_induce->add_flag("--prospection,!--no-prospection", flags.prospection,
                                         "Validate/repair sampled trajectories before execution");
    auto* o_v = cmd_induce->add_option("--v", flags.v, "Prospection / random-walk steps");
    auto* o_l = cmd_induce->add_option("--l", flags.l, "Trajectories sampled per loop");
    auto* o_k = cmd_induce->add_option("--k", flags.k, "Candidate trajectories kept per search");
    auto* o_g = cmd_induce->add_option("--g", flags.g, "Failed trajectories shown per prompt");
    auto* o_wall = cmd_induce->add_option("--wall-time", flags.wall_time_s,
                                          "Solver wall clock per loop in seconds (0 = off)");
    auto* o_exp = cmd_induce->add_option("--max-expansions", flags.max_expansions,
                                         "Solver expansion cap (0 = off)");
    auto* o_loops = cmd_induce->add_option("--max-loops", flags.max_loops, "Loop budget");
    auto* o_bmode =
        cmd_induce->add_option("--belief-mode", flags.belief_mode, "bernoulli | threshold");
    auto* o_bthresh = cmd_induce->add_option("--belief-threshold", flags.belief_threshold,
                                             "Threshold-mode cutoff in [0,1]");
    auto* o_errmsg = cmd_induce->add_flag("--error-messages,!--no-error-message",
                                          flags.error_messages, "Literal-bearing feedback");
    auto* o_deltas = cmd_induce->add_flag("--deltas-observable,!--no-deltas-observable",
                                          flags.deltas_observable, "Expose per-step state deltas");
    auto* o_prior = cmd_induce->add_flag("--llm-prior,!--no-llm-prior", flags.llm_prior,
                                         "Ask for semantics before the first trajectory");
    uint64_t ind_seed = 0;
    auto* o_seed = cmd_induce->add_option("--seed", ind_seed, "Run seed (derived when absent)");
    auto* o_model = cmd_induce->add_option("--model", flags.model, "Backend model name");
    auto* o_temp = cmd_induce->add_option("--temperature", flags.temperature, "Sampling temperature");
    auto* o_retry = cmd_induce->add_option("--retry-budget", flags.retry_budget,
                                           "Retries per request on transient failures");
    auto* o_timeout =
        cmd_induce->add_option("--request-timeout", flags.request_timeout_s, "Seconds per request");
    auto* o_backoff = cmd_induce->add_option("--backoff-base", flags.backoff_base_s,
                                             "Base retry backoff in seconds (0 = no sleep)");
    auto* o_greedy = cmd_induce->add_flag("--greedy,!--no-greedy", flags.greedy,
                                          "Greedy best-first solver");
    auto* o_distinct = cmd_induce->add_flag("--distinct-args,!--no-distinct-args",
                                            flags.distinct_args,
                                            "Ground only actions with pairwise-distinct arguments");

    // ---- sweep ----------------------------------------------------------
    auto* cmd_sweep =
        app.add_subcommand("sweep", "Run a (domain x variant x seed) grid and emit a table");
    std::string sw_assets = "assets";
    std::vector<std::string> sw_domains = kBundledDomains;
    std::vector<std::string> sw_variants = {"default"};
    std::vector<uint64_t> sw_seeds = {1, 2, 3};
    int sw_jobs = 1;
    double sw_budget = 0.0;
    bool sw_axis = false;
    std::string sw_base_config, sw_csv, sw_json;
    cmd_sweep->add_option("--assets", sw_assets, "Directory holding <domain>/{domain,p01}.pddl");
    cmd_sweep->add_option("--domains", sw_domains, "Domains to run")->delimiter(',');
    cmd_sweep->add_option("--variants", sw_variants,
                          "default | 'w/o prospection' | 'w/o LLM-TS' | v=N | l=N | k=N | g=N")
        ->delimiter(',');
    cmd_sweep->add_option("--seeds", sw_seeds, "Seeds per cell")->delimiter(',');
    cmd_sweep->add_option("--jobs", sw_jobs, "Parallel worker threads");
    cmd_sweep->add_option("--budget", sw_budget,
                          "Whole-suite wall-clock budget in seconds (0 = off)");
    cmd_sweep->add_flag("--axis-sweep", sw_axis, "Append the v/l/k/g ablation grid");
    cmd_sweep->add_option("--base-config", sw_base_config, "JSON config applied before variants");
    cmd_sweep->add_option("--csv", sw_csv, "Write the CSV here instead of stdout");
    cmd_sweep->add_option("--json", sw_json, "Also write the JSON mirror here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*cmd_parse) {
            if (!parse_problem_of.empty()) {
                const Domain domain = parse_domain(read_file(parse_problem_of));
                const Problem problem = parse_problem(read_file(parse_file), domain);
                std::cout << render_problem(problem);
            } else {
                Domain domain = parse_domain(read_file(parse_file));
                if (parse_strip) domain = strip_semantics(domain);
                std::cout << render_domain(domain);
            }
            return 0;
        }

        if (*cmd_validate) {
            const Domain domain = parse_domain(read_file(val_domain));
            const Problem problem = parse_problem(read_file(val_problem), domain);
            const Plan plan_acts = parse_plan_text(read_file(val_plan), domain, problem);
            const TrajectoryFeedback fb =
                execute_trajectory(problem, plan_acts, domain, !val_no_error);
            std::cout << feedback_json(fb).dump(2) << "\n";
            return fb.goal_reached ? 0 : 1;
        }

        if (*cmd_plan) {
            const Domain domain = parse_domain(read_file(plan_domain));
            const Problem problem = parse_problem(read_file(plan_problem), domain);
            const SearchLimits limits{plan_time, plan_expansions, plan_k};
            const PlanResult result =
                plan(domain, problem, limits, {}, plan_greedy, plan_distinct);
            if (result.kind == PlanKind::solution) {
                for (const auto& a : result.plan) std::cout << action_sexpr(a) << "\n";
                return 0;
            }
            nlohmann::json cands = nlohmann::json::array();
            for (const auto& c : result.candidates) cands.push_back(plan_json(c));
            nlohmann::json out{
                {"kind", result.kind == PlanKind::candidates ? "candidates" : "unsolvable"},
                {"expansions", result.expansions},
                {"candidates", std::move(cands)}};
            std::cout << out.dump(2) << "\n";
            return 1;
        }

        if (*cmd_induce) {
            InductionConfig cfg;
            bool seed_configured = false;
            if (!ind_config.empty()) {
                const nlohmann::json j = nlohmann::json::parse(read_file(ind_config));
                cfg = InductionConfig::from_json(j);
                seed_configured = j.contains("seed");
            }
            if (o_sampler->count()) cfg.sampler = flags.sampler;
            if (o_llm_asp->count()) cfg.llm_asp = flags.llm_asp;
            if (o_rule_asp->count()) cfg.rule_asp = flags.rule_asp;
            if (o_prosp->count()) cfg.prospection = flags.prospection;
            if (o_v->count()) cfg.v = flags.v;
            if (o_l->count()) cfg.l = flags.l;
            if (o_k->count()) cfg.k = flags.k;
            if (o_g->count()) cfg.g = flags.g;
            if (o_wall->count()) cfg.wall_time_s = flags.wall_time_s;
            if (o_exp->count()) cfg.max_expansions = flags.max_expansions;
            if (o_loops->count()) cfg.max_loops = flags.max_loops;
            if (o_bmode->count()) cfg.belief_mode = flags.belief_mode;
            if (o_bthresh->count()) cfg.belief_threshold = flags.belief_threshold;
            if (o_errmsg->count()) cfg.error_messages = flags.error_messages;
            if (o_deltas->count()) cfg.deltas_observable = flags.deltas_observable;
            if (o_prior->count()) cfg.llm_prior = flags.llm_prior;
            if (o_model->count()) cfg.model = flags.model;
            if (o_temp->count()) cfg.temperature = flags.temperature;
            if (o_retry->count()) cfg.retry_budget = flags.retry_budget;
            if (o_timeout->count()) cfg.request_timeout_s = flags.request_timeout_s;
            if (o_backoff->count()) cfg.backoff_base_s = flags.backoff_base_s;
            if (o_greedy->count()) cfg.greedy = flags.greedy;
            if (o_distinct->count()) cfg.distinct_args = flags.distinct_args;
            if (o_seed->count()) {
                cfg.seed = ind_seed;
            } else if (!seed_configured) {
                std::random_device rd;
                cfg.seed = (static_cast<uint64_t>(rd()) << 32) ^ rd();
                std::cerr << "seed: " << cfg.seed << "\n";
            }

            const Domain truth = parse_domain(read_file(ind_truth));
            const Domain skeleton = parse_domain(read_file(ind_skeleton));
            const Problem problem = parse_problem(read_file(ind_problem), truth);

            std::unique_ptr<Backend> backend;
            if (!ind_replay.empty())
                backend = std::make_unique<ReplayBackend>(ReplayBackend::from_file(ind_replay));
            else if (cfg.sampler == "llm" || cfg.llm_asp || cfg.llm_prior)
                backend = backend_from_env();

            InductionRun io;
            io.backend = backend.get();
            io.transcript_path = ind_transcript;
            io.checkpoint_path = ind_checkpoint;
            const RunReport report = run_induction(truth, skeleton, problem, cfg, io);
            emit(ind_out, report.to_json().dump(2) + "\n");
            return report.success ? 0 : 1;
        }

        if (*cmd_sweep) {
            InductionConfig base;
            if (!sw_base_config.empty())
                base = InductionConfig::from_json(nlohmann::json::parse(read_file(sw_base_config)));
            if (sw_axis)
                for (const auto& v : axis_sweep_variants()) sw_variants.push_back(v);
            BackendFactory factory;
            if (base.sampler == "llm" || base.llm_asp || base.llm_prior) {
                factory = [](const std::string&, const std::string&,
                             uint64_t) -> std::unique_ptr<Backend> { return backend_from_env(); };
            }
            const SuiteResult result = run_suite(sw_assets, sw_domains, sw_variants, sw_seeds,
                                                 base, sw_jobs, sw_budget, factory);
            emit(sw_csv, result.csv());
            if (!sw_json.empty()) write_file(sw_json, result.to_json().dump(2) + "\n");
            return 0;
        }
    } catch (const BackendError& e) {
        std::cerr << "backend error: " << e.what() << "\n";
        return 3;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return *cmd_parse ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
