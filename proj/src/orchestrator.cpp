#include "actsem/orchestrator.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <set>
#include <stdexcept>

#include "actsem/eval.hpp"
#include "actsem/ground.hpp"
#include "actsem/parser.hpp"
#include "actsem/planner.hpp"
#include "actsem/prompts.hpp"
#include "actsem/render.hpp"
#include "actsem/rng.hpp"
#include "actsem/rule_predictor.hpp"
#include "actsem/samplers.hpp"
#include "actsem/simulator.hpp"
#include "actsem/util.hpp"

namespace actsem {

void InductionConfig::validate() const {
    if (sampler != "random" && sampler != "llm")
        throw std::invalid_argument("sampler must be 'random' or 'llm'");
    if (!llm_asp && !rule_asp)
        throw std::invalid_argument("at least one semantics predictor must be enabled");
    if (belief_mode != "bernoulli" && belief_mode != "threshold")
        throw std::invalid_argument("belief_mode must be 'bernoulli' or 'threshold'");
    if (belief_threshold < 0.0 || belief_threshold > 1.0)
        throw std::invalid_argument("belief_threshold must be within [0, 1]");
    if (l < 1) throw std::invalid_argument("l must be at least 1");
    if (v < 0 || k < 0 || g < 0) throw std::invalid_argument("v, k, g must be non-negative");
    if (max_loops < 1) throw std::invalid_argument("max_loops must be at least 1");
    if (wall_time_s < 0) throw std::invalid_argument("wall_time_s must be non-negative");
}

nlohmann::json InductionConfig::to_json() const {
    return nlohmann::json{{"sampler", sampler},
                          {"llm_asp", llm_asp},
                          {"rule_asp", rule_asp},
                          {"prospection", prospection},
                          {"v", v},
                          {"l", l},
                          {"k", k},
                          {"g", g},
                          {"wall_time_s", wall_time_s},
                          {"max_expansions", max_expansions},
                          {"max_loops", max_loops},
                          {"belief_mode", belief_mode},
                          {"belief_threshold", belief_threshold},
                          {"error_messages", error_messages},
                          {"deltas_observable", deltas_observable},
                          {"llm_prior", llm_prior},
                          {"seed", seed},
                          {"model", model},
                          {"temperature", temperature},
                          {"retry_budget", retry_budget},
                          {"request_timeout_s", request_timeout_s},
                          {"backoff_base_s", backoff_base_s},
                          {"greedy", greedy},
                          {"distinct_args", distinct_args}};
}

InductionConfig InductionConfig::from_json(const nlohmann::json& j) {
    InductionConfig c;
    c.sampler = j.value("sampler", c.sampler);
    c.llm_asp = j.value("llm_asp", c.llm_asp);
    c.rule_asp = j.value("rule_asp", c.rule_asp);
    c.prospection = j.value("prospection", c.prospection);
    c.v = j.value("v", c.v);
    c.l = j.value("l", c.l);
    c.k = j.value("k", c.k);
    c.g = j.value("g", c.g);
    c.wall_time_s = j.value("wall_time_s", c.wall_time_s);
    c.max_expansions = j.value("max_expansions", c.max_expansions);
    c.max_loops = j.value("max_loops", c.max_loops);
    c.belief_mode = j.value("belief_mode", c.belief_mode);
    c.belief_threshold = j.value("belief_threshold", c.belief_threshold);
    c.error_messages = j.value("error_messages", c.error_messages);
    c.deltas_observable = j.value("deltas_observable", c.deltas_observable);
    c.llm_prior = j.value("llm_prior", c.llm_prior);
    c.seed = j.value("seed", c.seed);
    c.model = j.value("model", c.model);
    c.temperature = j.value("temperature", c.temperature);
    c.retry_budget = j.value("retry_budget", c.retry_budget);
    c.request_timeout_s = j.value("request_timeout_s", c.request_timeout_s);
    c.backoff_base_s = j.value("backoff_base_s", c.backoff_base_s);
    c.greedy = j.value("greedy", c.greedy);
    c.distinct_args = j.value("distinct_args", c.distinct_args);
    return c;
}

nlohmann::json RunReport::to_json() const {
    return nlohmann::json{{"success", success},
                          {"nr", nr},
                          {"nes", nes},
                          {"nr_no_final", nr_no_final},
                          {"nes_no_final", nes_no_final},
                          {"loops_used", loops_used},
                          {"acc_per_loop", acc_per_loop},
                          {"acc_snapshot_per_loop", acc_snapshot_per_loop},
                          {"final_acc", final_acc},
                          {"final_acc_snapshot", final_acc_snapshot},
                          {"seed", seed},
                          {"config", config.to_json()},
                          {"final_belief", final_belief},
                          {"transcript_path", transcript_path},
                          {"wall_time_s", wall_time_s}};
}

namespace {

nlohmann::json plan_json(const Plan& plan) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& a : plan) out.push_back(action_sexpr(a));
    return out;
}

nlohmann::json statements_json(const std::vector<Statement>& statements) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& s : statements) out.push_back(statement_sexpr(s));
    return out;
}

// Distinct schemas appearing in an executed trajectory, first-appearance order.
std::vector<std::string> trajectory_actions(const TrajectoryFeedback& fb) {
    std::vector<std::string> out;
    auto add = [&](const std::string& name) {
        if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
    };
    for (const auto& a : fb.valid_prefix) add(a.name);
    if (fb.failed_action) add(fb.failed_action->name);
    return out;
}

void record_ban(std::vector<Plan>& bans, const TrajectoryFeedback& fb) {
    if (!fb.failed_action) return;
    Plan prefix = fb.valid_prefix;
    prefix.push_back(*fb.failed_action);
    if (std::find(bans.begin(), bans.end(), prefix) == bans.end())
        bans.push_back(std::move(prefix));
}

}  // namespace

RunReport run_induction(const Domain& truth, const Domain& skeleton_in, const Problem& problem,
                        const InductionConfig& config, const InductionRun& io) {
    config.validate();
    const bool needs_backend = config.sampler == "llm" || config.llm_asp || config.llm_prior;
    if (needs_backend && !io.backend)
        throw std::invalid_argument("configuration requires an LLM backend");

    const auto t_start = std::chrono::steady_clock::now();
    const Domain skeleton = strip_semantics(skeleton_in);
    const BeliefMap truth_semantics = semantics_of(truth);
    const std::vector<GroundAction> ground =
        ground_problem(skeleton, problem, config.distinct_args);
    const std::set<GroundAction> legal(ground.begin(), ground.end());

    std::vector<std::string> action_names;
    for (const auto& a : skeleton.actions) action_names.push_back(a.name);
    Memory memory(action_names);
    if (io.initial_memory) memory = *io.initial_memory;
    if (!io.checkpoint_path.empty() && std::filesystem::exists(io.checkpoint_path))
        memory = Memory::from_json(nlohmann::json::parse(read_file(io.checkpoint_path)));

    std::optional<TranscriptLog> transcript;
    if (!io.transcript_path.empty()) transcript.emplace(io.transcript_path);
    std::optional<LlmClient> client;
    if (io.backend)
        client.emplace(*io.backend, transcript ? &*transcript : nullptr, config.model,
                       config.temperature, config.retry_budget, config.request_timeout_s,
                       config.backoff_base_s);

    Rng rng(config.seed);
    const std::string domain_text = domain_text_for_prompt(skeleton);
    const std::string problem_text = problem_text_for_prompt(problem);

    auto memory_texts = [&](const BeliefMap& belief) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& schema : skeleton.actions) {
            auto it = belief.find(schema.name);
            out.emplace_back(schema.name, semantics_to_text(it == belief.end() ? ActionSemantics{}
                                                                               : it->second));
        }
        return out;
    };
    auto draw_belief = [&](uint64_t seed) {
        return config.belief_mode == "bernoulli" ? memory.sample_belief(seed)
                                                 : memory.snapshot_belief(config.belief_threshold);
    };
    auto save_checkpoint = [&]() {
        if (!io.checkpoint_path.empty())
            write_file(io.checkpoint_path, memory.to_json().dump(2) + "\n");
    };

    // Optional semantics prior: one preconditions and one effects prompt per
    // action, with empty trajectory context, before the first loop.
    if (config.llm_prior) {
        PromptContext ctx;
        ctx.domain_text = domain_text;
        ctx.problem_text = problem_text;
        ctx.memory_texts = memory_texts(memory.snapshot_belief(0.0));
        for (const auto& schema : skeleton.actions) {
            for (Role role : {Role::precondition, Role::effect}) {
                std::string purpose = std::string("prior_") + role_name(role);
                std::string response =
                    client->complete(build_semantics_prompt(ctx, schema, role), purpose,
                                     schema.name);
                auto statements = parse_semantics_response(response, skeleton, schema, role);
                // Unparseable or empty output is a failed prediction, not a
                // prediction of "nothing": it does not decay the memory.
                if (!statements.empty())
                    memory.update(schema.name, role, statements, PredictionSource::llm);
            }
        }
    }

    RunReport report;
    report.seed = config.seed;
    report.config = config;
    report.transcript_path = io.transcript_path;

    std::vector<Plan> bans;
    std::vector<FailedTrajectory> failed_pool;
    std::vector<Plan> candidates;
    std::vector<TrajectoryFeedback> carried;  // verification feedback awaiting prediction
    int final_episode_steps = 0;

    for (int loop = 1; loop <= config.max_loops; ++loop) {
        report.loops_used = loop;
        nlohmann::json loop_record{{"type", "loop"}, {"loop", loop}};

        const uint64_t belief_pre_seed = rng.fork_seed();
        const BeliefMap belief_pre = draw_belief(belief_pre_seed);
        const Domain belief_pre_dom = apply_semantics(skeleton, belief_pre);
        const std::vector<Plan> surviving = filter_candidates(candidates, bans);
        loop_record["belief_pre_seed"] = hex64(belief_pre_seed);
        loop_record["candidates_in"] = surviving.size();

        // 1-2: sample l trajectories and execute each in the environment.
        std::vector<TrajectoryFeedback> feedbacks;
        nlohmann::json traj_records = nlohmann::json::array();
        for (int t = 0; t < config.l; ++t) {
            Plan plan;
            std::string sampler_used = config.sampler;
            if (config.sampler == "llm") {
                PromptContext ctx;
                ctx.domain_text = domain_text;
                ctx.problem_text = problem_text;
                ctx.memory_texts = memory_texts(belief_pre);
                ctx.candidates = surviving;
                ctx.failed = select_failed_for_prompt(failed_pool, config.g, rng);
                std::string response = client->complete(build_sampler_prompt(ctx), "sampler");
                plan = parse_trajectory_response(response, legal);
                if (plan.empty()) {
                    sampler_used = "llm_fallback_random";
                    plan = sample_random(ground, surviving, config.v, rng);
                }
            } else {
                plan = sample_random(ground, surviving, config.v, rng);
            }

            bool cap_hit = false, diverged = false;
            if (config.prospection) {
                ProspectResult pr = prospect(plan, belief_pre_dom, problem, ground, config.v, rng);
                plan = pr.plan;
                cap_hit = pr.cap_hit;
                diverged = pr.diverged;
            }

            TrajectoryFeedback fb = execute_trajectory(problem, plan, truth,
                                                       config.error_messages);
            report.nr += 1;
            report.nes += fb.executed_steps();
            record_ban(bans, fb);
            if (!fb.goal_reached) {
                Plan executed = fb.valid_prefix;
                if (fb.failed_action) executed.push_back(*fb.failed_action);
                if (!executed.empty())
                    failed_pool.push_back(FailedTrajectory{executed, fb.error_message});
            }

            nlohmann::json tr{{"plan", plan_json(plan)},
                              {"sampler", sampler_used},
                              {"prospected", config.prospection},
                              {"prospect_diverged", diverged},
                              {"prospect_cap_hit", cap_hit},
                              {"believed_valid_prefix",
                               believed_valid_prefix_len(plan, belief_pre_dom, problem)},
                              {"executed_steps", fb.executed_steps()},
                              {"goal_reached", fb.goal_reached},
                              {"error_message", fb.error_message}};
            if (fb.failed_action) tr["failed_action"] = action_sexpr(*fb.failed_action);
            traj_records.push_back(std::move(tr));
            feedbacks.push_back(std::move(fb));
        }
        loop_record["trajectories"] = std::move(traj_records);

        // 3-4: predictors and memory updates. Carried verification feedback
        // from the previous loop is processed first; LLM predictions are
        // applied before rule predictions so rule confirmation is never
        // overwritten within a loop.
        std::vector<TrajectoryFeedback> to_predict = std::move(carried);
        carried.clear();
        for (auto& fb : feedbacks) to_predict.push_back(std::move(fb));

        nlohmann::json llm_pred_records = nlohmann::json::array();
        if (config.llm_asp) {
            for (const auto& fb : to_predict) {
                PromptContext ctx;
                ctx.domain_text = domain_text;
                ctx.problem_text = problem_text;
                ctx.memory_texts = memory_texts(belief_pre);
                ctx.has_trajectory = true;
                ctx.valid_prefix = fb.valid_prefix;
                ctx.step_outcomes = fb.step_outcomes;
                ctx.failed_action = fb.failed_action;
                ctx.error_message = fb.error_message;
                for (const auto& name : trajectory_actions(fb)) {
                    const ActionSchema* schema = skeleton.find_action(name);
                    for (Role role : {Role::precondition, Role::effect}) {
                        std::string purpose = std::string("asp_") + role_name(role);
                        std::string response = client->complete(
                            build_semantics_prompt(ctx, *schema, role), purpose, name);
                        auto statements =
                            parse_semantics_response(response, skeleton, *schema, role);
                        if (statements.empty()) continue;
                        memory.update(name, role, statements, PredictionSource::llm);
                        llm_pred_records.push_back({{"action", name},
                                                    {"role", role_name(role)},
                                                    {"statements", statements_json(statements)}});
                    }
                }
            }
        }
        nlohmann::json rule_pred_records = nlohmann::json::array();
        if (config.rule_asp) {
            for (const auto& fb : to_predict) {
                BeliefMap predicted =
                    infer_from_feedback(fb, skeleton, config.error_messages,
                                        config.deltas_observable);
                for (const auto& [action, sem] : predicted) {
                    for (Role role : {Role::precondition, Role::effect}) {
                        const auto& statements = sem.of(role);
                        if (statements.empty()) continue;
                        memory.update(action, role, statements, PredictionSource::rule);
                        rule_pred_records.push_back({{"action", action},
                                                     {"role", role_name(role)},
                                                     {"statements", statements_json(statements)}});
                    }
                }
            }
        }
        loop_record["llm_predictions"] = std::move(llm_pred_records);
        loop_record["rule_predictions"] = std::move(rule_pred_records);

        // 5: sample the updated belief and hand it to the solver.
        const uint64_t belief_post_seed = rng.fork_seed();
        const BeliefMap belief_post = draw_belief(belief_post_seed);
        const double acc = accuracy(belief_post, truth_semantics);
        const double acc_snapshot = accuracy(memory.snapshot_belief(0.5), truth_semantics);
        report.acc_per_loop.push_back(acc);
        report.acc_snapshot_per_loop.push_back(acc_snapshot);
        loop_record["belief_post_seed"] = hex64(belief_post_seed);
        loop_record["acc"] = acc;
        loop_record["acc_snapshot"] = acc_snapshot;

        const Domain solver_domain = parse_domain(render_domain(skeleton, belief_post));
        SearchLimits limits{config.wall_time_s, config.max_expansions, config.k};
        PlanResult result =
            plan(solver_domain, problem, limits, bans, config.greedy, config.distinct_args);
        nlohmann::json solver_record{
            {"kind", result.kind == PlanKind::solution
                         ? "solution"
                         : result.kind == PlanKind::candidates ? "candidates" : "unsolvable"},
            {"expansions", result.expansions},
            {"plan", plan_json(result.plan)}};
        nlohmann::json cand_json = nlohmann::json::array();
        for (const auto& c : result.candidates) cand_json.push_back(plan_json(c));
        solver_record["candidates"] = std::move(cand_json);
        loop_record["solver"] = std::move(solver_record);

        // A solver solution is executed in the environment; success only if
        // the goal is actually reached. Failures feed the next loop.
        nlohmann::json verification;
        if (result.kind == PlanKind::solution) {
            TrajectoryFeedback vfb = execute_trajectory(problem, result.plan, truth,
                                                        config.error_messages);
            report.nr += 1;
            report.nes += vfb.executed_steps();
            verification = nlohmann::json{{"goal_reached", vfb.goal_reached},
                                          {"executed_steps", vfb.executed_steps()},
                                          {"error_message", vfb.error_message}};
            if (vfb.goal_reached) {
                report.success = true;
                final_episode_steps = vfb.executed_steps();
            } else {
                record_ban(bans, vfb);
                Plan executed = vfb.valid_prefix;
                if (vfb.failed_action) executed.push_back(*vfb.failed_action);
                if (!executed.empty())
                    failed_pool.push_back(FailedTrajectory{executed, vfb.error_message});
                carried.push_back(std::move(vfb));
            }
        }
        loop_record["verification"] = std::move(verification);
        candidates = std::move(result.candidates);

        if (transcript) transcript->append(std::move(loop_record));
        save_checkpoint();
        if (report.success) break;
    }

    report.nr_no_final = report.success ? report.nr - 1 : report.nr;
    report.nes_no_final = report.nes - final_episode_steps;
    report.final_acc = report.acc_per_loop.empty() ? 0.0 : report.acc_per_loop.back();
    report.final_acc_snapshot =
        report.acc_snapshot_per_loop.empty() ? 0.0 : report.acc_snapshot_per_loop.back();
    report.final_belief = memory.to_json();
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

}  // namespace actsem
