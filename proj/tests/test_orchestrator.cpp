#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "json.hpp"

#include "actsem/memory.hpp"
#include "actsem/orchestrator.hpp"
#include "actsem/parser.hpp"
#include "actsem/util.hpp"
#include "helpers.hpp"

using namespace actsem;
using testutil::ga;
using testutil::load_domain;
using testutil::load_problem;
using testutil::ScriptedBackend;
using testutil::strip_wall_time;
using testutil::TempFile;

namespace {

InductionConfig offline_config() {
    InductionConfig c;
    c.sampler = "random";
    c.rule_asp = true;
    c.llm_asp = false;
    c.v = 2;
    c.max_expansions = 50000;
    c.wall_time_s = 0.0;
    c.max_loops = 5;
    c.seed = 3;
    return c;
}

std::vector<std::string> action_names(const Domain& d) {
    std::vector<std::string> names;
    for (const auto& a : d.actions) names.push_back(a.name);
    return names;
}

Memory truth_memory(const Domain& truth, PredictionSource source) {
    Memory m(action_names(truth));
    for (const auto& a : truth.actions) {
        if (!a.semantics.preconditions.empty())
            m.update(a.name, Role::precondition, a.semantics.preconditions, source);
        if (!a.semantics.effects.empty())
            m.update(a.name, Role::effect, a.semantics.effects, source);
    }
    return m;
}

std::vector<nlohmann::json> loop_records(const std::string& transcript_path) {
    std::vector<nlohmann::json> out;
    for (const auto& line : split_lines(read_file(transcript_path))) {
        if (trim(line).empty()) continue;
        nlohmann::json r = nlohmann::json::parse(line);
        if (r.value("type", "") == "loop") out.push_back(std::move(r));
    }
    return out;
}

}  // namespace

TEST_CASE("configuration validation rejects each bad field") {
    auto reject = [](auto mutate) {
        InductionConfig c;
        mutate(c);
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    };
    reject([](InductionConfig& c) { c.sampler = "oracle"; });
    reject([](InductionConfig& c) { c.rule_asp = false; });  // llm_asp already false
    reject([](InductionConfig& c) { c.belief_mode = "maximum"; });
    reject([](InductionConfig& c) { c.belief_threshold = 1.5; });
    reject([](InductionConfig& c) { c.belief_threshold = -0.1; });
    reject([](InductionConfig& c) { c.l = 0; });
    reject([](InductionConfig& c) { c.v = -1; });
    reject([](InductionConfig& c) { c.k = -1; });
    reject([](InductionConfig& c) { c.g = -1; });
    reject([](InductionConfig& c) { c.max_loops = 0; });
    reject([](InductionConfig& c) { c.wall_time_s = -1.0; });
    CHECK_NOTHROW(InductionConfig{}.validate());
}

TEST_CASE("configuration survives a JSON round trip") {
    InductionConfig c;
    c.sampler = "llm";
    c.llm_asp = true;
    c.prospection = false;
    c.v = 7;
    c.l = 2;
    c.k = 9;
    c.g = 1;
    c.wall_time_s = 12.5;
    c.max_expansions = 400;
    c.max_loops = 17;
    c.belief_mode = "threshold";
    c.belief_threshold = 0.25;
    c.error_messages = false;
    c.deltas_observable = false;
    c.llm_prior = true;
    c.seed = 987654321;
    c.model = "test-model";
    c.temperature = 0.3;
    c.greedy = true;
    c.distinct_args = true;
    CHECK(InductionConfig::from_json(c.to_json()).to_json() == c.to_json());
    CHECK(InductionConfig::from_json(nlohmann::json::object()).to_json() ==
          InductionConfig{}.to_json());
}

TEST_CASE("llm-dependent configurations require a backend") {
    const Domain truth = load_domain("blocksworld");
    const Problem problem = load_problem("blocksworld", truth);
    for (auto mutate : {+[](InductionConfig& c) { c.sampler = "llm"; },
                        +[](InductionConfig& c) { c.llm_asp = true; },
                        +[](InductionConfig& c) { c.llm_prior = true; }}) {
        InductionConfig c = offline_config();
        mutate(c);
        CHECK_THROWS_AS(run_induction(truth, truth, problem, c), std::invalid_argument);
    }
}

TEST_CASE("a goal already satisfied ends after one loop with an empty plan") {
    const Domain truth = load_domain("blocksworld");
    Problem problem = load_problem("blocksworld", truth);
    problem.goal = {GroundLiteral{true, {"on-table", {"b1"}}}};

    const RunReport r = run_induction(truth, truth, problem, offline_config());
    CHECK(r.success);
    CHECK(r.loops_used == 1);
    CHECK(r.nr == 2);  // one sampled trajectory, one (empty) verification episode
    CHECK(r.nr_no_final == 1);
    CHECK(r.nes_no_final == r.nes);  // the empty verification adds no steps
    CHECK(r.acc_per_loop.size() == 1);
    CHECK(r.acc_snapshot_per_loop.size() == 1);
}

TEST_CASE("identical seeds reproduce the whole report") {
    const Domain truth = load_domain("blocksworld");
    const Problem problem = load_problem("blocksworld", truth);
    InductionConfig c = offline_config();
    c.v = 5;
    c.max_loops = 20;
    c.seed = 7;

    nlohmann::json a = run_induction(truth, truth, problem, c).to_json();
    nlohmann::json b = run_induction(truth, truth, problem, c).to_json();
    strip_wall_time(a);
    strip_wall_time(b);
    CHECK(a == b);
}

TEST_CASE("an oracle prior solves in one loop with perfect accuracy") {
    const Domain truth = load_domain("blocksworld");
    const Problem problem = load_problem("blocksworld", truth);

    ScriptedBackend backend;
    for (const auto& schema : truth.actions) {
        for (Role role : {Role::precondition, Role::effect}) {
            std::string lines;
            for (const auto& s : schema.semantics.of(role)) lines += statement_sexpr(s) + "\n";
            backend.push(lines);
        }
    }

    InductionConfig c = offline_config();
    c.llm_prior = true;
    c.belief_mode = "threshold";
    InductionRun io;
    io.backend = &backend;

    const RunReport r = run_induction(truth, truth, problem, c, io);
    CHECK(r.success);
    CHECK(r.loops_used == 1);
    CHECK(r.final_acc == doctest::Approx(1.0));
    CHECK(r.final_acc_snapshot == doctest::Approx(1.0));
    CHECK(backend.requests.size() == 2 * truth.actions.size());
}

TEST_CASE("an uninformative prior is a non-event") {
    const Domain truth = load_domain("blocksworld");
    const Problem problem = load_problem("blocksworld", truth);

    InductionConfig with_prior = offline_config();
    with_prior.llm_prior = true;
    ScriptedBackend backend(
        std::vector<std::string>(2 * truth.actions.size(), "I cannot answer that."));
    InductionRun io;
    io.backend = &backend;
    const RunReport a = run_induction(truth, truth, problem, with_prior, io);

    const RunReport b = run_induction(truth, truth, problem, offline_config());

    CHECK(a.success == b.success);
    CHECK(a.loops_used == b.loops_used);
    CHECK(a.nr == b.nr);
    CHECK(a.nes == b.nes);
    CHECK(a.acc_per_loop == b.acc_per_loop);
    CHECK(a.final_belief == b.final_belief);
}

TEST_CASE("unconfirmed statements decay by 0.8 per missed prediction event") {
    const Domain truth = load_domain("blocksworld");
    const Problem problem = load_problem("blocksworld", truth);
    const Statement wrong{Role::effect, Polarity::positive, "on-table", {"?ob"}};

    Memory seeded(action_names(truth));
    seeded.update("pick-up", Role::effect, {wrong}, PredictionSource::llm);

    InductionConfig c = offline_config();
    c.v = 3;
    c.max_expansions = 1;  // solver cannot reach any 2-step solution
    c.max_loops = 4;
    c.seed = 5;
    TempFile transcript("decay.jsonl");
    InductionRun io;
    io.initial_memory = seeded;
    io.transcript_path = transcript.path;

    const RunReport r = run_induction(truth, truth, problem, c, io);
    CHECK_FALSE(r.success);
    CHECK(r.loops_used == 4);

    int decay_events = 0;
    for (const auto& loop : loop_records(transcript.path))
        for (const auto& rec : loop.at("rule_predictions"))
            if (rec.at("action") == "pick-up" && rec.at("role") == "effects") ++decay_events;

    const Memory final_memory = Memory::from_json(r.final_belief);
    const double p = final_memory.probability("pick-up", wrong);
    CHECK(std::fabs(p - std::pow(0.8, decay_events)) < 1e-12);

    // prospection audit: repaired plans are believed-valid up to the horizon
    for (const auto& loop : loop_records(transcript.path)) {
        for (const auto& tr : loop.at("trajectories")) {
            if (!tr.at("prospected").get<bool>() || tr.at("prospect_cap_hit").get<bool>())
                continue;
            const int len = static_cast<int>(tr.at("plan").size());
            CHECK(tr.at("believed_valid_prefix").get<int>() >= std::min(c.v, len));
        }
    }
}

TEST_CASE("failed verifications are predicted on the next loop and banned") {
    const Domain truth = load_domain("blocksworld");
    const Problem problem = load_problem("blocksworld", truth);

    // Believed world: pick-up fully known, stack known by effects only. The
    // solver's first answer is the 1-step plan (stack b1 b2), which the
    // environment rejects; its feedback must teach (holding ?ob) next loop.
    Memory seeded(action_names(truth));
    const ActionSchema& pick_up = *truth.find_action("pick-up");
    const ActionSchema& stack = *truth.find_action("stack");
    seeded.update("pick-up", Role::precondition, pick_up.semantics.preconditions,
                  PredictionSource::llm);
    seeded.update("pick-up", Role::effect, pick_up.semantics.effects, PredictionSource::llm);
    seeded.update("stack", Role::effect, stack.semantics.effects, PredictionSource::llm);

    InductionConfig c = offline_config();
    c.v = 0;  // trajectories stay empty; learning flows through verification
    c.belief_mode = "threshold";
    c.seed = 1;
    TempFile transcript("carried.jsonl");
    InductionRun io;
    io.initial_memory = seeded;
    io.transcript_path = transcript.path;

    const RunReport r = run_induction(truth, truth, problem, c, io);
    CHECK(r.success);
    CHECK(r.loops_used == 2);
    CHECK(r.nr == 4);
    CHECK(r.nes == 3);  // failed stack attempt + two verified steps
    CHECK(r.nr_no_final == 3);
    CHECK(r.nes_no_final == 1);
    REQUIRE(r.acc_per_loop.size() == 2);
    CHECK(r.acc_per_loop[1] > r.acc_per_loop[0]);

    const auto loops = loop_records(transcript.path);
    REQUIRE(loops.size() == 2);

    CHECK(loops[0].at("solver").at("plan") == nlohmann::json::array({"(stack b1 b2)"}));
    CHECK_FALSE(loops[0].at("verification").at("goal_reached").get<bool>());
    CHECK(loops[0].at("verification").at("error_message").get<std::string>().find(
              "(holding b1)") != std::string::npos);

    bool learned = false;
    for (const auto& rec : loops[1].at("rule_predictions"))
        if (rec.at("action") == "stack" && rec.at("role") == "preconditions" &&
            rec.at("statements") == nlohmann::json::array({"(holding ?ob)"}))
            learned = true;
    CHECK(learned);
    CHECK(loops[1].at("solver").at("plan") ==
          nlohmann::json::array({"(pick-up b1)", "(stack b1 b2)"}));
    CHECK(loops[1].at("verification").at("goal_reached").get<bool>());
}

TEST_CASE("checkpoints persist the memory and reload on the next run") {
    const Domain truth = load_domain("blocksworld");
    const Problem problem = load_problem("blocksworld", truth);
    TempFile checkpoint("memory.json");

    InductionConfig c = offline_config();
    c.max_loops = 2;
    c.max_expansions = 1;  // keep the first run from succeeding
    InductionRun io;
    io.checkpoint_path = checkpoint.path;
    const RunReport first = run_induction(truth, truth, problem, c, io);
    CHECK_FALSE(first.success);
    const nlohmann::json stored = nlohmann::json::parse(read_file(checkpoint.path));
    CHECK(stored == first.final_belief);

    // overwrite the checkpoint with an oracle memory: the reload must solve
    write_file(checkpoint.path, truth_memory(truth, PredictionSource::rule).to_json().dump());
    InductionConfig again = offline_config();
    again.v = 0;
    again.belief_mode = "threshold";
    again.max_loops = 1;
    const RunReport second = run_induction(truth, truth, problem, again, io);
    CHECK(second.success);
    CHECK(second.loops_used == 1);
    CHECK(second.final_acc == doctest::Approx(1.0));
}

TEST_CASE("transcript loop records carry the full loop state") {
    const Domain truth = load_domain("blocksworld");
    const Problem problem = load_problem("blocksworld", truth);
    InductionConfig c = offline_config();
    c.max_loops = 3;
    c.seed = 11;
    TempFile transcript("shape.jsonl");
    InductionRun io;
    io.transcript_path = transcript.path;

    const RunReport r = run_induction(truth, truth, problem, c, io);
    CHECK(r.transcript_path == transcript.path);

    int expected_seq = 0;
    for (const auto& line : split_lines(read_file(transcript.path))) {
        if (trim(line).empty()) continue;
        const nlohmann::json rec = nlohmann::json::parse(line);
        CHECK(rec.at("seq") == expected_seq++);
    }

    const auto loops = loop_records(transcript.path);
    REQUIRE(loops.size() == static_cast<size_t>(r.loops_used));
    for (size_t i = 0; i < loops.size(); ++i) {
        const nlohmann::json& loop = loops[i];
        CHECK(loop.at("loop") == int(i + 1));
        CHECK(loop.at("belief_pre_seed").get<std::string>().size() == 16);
        CHECK(loop.at("belief_post_seed").get<std::string>().size() == 16);
        CHECK(loop.contains("candidates_in"));
        CHECK(loop.at("acc").is_number());
        CHECK(loop.at("acc_snapshot").is_number());
        CHECK(loop.at("llm_predictions").is_array());
        CHECK(loop.at("rule_predictions").is_array());
        const nlohmann::json& solver = loop.at("solver");
        CHECK((solver.at("kind") == "solution" || solver.at("kind") == "candidates" ||
               solver.at("kind") == "unsolvable"));
        CHECK(solver.at("plan").is_array());
        CHECK(solver.at("candidates").is_array());
        REQUIRE(loop.at("trajectories").size() == 1);
        const nlohmann::json& tr = loop.at("trajectories")[0];
        for (const char* key : {"plan", "sampler", "prospected", "prospect_diverged",
                                "prospect_cap_hit", "believed_valid_prefix", "executed_steps",
                                "goal_reached", "error_message"})
            CHECK_MESSAGE(tr.contains(key), key);
        CHECK(tr.at("sampler") == "random");
    }
    CHECK(r.acc_per_loop.size() == static_cast<size_t>(r.loops_used));
}
