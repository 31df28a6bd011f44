#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <string>

#include "json.hpp"

#include "actsem/parser.hpp"
#include "actsem/util.hpp"
#include "helpers.hpp"

using namespace actsem;
using doctest::Contains;
using testutil::asset_path;
using testutil::TempFile;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    TempFile out_file("cli_stdout.txt");
    TempFile err_file("cli_stderr.txt");
    const std::string cmd = env_prefix + std::string(ACTSEM_CLI_PATH) + " " + args + " > " +
                            out_file.path + " 2> " + err_file.path;
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = read_file(out_file.path);
    r.err = read_file(err_file.path);
    return r;
}

std::string bw_domain() { return asset_path("blocksworld/domain.pddl"); }
std::string bw_problem() { return asset_path("blocksworld/p01.pddl"); }

// The bundled two-block problem with its goal replaced.
std::string problem_with_goal(const std::string& goal_literal) {
    return "(define (problem bw-custom) (:domain blocksworld)\n"
           " (:objects b1 b2)\n"
           " (:init (on-table b1) (on-table b2) (clear b1) (clear b2) (arm-empty))\n"
           " (:goal (and " +
           goal_literal + ")))\n";
}

const std::string kOfflineFlags =
    "--seed 1 --v 3 --max-expansions 50000 --wall-time 0 --max-loops 30";

}  // namespace

TEST_CASE("version and help exit cleanly") {
    const CliResult version = run_cli("--version");
    CHECK(version.code == 0);
    CHECK(version.out.find("actsem 1.0.0") != std::string::npos);

    const CliResult help = run_cli("--help");
    CHECK(help.code == 0);
    for (const char* sub : {"parse", "validate", "plan", "induce", "sweep"})
        CHECK_MESSAGE(help.out.find(sub) != std::string::npos, sub);
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("").code == 2);                    // a subcommand is required
    CHECK(run_cli("transmogrify").code == 2);        // unknown subcommand
    CHECK(run_cli("validate onlyone").code == 2);    // missing required arguments
    CHECK(run_cli("induce a b c --v notanumber").code == 2);
    CHECK(run_cli("parse /no/such/file.pddl").code == 2);
}

TEST_CASE("parse pretty-prints domains, problems, and stripped skeletons") {
    const CliResult domain = run_cli("parse " + bw_domain());
    CHECK(domain.code == 0);
    CHECK(domain.out.rfind("(define (domain blocksworld)", 0) == 0);
    CHECK_NOTHROW(parse_domain(domain.out));

    const CliResult stripped = run_cli("parse " + bw_domain() + " --strip-semantics");
    CHECK(stripped.code == 0);
    size_t empty_bodies = 0;
    for (size_t at = stripped.out.find(":precondition (and )"); at != std::string::npos;
         at = stripped.out.find(":precondition (and )", at + 1))
        ++empty_bodies;
    CHECK(empty_bodies == 4);  // one per action; predicate declarations remain
    CHECK(stripped.out.find(":effect (and )") != std::string::npos);

    const CliResult problem = run_cli("parse " + bw_problem() + " --problem-of " + bw_domain());
    CHECK(problem.code == 0);
    CHECK(problem.out.find("(:init") != std::string::npos);
    const Domain d = parse_domain(read_file(bw_domain()));
    CHECK_NOTHROW(parse_problem(problem.out, d));
}

TEST_CASE("parse reports PDDL errors with exit code 1") {
    TempFile bad("bad.pddl");
    write_file(bad.path, "(define (domain broken) (:action oops");
    const CliResult r = run_cli("parse " + bad.path);
    CHECK(r.code == 1);
    CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("plan prints the solution as one action per line") {
    const CliResult r = run_cli("plan " + bw_domain() + " " + bw_problem());
    CHECK(r.code == 0);
    CHECK(r.out == "(pick-up b1)\n(stack b1 b2)\n");
}

TEST_CASE("plan reports unsolvable and truncated searches with exit code 1") {
    TempFile impossible("impossible.pddl");
    write_file(impossible.path, problem_with_goal("(on b1 b1)"));
    const CliResult r = run_cli("plan " + bw_domain() + " " + impossible.path);
    CHECK(r.code == 1);
    const nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j.at("kind") == "unsolvable");

    const CliResult cut =
        run_cli("plan " + bw_domain() + " " + bw_problem() + " --max-expansions 1 --k 2");
    CHECK(cut.code == 1);
    const nlohmann::json jc = nlohmann::json::parse(cut.out);
    CHECK(jc.at("kind") == "candidates");
    CHECK(jc.at("candidates").size() <= 2);
}

TEST_CASE("validate reports full trajectory feedback") {
    TempFile good("good_plan.txt");
    write_file(good.path, "(pick-up b1)\n(stack b1 b2)\n");
    const CliResult ok = run_cli("validate " + bw_domain() + " " + bw_problem() + " " + good.path);
    CHECK(ok.code == 0);
    const nlohmann::json j = nlohmann::json::parse(ok.out);
    CHECK(j.at("goal_reached") == true);
    CHECK(j.at("executed_steps") == 2);
    CHECK(j.at("failed_action").is_null());
    CHECK(j.at("step_outcomes").size() == 2);
    CHECK(j.at("error_message") == "");

    TempFile bad("bad_plan.txt");
    write_file(bad.path, "(put-down b1)\n");
    const CliResult fail =
        run_cli("validate " + bw_domain() + " " + bw_problem() + " " + bad.path);
    CHECK(fail.code == 1);
    const nlohmann::json jf = nlohmann::json::parse(fail.out);
    CHECK(jf.at("goal_reached") == false);
    CHECK(jf.at("error_message") ==
          "action (put-down b1) failed: unsatisfied precondition(s): (holding b1)");
    CHECK(jf.at("failed_action") == "(put-down b1)");
    CHECK(jf.at("valid_prefix").empty());

    const CliResult reduced = run_cli("validate " + bw_domain() + " " + bw_problem() + " " +
                                      bad.path + " --no-error-message");
    CHECK(reduced.code == 1);
    CHECK(nlohmann::json::parse(reduced.out).at("error_message") == "action failed");
}

TEST_CASE("induce runs offline and writes a report") {
    TempFile report("report.json");
    const CliResult r = run_cli("induce " + bw_domain() + " " + bw_domain() + " " + bw_problem() +
                                " " + kOfflineFlags + " --out " + report.path);
    CHECK(r.code == 0);
    CHECK(r.err.find("seed:") == std::string::npos);  // explicit seed: nothing derived
    const nlohmann::json j = nlohmann::json::parse(read_file(report.path));
    CHECK(j.at("success") == true);
    CHECK(j.at("seed") == 1);
    CHECK(j.at("config").at("v") == 3);
    CHECK(j.at("acc_per_loop").size() == j.at("loops_used").get<size_t>());
}

TEST_CASE("induce derives and announces a seed when none is given") {
    TempFile trivial("trivial.pddl");
    write_file(trivial.path, problem_with_goal("(on-table b1)"));  // already satisfied
    const CliResult r = run_cli("induce " + bw_domain() + " " + bw_domain() + " " + trivial.path +
                                " --v 1 --max-expansions 1000 --wall-time 0 --max-loops 3");
    CHECK(r.code == 0);
    CHECK(r.err.find("seed: ") != std::string::npos);
}

TEST_CASE("induce layers flags over a config file") {
    TempFile config("config.json");
    write_file(config.path, nlohmann::json{{"seed", 9},
                                           {"v", 2},
                                           {"belief_mode", "threshold"},
                                           {"max_expansions", 50000},
                                           {"wall_time_s", 0.0},
                                           {"max_loops", 30}}
                                .dump());
    TempFile report("report.json");
    const CliResult r = run_cli("induce " + bw_domain() + " " + bw_domain() + " " + bw_problem() +
                                " --config " + config.path + " --v 4 --out " + report.path);
    CHECK(r.code == 0);
    CHECK(r.err.find("seed:") == std::string::npos);  // the config file provides one
    const nlohmann::json j = nlohmann::json::parse(read_file(report.path));
    CHECK(j.at("seed") == 9);
    CHECK(j.at("config").at("v") == 4);  // the flag wins
    CHECK(j.at("config").at("belief_mode") == "threshold");
}

TEST_CASE("llm configurations without credentials or replays exit with code 3") {
    const CliResult live =
        run_cli("induce " + bw_domain() + " " + bw_domain() + " " + bw_problem() + " " +
                    kOfflineFlags + " --sampler llm",
                "env -u ACTSEM_API_KEY ");
    CHECK(live.code == 3);
    CHECK(live.err.find("ACTSEM_API_KEY") != std::string::npos);

    TempFile empty_replay("replay.json");
    write_file(empty_replay.path, "[]");
    const CliResult replay =
        run_cli("induce " + bw_domain() + " " + bw_domain() + " " + bw_problem() + " " +
                kOfflineFlags + " --sampler llm --replay " + empty_replay.path);
    CHECK(replay.code == 3);
    CHECK(replay.err.find("replay miss") != std::string::npos);
}

TEST_CASE("sweep writes the CSV table and its JSON mirror") {
    TempFile base("base.json");
    write_file(base.path,
               nlohmann::json{{"v", 3}, {"max_expansions", 50000}, {"wall_time_s", 0.0}}.dump());
    TempFile csv("sweep.csv");
    TempFile json_out("sweep.json");
    const CliResult r = run_cli("sweep --assets " + std::string(ACTSEM_ASSET_DIR) +
                                " --domains blocksworld --variants default --seeds 1,2 --jobs 2" +
                                " --base-config " + base.path + " --csv " + csv.path + " --json " +
                                json_out.path);
    CHECK(r.code == 0);
    const auto lines = split_lines(read_file(csv.path));
    REQUIRE(lines.size() >= 4);  // header, two seeds, aggregate
    CHECK(lines[0] == "domain,variant,seed,success,loops,NR,NES,final_acc,wall_time_s");
    CHECK(lines[1].rfind("blocksworld,default,1,1,", 0) == 0);
    CHECK(lines[2].rfind("blocksworld,default,2,1,", 0) == 0);
    CHECK(lines[3].rfind("blocksworld,default,aggregate,1,", 0) == 0);
    const nlohmann::json j = nlohmann::json::parse(read_file(json_out.path));
    CHECK(j.at("partial") == false);
    CHECK(j.at("rows").size() == 3);

    const CliResult bad = run_cli("sweep --assets " + std::string(ACTSEM_ASSET_DIR) +
                                  " --domains blocksworld --variants nonsense --seeds 1");
    CHECK(bad.code == 2);
}
