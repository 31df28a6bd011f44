#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "json.hpp"

#include "actsem/eval.hpp"
#include "actsem/util.hpp"
#include "helpers.hpp"

using namespace actsem;
using testutil::load_domain;
using testutil::strip_wall_time;

namespace {

InductionConfig cheap_config() {
    InductionConfig c;
    c.sampler = "random";
    c.rule_asp = true;
    c.v = 3;
    c.max_expansions = 50000;
    c.wall_time_s = 0.0;
    c.max_loops = 30;
    return c;
}

// CSV text with the trailing wall-time column removed from every line.
std::string csv_without_wall_time(const std::string& csv) {
    std::string out;
    for (const auto& line : split_lines(csv)) {
        if (line.empty()) continue;
        out += line.substr(0, line.rfind(',')) + "\n";
    }
    return out;
}

}  // namespace

TEST_CASE("accuracy is the recalled fraction of true statements") {
    const Domain truth_domain = load_domain("blocksworld");
    const BeliefMap truth = semantics_of(truth_domain);

    size_t total = 0;
    for (const auto& [action, sem] : truth) total += sem.size();
    REQUIRE(total == 27);

    CHECK(accuracy(truth, truth) == doctest::Approx(1.0));
    CHECK(accuracy({}, truth) == doctest::Approx(0.0));

    BeliefMap partial = truth;
    partial["stack"].preconditions.clear();  // stack has two true preconditions
    CHECK(accuracy(partial, truth) == doctest::Approx(25.0 / 27.0));

    // spurious statements never lower the score
    BeliefMap noisy = partial;
    noisy["stack"].preconditions.push_back(
        {Role::precondition, Polarity::positive, "arm-empty", {}});
    CHECK(accuracy(noisy, truth) == doctest::Approx(25.0 / 27.0));

    // recovering a true statement raises it
    BeliefMap better = partial;
    better["stack"].preconditions.push_back(
        {Role::precondition, Polarity::positive, "holding", {"?ob"}});
    CHECK(accuracy(better, truth) == doctest::Approx(26.0 / 27.0));
}

TEST_CASE("accuracy keys statements by role") {
    const BeliefMap truth{
        {"act", ActionSemantics{{{Role::precondition, Polarity::positive, "p", {}}}, {}}}};
    const BeliefMap wrong_role{
        {"act", ActionSemantics{{}, {{Role::effect, Polarity::positive, "p", {}}}}}};
    CHECK(accuracy(wrong_role, truth) == doctest::Approx(0.0));
}

TEST_CASE("accuracy rejects unknown actions and an empty truth scores one") {
    const BeliefMap truth{{"act", ActionSemantics{}}};
    const BeliefMap stranger{{"ghost", ActionSemantics{}}};
    CHECK_THROWS_AS(accuracy(stranger, truth), std::invalid_argument);
    CHECK(accuracy({}, truth) == doctest::Approx(1.0));  // nothing to recall
    CHECK(accuracy(truth, truth) == doctest::Approx(1.0));
}

TEST_CASE("variants override exactly one knob") {
    const InductionConfig base = cheap_config();
    CHECK(apply_variant(base, "default").to_json() == base.to_json());

    InductionConfig expected = base;
    expected.v = 0;
    CHECK(apply_variant(base, "w/o prospection").to_json() == expected.to_json());

    InductionConfig llm_base = base;
    llm_base.sampler = "llm";
    expected = llm_base;
    expected.sampler = "random";
    CHECK(apply_variant(llm_base, "w/o LLM-TS").to_json() == expected.to_json());

    expected = base;
    expected.v = 7;
    CHECK(apply_variant(base, "v=7").to_json() == expected.to_json());
    expected = base;
    expected.l = 3;
    CHECK(apply_variant(base, "l=3").to_json() == expected.to_json());
    expected = base;
    expected.k = 0;
    CHECK(apply_variant(base, "k=0").to_json() == expected.to_json());
    expected = base;
    expected.g = 1;
    CHECK(apply_variant(base, "g=1").to_json() == expected.to_json());

    for (const std::string bad : {"", "V=3", "x=3", "v=abc", "v=3 ", "v=", "prospection"})
        CHECK_THROWS_AS(apply_variant(base, bad), std::invalid_argument);
}

TEST_CASE("the axis grid covers v, l, k, and g") {
    const auto grid = axis_sweep_variants();
    CHECK(grid.size() == 13);
    CHECK(grid.front() == "v=0");
    int v_count = 0, l_count = 0, k_count = 0, g_count = 0;
    for (const auto& name : grid) {
        if (name.rfind("v=", 0) == 0) ++v_count;
        if (name.rfind("l=", 0) == 0) ++l_count;
        if (name.rfind("k=", 0) == 0) ++k_count;
        if (name.rfind("g=", 0) == 0) ++g_count;
    }
    CHECK(v_count == 4);
    CHECK(l_count == 3);
    CHECK(k_count == 3);
    CHECK(g_count == 3);
}

TEST_CASE("a suite emits one row per seed plus an aggregate row") {
    const SuiteResult result = run_suite(ACTSEM_ASSET_DIR, {"blocksworld"}, {"default"},
                                         {1, 2, 3}, cheap_config());
    CHECK_FALSE(result.partial);
    REQUIRE(result.rows.size() == 4);
    for (size_t i = 0; i < 3; ++i) {
        CHECK(result.rows[i].domain == "blocksworld");
        CHECK(result.rows[i].variant == "default");
        CHECK(result.rows[i].seed == std::to_string(i + 1));
        CHECK_FALSE(result.rows[i].aggregate);
        CHECK(result.rows[i].success == 1.0);
        CHECK(result.rows[i].acc_per_loop.size() == static_cast<size_t>(result.rows[i].loops));
    }
    const SuiteRow& agg = result.rows[3];
    CHECK(agg.aggregate);
    CHECK(agg.seed == "aggregate");
    CHECK(agg.success == doctest::Approx(1.0));
    const double nr_mean =
        (result.rows[0].nr + result.rows[1].nr + result.rows[2].nr) / 3.0;
    CHECK(agg.nr == doctest::Approx(nr_mean));
    CHECK(agg.nr_min == std::min({result.rows[0].nr, result.rows[1].nr, result.rows[2].nr}));
    CHECK(agg.nr_max == std::max({result.rows[0].nr, result.rows[1].nr, result.rows[2].nr}));
    CHECK(agg.nes_min <= agg.nes);
    CHECK(agg.nes <= agg.nes_max);
    CHECK(agg.acc_min <= agg.acc_max);

    const std::string csv = result.csv();
    CHECK(csv.rfind("domain,variant,seed,success,loops,NR,NES,final_acc,wall_time_s\n", 0) == 0);
    CHECK(split_lines(csv).size() >= 5);

    // everything except wall time is reproducible
    const SuiteResult again = run_suite(ACTSEM_ASSET_DIR, {"blocksworld"}, {"default"},
                                        {1, 2, 3}, cheap_config());
    CHECK(csv_without_wall_time(again.csv()) == csv_without_wall_time(csv));
    nlohmann::json ja = result.to_json(), jb = again.to_json();
    strip_wall_time(ja);
    strip_wall_time(jb);
    CHECK(ja == jb);
}

TEST_CASE("parallel execution changes nothing but the wall time") {
    const SuiteResult serial = run_suite(ACTSEM_ASSET_DIR, {"blocksworld", "grippers"},
                                         {"default", "v=1"}, {1, 2}, cheap_config(), 1);
    const SuiteResult parallel = run_suite(ACTSEM_ASSET_DIR, {"blocksworld", "grippers"},
                                           {"default", "v=1"}, {1, 2}, cheap_config(), 4);
    CHECK(csv_without_wall_time(serial.csv()) == csv_without_wall_time(parallel.csv()));
}

TEST_CASE("an exhausted budget flags the result as partial") {
    const SuiteResult result = run_suite(ACTSEM_ASSET_DIR, {"blocksworld"}, {"default"}, {1},
                                         cheap_config(), 1, 1e-9);
    CHECK(result.partial);
    CHECK(result.rows.empty());
}

TEST_CASE("the backend factory is consulted once per cell") {
    std::vector<std::string> calls;
    BackendFactory factory = [&](const std::string& domain, const std::string& variant,
                                 uint64_t seed) -> std::unique_ptr<Backend> {
        calls.push_back(domain + "|" + variant + "|" + std::to_string(seed));
        return nullptr;  // the random/rule configuration needs none
    };
    run_suite(ACTSEM_ASSET_DIR, {"blocksworld"}, {"default", "v=1"}, {5, 6}, cheap_config(), 1,
              0.0, factory);
    REQUIRE(calls.size() == 4);
    CHECK(calls[0] == "blocksworld|default|5");
    CHECK(calls[3] == "blocksworld|v=1|6");
}

TEST_CASE("bad variants and missing domains fail loudly") {
    CHECK_THROWS_AS(
        run_suite(ACTSEM_ASSET_DIR, {"blocksworld"}, {"nonsense"}, {1}, cheap_config()),
        std::invalid_argument);
    CHECK_THROWS(run_suite(ACTSEM_ASSET_DIR, {"no-such-domain"}, {"default"}, {1},
                           cheap_config()));
}
