#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"

#include "adaptest/arms.hpp"
#include "adaptest/rng.hpp"

using namespace adaptest;

namespace {

problem_instance three_arm_instance() {
    problem_instance instance;
    instance.arms = {{0, 1.0, 1.0, distribution_kind::gaussian, true},
                     {1, 0.5, 1.0, distribution_kind::gaussian, false},
                     {2, 0.0, 1.0, distribution_kind::gaussian, false}};
    return instance;
}

}  // namespace

TEST_CASE("record_sample accumulates count and sum") {
    arm_stats stats{3, 0, 0.0};
    record_sample(stats, 1.5);
    CHECK(stats.n == 1);
    CHECK(stats.sum == doctest::Approx(1.5));
    record_sample(stats, -0.5);
    CHECK(stats.n == 2);
    CHECK(stats.sum == doctest::Approx(1.0));
    CHECK(empirical_mean(stats) == doctest::Approx(0.5));
}

TEST_CASE("empirical_mean refuses empty statistics") {
    arm_stats stats{0, 0, 0.0};
    CHECK_THROWS_WITH_AS(empirical_mean(stats), doctest::Contains("no samples"),
                         std::invalid_argument);
}

TEST_CASE("replay reproduces incremental statistics exactly") {
    rng_stream rng(11, 0);
    std::vector<sample_record> log;
    std::vector<arm_stats> incremental(3);
    for (int a = 0; a < 3; ++a) incremental[a].arm_id = a;
    for (int step = 1; step <= 500; ++step) {
        const int arm = static_cast<int>(rng.next_u64() % 3);
        const double value = rng.standard_normal();
        log.push_back({step, arm, value});
        record_sample(incremental[arm], value);
    }
    const std::vector<arm_stats> replayed = replay(log, 3);
    std::int64_t total = 0;
    for (int a = 0; a < 3; ++a) {
        CHECK(replayed[a].n == incremental[a].n);
        CHECK(replayed[a].sum == incremental[a].sum);  // bitwise: same op order
        total += replayed[a].n;
    }
    CHECK(total == static_cast<std::int64_t>(log.size()));
}

TEST_CASE("replay rejects out-of-range arms") {
    CHECK_THROWS_AS(replay({{1, 5, 0.0}}, 3), std::invalid_argument);
    CHECK_THROWS_AS(replay({}, 0), std::invalid_argument);
}

TEST_CASE("instance validation enforces structure") {
    problem_instance instance = three_arm_instance();
    CHECK_NOTHROW(instance.validate());

    SUBCASE("needs two arms") {
        instance.arms.resize(1);
        CHECK_THROWS_AS(instance.validate(), std::invalid_argument);
    }
    SUBCASE("ids must be positional") {
        instance.arms[1].id = 5;
        CHECK_THROWS_AS(instance.validate(), std::invalid_argument);
    }
    SUBCASE("control must exist") {
        instance.arms[0].is_control = false;
        CHECK_THROWS_AS(instance.validate(), std::invalid_argument);
    }
    SUBCASE("control must be arm 0") {
        instance.arms[0].is_control = false;
        instance.arms[1].is_control = true;
        CHECK_THROWS_WITH_AS(instance.validate(), doctest::Contains("id 0"),
                             std::invalid_argument);
    }
    SUBCASE("only one control") {
        instance.arms[2].is_control = true;
        CHECK_THROWS_AS(instance.validate(), std::invalid_argument);
    }
    SUBCASE("sigma must be positive") {
        instance.arms[1].sigma = 0.0;
        CHECK_THROWS_AS(instance.validate(), std::invalid_argument);
    }
    SUBCASE("bernoulli mean range") {
        instance.arms[1] = {1, 1.5, 0.5, distribution_kind::bernoulli, false};
        CHECK_THROWS_AS(instance.validate(), std::invalid_argument);
    }
    SUBCASE("bernoulli sigma pinned") {
        instance.arms[1] = {1, 0.5, 0.3, distribution_kind::bernoulli, false};
        CHECK_THROWS_WITH_AS(instance.validate(), doctest::Contains("0.5"),
                             std::invalid_argument);
    }
}

TEST_CASE("instance json round trips") {
    problem_instance instance = three_arm_instance();
    instance.label = "demo";
    const problem_instance parsed = parse_instance_json(instance_to_json(instance));
    CHECK(parsed.label == "demo");
    REQUIRE(parsed.num_arms() == 3);
    for (int a = 0; a < 3; ++a) {
        CHECK(parsed.arms[a].id == instance.arms[a].id);
        CHECK(parsed.arms[a].mean == instance.arms[a].mean);
        CHECK(parsed.arms[a].sigma == instance.arms[a].sigma);
        CHECK(parsed.arms[a].is_control == instance.arms[a].is_control);
    }
}

TEST_CASE("instance json parsing") {
    SUBCASE("minimal bernoulli arms default sigma") {
        const auto inst = parse_instance_json(R"({"arms": [
            {"mean": 0.4, "distribution": "bernoulli", "is_control": true},
            {"mean": 0.5, "distribution": "bernoulli"}]})");
        CHECK(inst.arms[0].sigma == 0.5);
        CHECK(inst.arms[1].sigma == 0.5);
    }
    SUBCASE("unknown top-level key rejected") {
        CHECK_THROWS_WITH_AS(
            parse_instance_json(R"({"arms": [], "armz": 1})"),
            doctest::Contains("armz"), std::invalid_argument);
    }
    SUBCASE("unknown arm key rejected") {
        CHECK_THROWS_WITH_AS(parse_instance_json(R"({"arms": [
                {"mean": 0.0, "sigma": 1.0, "is_control": true, "variance": 2.0},
                {"mean": 1.0, "sigma": 1.0}]})"),
                             doctest::Contains("variance"), std::invalid_argument);
    }
    SUBCASE("mean is required") {
        CHECK_THROWS_WITH_AS(parse_instance_json(R"({"arms": [
                {"sigma": 1.0, "is_control": true},
                {"mean": 1.0, "sigma": 1.0}]})"),
                             doctest::Contains("mean"), std::invalid_argument);
    }
    SUBCASE("gaussian arms need sigma") {
        CHECK_THROWS_WITH_AS(parse_instance_json(R"({"arms": [
                {"mean": 0.0, "is_control": true},
                {"mean": 1.0, "sigma": 1.0}]})"),
                             doctest::Contains("sigma"), std::invalid_argument);
    }
    SUBCASE("malformed json reported") {
        CHECK_THROWS_WITH_AS(parse_instance_json("{"), doctest::Contains("JSON"),
                             std::invalid_argument);
    }
    SUBCASE("unknown distribution reported") {
        CHECK_THROWS_WITH_AS(parse_instance_json(R"({"arms": [
                {"mean": 0.0, "sigma": 1.0, "is_control": true, "distribution": "poisson"},
                {"mean": 1.0, "sigma": 1.0}]})"),
                             doctest::Contains("poisson"), std::invalid_argument);
    }
}

TEST_CASE("load_instance reports missing files") {
    CHECK_THROWS_WITH_AS(load_instance("/nonexistent/instance.json"),
                         doctest::Contains("cannot open"), std::invalid_argument);
}
