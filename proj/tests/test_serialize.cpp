#include <doctest.h>

#include <cstring>

#include "fixtures.hpp"
#include "random_instances.hpp"
#include "screenfront/serialize.hpp"

using namespace screenfront;

TEST_CASE("problem round trip is bit exact") {
    testing_support::Rng rng(8);
    for (int i = 0; i < 50; ++i) {
        auto p = testing_support::random_positive_problem(rng, 5, 4);
        testing_support::randomize_distribution(rng, p.grid);
        p.metadata = {{"seed", i}};
        auto q = problem_from_json(parse_json(to_json(p).dump()));
        REQUIRE(q.num_types() == p.num_types());
        CHECK(std::memcmp(q.grid.types.data(), p.grid.types.data(), p.num_types() * sizeof(double)) == 0);
        CHECK(q.grid.probabilities == p.grid.probabilities);
        CHECK(q.grid.welfare_weights == p.grid.welfare_weights);
        CHECK(q.allocations.ids == p.allocations.ids);
        CHECK(q.allocations.values == p.allocations.values);
        CHECK(q.outside() == p.outside());
        CHECK(q.metadata == p.metadata);
    }
}

TEST_CASE("decimal inputs survive a round trip") {
    const char* text = R"({"types":[1,1.5,2],"probabilities":[0.2,0.3,0.5],"welfare_weights":[0.1,0.1,0],
        "allocations":["empty","x"],"outside":"empty","values":[[0,0,0],[0.1,0.7,1.3]]})";
    auto p = problem_from_json(parse_json(text));
    CHECK(validate_problem(p).ok());
    auto again = problem_from_json(parse_json(to_json(p).dump()));
    CHECK(again.allocations.values[1][0] == 0.1);
    CHECK(again.grid.probabilities[1] == 0.3);
}

TEST_CASE("optional fields default") {
    auto p = problem_from_json(parse_json(R"({"types":[1,2],"allocations":["none","x"],"outside":"none",
        "values":[[0,0],[1,2]]})"));
    CHECK(p.grid.probabilities == std::vector<double>{0.5, 0.5});
    CHECK(p.grid.welfare_weights == std::vector<double>{0, 0});
    CHECK(p.outside() == 0);
}

TEST_CASE("malformed problems") {
    try {
        parse_json("{\"types\": [1, 2,}");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.byte == 17);
        CHECK(std::string(e.what()).find("byte 17") != std::string::npos);
    }
    CHECK_THROWS_AS(problem_from_json(parse_json(R"({"types":[1]})")), InputError);
    CHECK_THROWS_AS(problem_from_json(parse_json(
                        R"({"types":[1],"allocations":["a"],"outside":"empty","values":[[0]]})")),
                    InputError);
    CHECK_THROWS_AS(problem_from_json(parse_json(
                        R"({"types":["one"],"allocations":["empty"],"outside":"empty","values":[[0]]})")),
                    InputError);
    CHECK_THROWS_AS(problem_from_json(parse_json(
                        R"({"types":[1],"allocations":["empty"],"outside":"empty","values":[[0]],"colour":1})")),
                    InputError);
}

TEST_CASE("mechanisms round trip") {
    auto p = fixtures::strong_pair();
    DeterministicMechanism d{{0, 1, 2}, {0, 2, 11}};
    auto back = std::get<DeterministicMechanism>(mechanism_from_json(p, to_json(p, d)));
    CHECK(back.assignment == d.assignment);
    CHECK(back.payments == d.payments);
    CHECK(to_json(p, d)["assignment"] == json({"empty", "x1", "x2"}));

    auto s = StochasticMechanism::from(d, p.num_allocations());
    auto sb = std::get<StochasticMechanism>(mechanism_from_json(p, to_json(p, s)));
    CHECK(sb.lotteries == s.lotteries);

    json wrapped{{"mechanism", to_json(p, d)}, {"value", 1}};
    CHECK(std::holds_alternative<DeterministicMechanism>(mechanism_from_json(p, wrapped)));
    CHECK_THROWS_AS(mechanism_from_json(p, json{{"assignment", {"x1"}}, {"payments", {0, 0, 0}}}), DimensionError);
    CHECK_THROWS_AS(mechanism_from_json(p, json{{"assignment", {"x1", "x9", "x1"}}, {"payments", {0, 0, 0}}}),
                    InputError);
}

TEST_CASE("solve results carry the program descriptor") {
    auto p = fixtures::myerson();
    auto r = deterministic_opt(p, std::nullopt, {.exact = true});
    auto j = to_json(p, r);
    CHECK(j["exact_value"] == "4/3");
    CHECK(j["program"]["space"] == "deterministic");
    CHECK(j["program"]["ic"] == "full");
    CHECK(j["program"]["menu"] == "all");
    CHECK(j["mechanism"]["kind"] == "deterministic");
}

TEST_CASE("certificates and curves") {
    auto p = fixtures::opening_example();
    auto c = detect_frontier(p);
    REQUIRE(c.has_value());
    auto j = to_json(p, *c);
    CHECK(j["kind"] == "surplus-elasticity");
    CHECK(j["menu"].size() == 3);
    CHECK(j["pairs"].size() == 3);
    CHECK(j["dominance"].size() == p.num_allocations() - 4);

    auto curve = to_json(demand_curve(fixtures::myerson(), 1));
    CHECK(curve.size() == 3);
    CHECK(curve[0][0] == doctest::Approx(1.0));
    CHECK(curve[2][1] == 3.0);
}

TEST_CASE("generated instances round trip with their claim") {
    auto a = generate("contracts", json::object());
    auto j = to_json(a);
    CHECK(j["expected"]["kind"] == "generalized");
    auto b = app_instance_from_json(parse_json(j.dump()));
    CHECK(b.expected.menu == a.expected.menu);
    CHECK(b.expected.kind == a.expected.kind);
    CHECK(b.problem.allocations.values == a.problem.allocations.values);
    CHECK(b.provenance == a.provenance);

    auto none = generate("ordeal", {{"psi", "rising"}});
    CHECK(to_json(none)["expected"]["menu"] == "none");
    CHECK_FALSE(claim_from_json(to_json(none.expected)).holds());
}

TEST_CASE("report envelope") {
    auto r = make_report({{"name", "validate"}}, "abc", json::object(), 1.5);
    CHECK(r["schema"] == "screenfront.report/1");
    CHECK(r["input_digest"] == "fnv1a64:e71fa2190541574b");
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(r["timing_ms"] == 1.5);
}
