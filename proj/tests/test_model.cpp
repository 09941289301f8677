#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"

using namespace screenfront;

namespace {

bool has_code(const ValidationReport& r, const std::string& code) {
    return std::any_of(r.violations.begin(), r.violations.end(), [&](const Violation& v) { return v.code == code; });
}

ScreeningProblem simple() { return make_problem(TypeGrid::uniform({1, 2, 3}), {"x1"}, {{1, 2, 3}}); }

}  // namespace

TEST_CASE("valid problem passes validation") {
    auto p = simple();
    CHECK(validate_problem(p).ok());
    CHECK(p.allocations.ids[p.outside()] == "empty");
}

TEST_CASE("validation reports violated invariants") {
    auto p = simple();
    p.grid.probabilities = {0.5, 0.5, 0.5};
    CHECK(has_code(validate_problem(p), "probabilities_sum"));

    p = simple();
    p.grid.welfare_weights = {0, 0.5, 1};
    CHECK(has_code(validate_problem(p), "welfare_weights_not_nonincreasing"));

    p = simple();
    p.grid.types = {1, 1, 3};
    CHECK(has_code(validate_problem(p), "types_not_increasing"));

    p = simple();
    p.grid.welfare_weights = {3, 3, 3};
    CHECK(has_code(validate_problem(p), "welfare_mean_exceeds_one"));

    p = simple();
    p.allocations.values[0][1] = 0.1;
    CHECK(has_code(validate_problem(p), "outside_nonzero"));

    p = simple();
    p.allocations.values[1] = {3, 2, 1};
    auto r = validate_problem(p);
    CHECK(has_code(r, "values_decreasing"));
    CHECK(r.violations.size() == 2);

    p = simple();
    p.allocations.values[1].pop_back();
    CHECK(has_code(validate_problem(p), "dimension_mismatch"));

    p = simple();
    p.allocations.ids[1] = "empty";
    CHECK(has_code(validate_problem(p), "duplicate_id"));
}

TEST_CASE("constant rows are allowed") {
    auto p = make_problem(TypeGrid::uniform({1, 2}), {"flat"}, {{1, 1}});
    CHECK(validate_problem(p).ok());
}

TEST_CASE("objective value") {
    auto p = simple();
    DeterministicMechanism m{{1, 1, 1}, {1, 1, 1}};
    CHECK(objective_value(p, m) == doctest::Approx(1.0));

    p.grid.welfare_weights = {1, 0, 0};
    CHECK(objective_value(p, m) == doctest::Approx(1.0));

    p.grid.welfare_weights = {1, 1, 1};
    DeterministicMechanism e{{0, 1, 1}, {0, 1, 1}};
    CHECK(objective_value(p, e) == doctest::Approx((0.0 + 2 + 3) / 3));

    CHECK_THROWS_AS(objective_value(p, DeterministicMechanism{{1, 1}, {1, 1}}), DimensionError);
}

TEST_CASE("objective is affine in a uniform payment shift") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0, 1);
    auto p = simple();
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> l{u(rng), u(rng), u(rng)};
        std::sort(l.rbegin(), l.rend());
        p.grid.welfare_weights = l;
        DeterministicMechanism m{{0, 1, 1}, {u(rng), u(rng), u(rng)}};
        double c = 3 * u(rng) - 1;
        DeterministicMechanism shifted = m;
        for (double& x : shifted.payments) x += c;
        CHECK(objective_value(p, shifted) - objective_value(p, m) ==
              doctest::Approx(c * (1 - p.grid.mean_welfare_weight())));
    }
}

TEST_CASE("stochastic objective matches deterministic on degenerate lotteries") {
    auto p = simple();
    DeterministicMechanism m{{0, 1, 1}, {0, 2, 2}};
    CHECK(objective_value(p, StochasticMechanism::from(m, 2)) == doctest::Approx(objective_value(p, m)));
}

TEST_CASE("IC and IR checks") {
    auto p = simple();
    CHECK(check_ic_ir(p, DeterministicMechanism{{1, 1, 1}, {1, 1, 1}}, IcMode::full).holds());

    auto bad = check_ic_ir(p, DeterministicMechanism{{0, 1, 1}, {0, 2, 1}}, IcMode::full);
    REQUIRE_FALSE(bad.holds());
    bool found = false;
    for (const auto& v : bad.violations)
        found = found || (v.kind == ConstraintViolation::Kind::ic && v.type == 1 && v.deviation == 2u);
    CHECK(found);

    CHECK(check_ic_ir(p, DeterministicMechanism{{0, 1, 1}, {0, 1, 1}}, IcMode::full).holds());

    auto ir = check_ic_ir(p, DeterministicMechanism{{1, 1, 1}, {2, 2, 2}}, IcMode::downward);
    CHECK(ir.violations.front().kind == ConstraintViolation::Kind::ir);
    CHECK(ir.violations.front().type == 0);
}

TEST_CASE("full IC implies downward IC") {
    std::mt19937 rng(11);
    auto p = fixtures::strong_pair();
    int full_count = 0;
    for (int trial = 0; trial < 5000; ++trial) {
        DeterministicMechanism m;
        for (int k = 0; k < 3; ++k) {
            m.assignment.push_back(rng() % 3);
            m.payments.push_back(static_cast<double>(rng() % 13));
        }
        auto full = check_ic_ir(p, m, IcMode::full);
        auto down = check_ic_ir(p, m, IcMode::downward);
        CHECK(down.violations.size() <= full.violations.size());
        if (full.holds()) {
            ++full_count;
            CHECK(down.holds());
        }
    }
    CHECK(full_count > 0);
}

TEST_CASE("ic mode parsing") {
    CHECK(ic_mode_from_string("down") == IcMode::downward);
    CHECK(ic_mode_from_string("full") == IcMode::full);
    CHECK_THROWS_AS(ic_mode_from_string("up"), InputError);
}
