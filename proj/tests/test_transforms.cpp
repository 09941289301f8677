#include <doctest.h>

#include <numeric>

#include "fixtures.hpp"
#include "random_instances.hpp"
#include "screenfront/frontier.hpp"
#include "screenfront/solver.hpp"
#include "screenfront/transforms.hpp"

using namespace screenfront;

namespace {

// x1: v = t, x2: v = t^2, x0 = 0.375 x1 + 0.625 x2, on {1.5, 2, 2.5}
ScreeningProblem square_pair() {
    std::vector<double> t{1.5, 2, 2.5};
    std::vector<double> a, b, c;
    for (double x : t) {
        a.push_back(x);
        b.push_back(x * x);
        c.push_back(0.375 * x + 0.625 * x * x);
    }
    return make_problem(TypeGrid::uniform(t), {"x1", "x2", "x0"}, {a, b, c});
}

FrontierCertificate manual(const ScreeningProblem& p, std::vector<std::size_t> menu) {
    FrontierCertificate c;
    c.menu = std::move(menu);
    c.kind = FrontierKind::surplus_elasticity;
    (void)p;
    return c;
}

double truthful_payoff(const ScreeningProblem& p, const StochasticMechanism& m, std::size_t k) {
    return p.lottery_value(m.lotteries[k], k) - m.payments[k];
}

}  // namespace

TEST_CASE("reconstruction splits an off-frontier allocation") {
    auto p = square_pair();
    auto cert = manual(p, {1, 2});
    DeterministicMechanism m{{1, 3, 2}, {1.0, 2.0, 3.0}};
    auto r = reconstruct(p, cert, m);
    CHECK(r.trace[1].low == 1);
    CHECK(r.trace[1].high == 2);
    CHECK(r.trace[1].alpha == doctest::Approx(0.625));
    CHECK(r.mechanism.lotteries[1][1] == doctest::Approx(0.375));
    CHECK(r.mechanism.lotteries[1][2] == doctest::Approx(0.625));
    CHECK(r.mechanism.payments == m.payments);
    CHECK(p.lottery_value(r.mechanism.lotteries[1], 1) == doctest::Approx(3.25).epsilon(1e-12));
}

TEST_CASE("reconstruction of an on-frontier mechanism is the identity") {
    auto p = square_pair();
    auto cert = manual(p, {1, 2});
    DeterministicMechanism m{{0, 1, 2}, {0.0, 1.0, 2.0}};
    auto r = reconstruct(p, cert, m);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(r.trace[k].alpha == 1.0);
        CHECK(r.trace[k].high == m.assignment[k]);
        CHECK(r.mechanism.lotteries[k][m.assignment[k]] == 1.0);
    }
}

TEST_CASE("reconstruction rejects values above the frontier") {
    auto p = make_problem(TypeGrid::uniform({1, 2}), {"a", "b"}, {{1, 2}, {5, 6}});
    auto cert = manual(p, {1});
    DeterministicMechanism m{{2, 2}, {0, 0}};
    CHECK_THROWS_AS(reconstruct(p, cert, m), PreconditionError);
}

TEST_CASE("reconstruction on random frontier instances") {
    testing_support::Rng rng(11);
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        auto p = testing_support::random_frontier_problem(rng, 4, 3, 3);
        auto cert = detect_frontier(p);
        REQUIRE(cert.has_value());
        std::vector<std::size_t> a(p.num_types());
        for (auto& x : a) x = rng() % p.num_allocations();
        auto lp = payment_lp(p, a, IcMode::downward);
        if (!lp) continue;
        const auto& m = std::get<DeterministicMechanism>(lp->mechanism);
        auto r = reconstruct(p, *cert, m);
        auto src = StochasticMechanism::from(m, p.num_allocations());
        for (std::size_t k = 0; k < p.num_types(); ++k)
            CHECK(truthful_payoff(p, r.mechanism, k) == doctest::Approx(truthful_payoff(p, src, k)).epsilon(1e-12));
        CHECK(check_ic_ir(p, r.mechanism, IcMode::downward).holds());
        CHECK(objective_value(p, r.mechanism) == doctest::Approx(objective_value(p, m)).epsilon(1e-12));
        ++checked;
    }
    CHECK(checked > 20);
}

TEST_CASE("envelope payments for the strong pair") {
    auto p = fixtures::strong_pair();
    auto pay = envelope_payments(p, {0, 1, 2});
    CHECK(pay[0] == doctest::Approx(0));
    CHECK(pay[1] == doctest::Approx(2));
    CHECK(pay[2] == doctest::Approx(11));
    DeterministicMechanism m{{0, 1, 2}, pay};
    CHECK(check_ic_ir(p, m, IcMode::full).holds());
    auto lp = payment_lp(p, m.assignment, IcMode::full);
    REQUIRE(lp.has_value());
    CHECK(objective_value(p, m) == doctest::Approx(lp->value));
}

TEST_CASE("envelope payments for a constant rule") {
    auto p = fixtures::strong_pair();
    auto pay = envelope_payments(p, {2, 2, 2});
    for (double x : pay) CHECK(x == doctest::Approx(2));
}

TEST_CASE("envelope payments bind locally") {
    auto p = fixtures::strong_pair();
    std::vector<std::size_t> rule{1, 1, 2};
    auto pay = envelope_payments(p, rule);
    DeterministicMechanism m{rule, pay};
    CHECK(check_ic_ir(p, m, IcMode::full).holds());
    for (std::size_t k = 0; k < 3; ++k) {
        auto bumped = m;
        bumped.payments[k] += 1e-3;
        CHECK_FALSE(check_ic_ir(p, bumped, IcMode::full).holds());
    }
}

TEST_CASE("envelope payments reject nonmonotone rules") {
    auto p = fixtures::strong_pair();
    CHECK_THROWS_AS(envelope_payments(p, {2, 1, 2}), PreconditionError);
    CHECK_THROWS_AS(envelope_payments(p, {1, 0, 1}, {1, 2}), PreconditionError);
}

TEST_CASE("purification of degenerate lotteries") {
    auto p = fixtures::strong_pair();
    DeterministicMechanism m{{0, 1, 2}, {0, 2, 11}};
    auto out = purify(p, StochasticMechanism::from(m, 3), {1, 2});
    CHECK(out.mechanism.assignment == m.assignment);
    for (std::size_t k = 0; k < 3; ++k) CHECK(out.mechanism.payments[k] == doctest::Approx(m.payments[k]));
}

TEST_CASE("purification of a shared lottery") {
    auto p = make_problem(TypeGrid::uniform({1, 2}), {"x1", "x2"}, {{1, 2}, {2, 6}});
    std::vector<std::vector<double>> rows{{0, 0.5, 0.5}, {0, 0.5, 0.5}};
    auto lp = payment_lp(p, rows, IcMode::full);
    REQUIRE(lp.has_value());
    const auto& m = std::get<StochasticMechanism>(lp->mechanism);
    auto out = purify(p, m, {1, 2});
    CHECK(out.breakpoints.size() == 3);
    CHECK(check_ic_ir(p, out.mechanism, IcMode::full).holds());
    CHECK(objective_value(p, out.mechanism) >= objective_value(p, m) - 1e-9);
}

TEST_CASE("purification rejects unordered lotteries") {
    auto p = fixtures::strong_pair();
    StochasticMechanism m;
    m.lotteries = {{0, 0, 1}, {0, 1, 0}, {0, 1, 0}};
    m.payments = {0, 0, 0};
    CHECK_THROWS_AS(purify(p, m, {1, 2}), PreconditionError);
}

TEST_CASE("purification never lowers the objective") {
    testing_support::Rng rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        auto p = testing_support::random_ordered_problem(rng, 4, 3);
        testing_support::randomize_distribution(rng, p.grid);
        std::size_t n = p.num_types(), m = p.num_allocations();
        // cdf over chain positions, nonincreasing in type
        std::vector<std::vector<double>> cdf(n, std::vector<double>(m, 1.0));
        for (std::size_t j = 0; j + 1 < m; ++j) {
            std::vector<double> c(n);
            for (auto& x : c) x = u(rng);
            std::sort(c.rbegin(), c.rend());
            for (std::size_t k = 0; k < n; ++k) cdf[k][j] = j ? std::max(c[k], cdf[k][j - 1]) : c[k];
        }
        for (std::size_t j = 1; j + 1 < m; ++j)
            for (std::size_t k = 1; k < n; ++k) cdf[k][j] = std::min(cdf[k][j], cdf[k - 1][j]);
        std::vector<std::vector<double>> rows(n, std::vector<double>(m));
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < m; ++j) rows[k][j] = cdf[k][j] - (j ? cdf[k][j - 1] : 0.0);
        auto lp = payment_lp(p, rows, IcMode::full);
        REQUIRE(lp.has_value());
        const auto& mech = std::get<StochasticMechanism>(lp->mechanism);
        std::vector<std::size_t> order(m - 1);
        std::iota(order.begin(), order.end(), 1);
        auto out = purify(p, mech, order);
        CHECK(check_ic_ir(p, out.mechanism, IcMode::full).holds());
        CHECK(objective_value(p, out.mechanism) >= objective_value(p, mech) - 1e-9);
    }
}

TEST_CASE("upgrade pricing on the strong pair") {
    auto p = fixtures::strong_pair();
    auto cert = detect_frontier(p);
    REQUIRE(cert.has_value());
    auto up = upgrade_pricing(p, *cert);
    REQUIRE(up.increment_prices.size() == 2);
    CHECK(up.increment_prices[0] == doctest::Approx(2));
    CHECK(up.increment_prices[1] == doctest::Approx(9));
    CHECK(up.menu_prices[1] == doctest::Approx(11));
    CHECK(up.revenue == doctest::Approx(13.0 / 3));
    CHECK(up.mechanism.assignment == std::vector<std::size_t>{0, 1, 2});
    CHECK(check_ic_ir(p, up.mechanism, IcMode::full).holds());
    CHECK(objective_value(p, up.mechanism) == doctest::Approx(up.revenue));
    CHECK(stochastic_lp(p, IcMode::full).value == doctest::Approx(up.revenue));
}

TEST_CASE("upgrade pricing with one element is monopoly pricing") {
    auto p = fixtures::myerson();
    auto cert = detect_frontier(p);
    REQUIRE(cert.has_value());
    auto up = upgrade_pricing(p, *cert);
    CHECK(up.menu_prices[0] == doctest::Approx(2));
    CHECK(up.revenue == doctest::Approx(4.0 / 3));
}

TEST_CASE("upgrade pricing requires zero welfare weights") {
    auto p = fixtures::strong_pair();
    auto cert = detect_frontier(p);
    p.grid.welfare_weights = {0.5, 0.5, 0.5};
    CHECK_THROWS_AS(upgrade_pricing(p, *cert), PreconditionError);
}

TEST_CASE("upgrade pricing matches the stochastic optimum on strong ladders") {
    testing_support::Rng rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        auto p = testing_support::random_strong_problem(rng, 4, 3);
        testing_support::randomize_distribution(rng, p.grid);
        std::fill(p.grid.welfare_weights.begin(), p.grid.welfare_weights.end(), 0.0);
        auto cert = detect_frontier(p);
        REQUIRE(cert.has_value());
        if (!check_strong(p, *cert).strong) continue;
        auto up = upgrade_pricing(p, *cert);
        CHECK(check_ic_ir(p, up.mechanism, IcMode::full).holds());
        CHECK(up.revenue == doctest::Approx(stochastic_lp(p, IcMode::full).value).epsilon(1e-7));
        CHECK(up.revenue == doctest::Approx(deterministic_opt(p, cert->menu).value).epsilon(1e-7));
    }
}
