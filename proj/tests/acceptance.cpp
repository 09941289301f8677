// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "random_instances.hpp"
#include "screenfront/apps.hpp"
#include "screenfront/frontier.hpp"
#include "screenfront/solver.hpp"
#include "screenfront/transforms.hpp"
#include "screenfront/verify.hpp"

using namespace screenfront;
using testing_support::Rng;

namespace {

constexpr double kTimeLimit = 60.0;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    std::vector<std::string> failures;

    void fail(const std::string& why) {
        pass = false;
        if (failures.size() < 5) failures.push_back(why);
    }
};

struct Gap {
    double worst = 0.0;
    bool within(double a, double b, double tol = 1e-7) {
        double g = std::abs(a - b);
        worst = std::max(worst, g);
        return g <= tol * std::max(1.0, std::abs(b));
    }
};

ScreeningProblem myerson() { return make_problem(TypeGrid::uniform({1, 2, 3}), {"good"}, {{1, 2, 3}}); }

ScreeningProblem strong_pair() {
    return make_problem(TypeGrid::uniform({1, 2, 3}), {"x1", "x2"}, {{1, 2, 3}, {2, 6, 12}});
}

ScreeningProblem product_mix() { return generate("product-mix", nlohmann::json::object()).problem; }

bool degenerate(const StochasticMechanism& m) {
    for (const auto& l : m.lotteries)
        for (double w : l)
            if (std::min(std::abs(w), std::abs(1 - w)) > 1e-9) return false;
    return true;
}

// Random positive matrices kept only when a frontier is detected.
std::vector<ScreeningProblem> certified_instances(Rng& rng, std::size_t count, std::size_t* drawn) {
    std::vector<ScreeningProblem> out;
    *drawn = 0;
    while (out.size() < count) {
        std::size_t n = 3 + rng() % 3, m = 3 + rng() % 4;
        auto p = testing_support::random_positive_problem(rng, n, m);
        ++*drawn;
        try {
            if (detect_frontier(p)) out.push_back(std::move(p));
        } catch (const ElasticityUndefined&) {
        }
    }
    return out;
}

void criterion1(Outcome& o) {
    auto p = myerson();
    auto sto = stochastic_lp(p, IcMode::full);
    auto det = deterministic_opt(p);
    auto sx = stochastic_lp(p, IcMode::full, std::nullopt, {.exact = true});
    auto dx = deterministic_opt(p, std::nullopt, {.exact = true});
    Gap g;
    if (!g.within(sto.value, 4.0 / 3)) o.fail("stochastic value " + std::to_string(sto.value));
    if (!g.within(det.value, 4.0 / 3)) o.fail("deterministic value " + std::to_string(det.value));
    if (!sx.exact_value || *sx.exact_value != Rational(4, 3)) o.fail("exact stochastic value is not 4/3");
    if (!dx.exact_value || *dx.exact_value != Rational(4, 3)) o.fail("exact deterministic value is not 4/3");
    if (!degenerate(std::get<StochasticMechanism>(sto.mechanism))) o.fail("optimal lottery is not degenerate");
    if (!degenerate(std::get<StochasticMechanism>(sx.mechanism))) o.fail("exact optimal lottery is not degenerate");
    o.detail << "stoch " << sto.value << ", det " << det.value << ", exact " << to_string(*sx.exact_value);
}

void criterion2(Outcome& o) {
    Rng rng(2024);
    std::size_t drawn = 0;
    auto instances = certified_instances(rng, 50, &drawn);
    instances.insert(instances.begin(), product_mix());
    Gap g;
    std::size_t solved = 0;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        auto p = instances[i];
        auto cert = detect_frontier(p);
        for (int d = 0; d < 20; ++d) {
            testing_support::randomize_distribution(rng, p.grid);
            double menu = deterministic_opt(p, cert->menu).value;
            double all = deterministic_opt(p).value;
            ++solved;
            if (!g.within(menu, all)) o.fail("instance " + std::to_string(i) + " draw " + std::to_string(d));
        }
    }
    o.detail << instances.size() << " instances (" << drawn << " drawn for 50 certified), " << solved
             << " draws, max gap " << g.worst;
}

void criterion3(Outcome& o) {
    Rng rng(33);
    std::vector<ScreeningProblem> pool{strong_pair(), product_mix(), myerson()};
    std::size_t drawn = 0;
    for (auto& p : certified_instances(rng, 100, &drawn)) pool.push_back(std::move(p));
    for (int i = 0; i < 50; ++i) pool.push_back(testing_support::random_strong_problem(rng, 3 + rng() % 4, 2 + rng() % 3));
    Gap g;
    std::size_t strong = 0, draws = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        auto p = pool[i];
        auto cert = detect_frontier(p);
        if (!cert || !check_strong(p, *cert).strong) continue;
        ++strong;
        for (int d = 0; d < 5; ++d) {
            if (d) testing_support::randomize_distribution(rng, p.grid);
            double menu = deterministic_opt(p, cert->menu).value;
            double sto = stochastic_lp(p, IcMode::full).value;
            ++draws;
            if (!g.within(menu, sto)) o.fail("instance " + std::to_string(i) + " draw " + std::to_string(d));
        }
    }
    double v = stochastic_lp(strong_pair(), IcMode::full).value;
    if (!g.within(v, 13.0 / 3)) o.fail("strong pair value " + std::to_string(v));
    if (strong < 50) o.fail("only " + std::to_string(strong) + " strong instances");
    o.detail << strong << " strong instances, " << draws << " solves, strong pair " << v << ", max gap " << g.worst;
}

void criterion4(Outcome& o) {
    Rng rng(44);
    Gap g;
    for (int i = 0; i < 200; ++i) {
        std::size_t n = 2 + rng() % 5, m = 1 + rng() % 5;
        auto p = testing_support::random_ordered_problem(rng, n, m);
        testing_support::randomize_distribution(rng, p.grid);
        if (!strictly_ordered(p)) {
            o.fail("instance " + std::to_string(i) + " is not strictly ordered");
            continue;
        }
        double down = stochastic_lp(p, IcMode::downward).value;
        double full = stochastic_lp(p, IcMode::full).value;
        if (!g.within(down, full))
            o.fail("instance " + std::to_string(i) + ": downward " + std::to_string(down) + " vs full " +
                   std::to_string(full));
    }
    o.detail << "200 instances, max gap " << g.worst;
}

double truthful(const ScreeningProblem& p, const StochasticMechanism& m, std::size_t k) {
    return deviation_utility(p, m, k, k);
}

void criterion5(Outcome& o) {
    Rng rng(55);
    int done = 0, tries = 0;
    double drift = 0.0;
    while (done < 100 && tries < 10000) {
        ++tries;
        auto p = testing_support::random_frontier_problem(rng, 2 + rng() % 4, 1 + rng() % 3, rng() % 4);
        testing_support::randomize_distribution(rng, p.grid);
        auto cert = detect_frontier(p);
        if (!cert) {
            o.fail("generated frontier instance was not certified");
            continue;
        }
        std::vector<std::size_t> a(p.num_types());
        for (auto& x : a) x = rng() % p.num_allocations();
        auto lp = payment_lp(p, a, IcMode::downward);
        if (!lp) continue;
        const auto& m = std::get<DeterministicMechanism>(lp->mechanism);
        auto src = StochasticMechanism::from(m, p.num_allocations());
        auto r = reconstruct(p, *cert, m);
        for (std::size_t k = 0; k < p.num_types(); ++k) {
            double d = std::abs(truthful(p, r.mechanism, k) - truthful(p, src, k));
            drift = std::max(drift, d);
            if (d > 1e-12 * std::max(1.0, std::abs(truthful(p, src, k))))
                o.fail("pair " + std::to_string(done) + " type " + std::to_string(k) + " drift " + std::to_string(d));
        }
        if (!check_ic_ir(p, r.mechanism, IcMode::downward).holds())
            o.fail("pair " + std::to_string(done) + " fails a downward constraint");
        ++done;
    }
    if (done < 100) o.fail("only " + std::to_string(done) + " implementable pairs");
    o.detail << done << " pairs, max payoff drift " << drift;
}

void criterion6(Outcome& o) {
    Rng rng(66);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        auto p = testing_support::random_ordered_problem(rng, 2 + rng() % 4, 2 + rng() % 3);
        testing_support::randomize_distribution(rng, p.grid);
        std::size_t n = p.num_types(), m = p.num_allocations();
        // chain CDFs, nonincreasing in type so rows are ordered by first-order dominance
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
        if (!lp) {
            o.fail("trial " + std::to_string(trial) + ": lottery rule not implementable");
            continue;
        }
        const auto& mech = std::get<StochasticMechanism>(lp->mechanism);
        std::vector<std::size_t> order(m - 1);
        std::iota(order.begin(), order.end(), 1);
        auto out = purify(p, mech, order);
        if (!check_ic_ir(p, out.mechanism, IcMode::full).holds())
            o.fail("trial " + std::to_string(trial) + ": purified mechanism is not IC");
        double loss = objective_value(p, mech) - objective_value(p, out.mechanism);
        worst = std::max(worst, loss);
        if (loss > 1e-9) o.fail("trial " + std::to_string(trial) + ": objective falls by " + std::to_string(loss));
    }
    o.detail << "100 inputs, worst objective change " << -worst;
}

void criterion7(Outcome& o) {
    Rng rng(77);
    Gap g;
    int checked = 0, interior = 0;
    std::vector<ScreeningProblem> pool{strong_pair(), product_mix(), myerson()};
    for (int i = 0; i < 150; ++i) pool.push_back(testing_support::random_strong_problem(rng, 2 + rng() % 5, 1 + rng() % 4));
    for (auto& p : pool) {
        if (&p != &pool[0]) testing_support::randomize_distribution(rng, p.grid);
        std::fill(p.grid.welfare_weights.begin(), p.grid.welfare_weights.end(), 0.0);
        auto cert = detect_frontier(p);
        if (!cert || !check_strong(p, *cert).strong) continue;
        UpgradePricing up;
        try {
            up = upgrade_pricing(p, *cert);
        } catch (const Error& e) {
            o.fail(std::string("upgrade pricing threw: ") + e.what());
            continue;
        }
        ++checked;
        double sto = stochastic_lp(p, IcMode::full).value;
        if (!g.within(up.revenue, sto))
            o.fail("revenue " + std::to_string(up.revenue) + " vs " + std::to_string(sto));
        auto ks = up.monopoly_types;
        bool distinct = std::adjacent_find(ks.begin(), ks.end(),
                                           [](std::size_t a, std::size_t b) { return a >= b; }) == ks.end();
        bool inner = std::all_of(ks.begin(), ks.end(), [&](std::size_t k) { return k > 0 && k < p.num_types(); });
        if (distinct && inner) {
            ++interior;
            for (std::size_t x : cert->menu)
                if (std::find(up.mechanism.assignment.begin(), up.mechanism.assignment.end(), x) ==
                    up.mechanism.assignment.end())
                    o.fail("frontier element " + p.allocations.ids[x] + " unassigned");
        }
    }
    if (checked < 50 || interior < 10)
        o.fail("too few instances: " + std::to_string(checked) + " strong, " + std::to_string(interior) + " interior");
    o.detail << checked << " strong instances, " << interior << " with distinct interior quantities, max gap "
             << g.worst;
}

bool confirm(Outcome& o, const std::string& label, const AppInstance& a, Gap& g) {
    if (!a.expected.holds()) {
        o.fail(label + ": generator made no claim");
        return false;
    }
    auto r = verify_claim(a);
    for (const auto& c : r.checks) g.within(c.lhs, c.rhs);
    if (!r.passed()) {
        std::string why = r.certified ? "a check failed" : "claim not certified";
        if (r.violation) why += " (" + r.violation->code + ")";
        o.fail(label + ": " + why);
        return false;
    }
    return true;
}

void criterion8(Outcome& o) {
    using nlohmann::json;
    Rng rng(88);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Gap g;
    int confirmed = 0;

    // pure bundling: second good proportional to the first, bundle premium falling in type so each
    // single good's share of the bundle value rises
    int bundles = 0, bundle_draws = 0;
    while (bundles < 20 && bundle_draws < 1000) {
        ++bundle_draws;
        std::size_t n = 2 + rng() % 4;
        auto grid = testing_support::random_grid(rng, n);
        testing_support::randomize_distribution(rng, grid);
        auto v1 = testing_support::random_increasing_row(rng, n, 0.5, 3.0);
        double c = 0.3 + u(rng);
        std::vector<double> v2, b;
        double premium = 1.5 + u(rng);
        for (std::size_t k = 0; k < n; ++k) {
            v2.push_back(c * v1[k]);
            b.push_back((1 + c) * v1[k] * premium);
            premium = 1.0 + (premium - 1.0) * u(rng);
        }
        json params{{"goods", 2},
                    {"types", grid.types},
                    {"probabilities", grid.probabilities},
                    {"welfare_weights", grid.welfare_weights},
                    {"values", {v1, v2, b}}};
        AppInstance a;
        try {
            a = generate("bundles", params);
        } catch (const InputError&) {
            continue;  // bundle value not increasing in type
        }
        if (a.expected.statement != "pure bundling") continue;
        ++bundles;
        confirmed += confirm(o, "bundles draw " + std::to_string(bundle_draws), a, g);
    }
    if (bundles < 20) o.fail("only " + std::to_string(bundles) + " pure-bundling instances");

    auto a = generate("ordeal", json::object());
    if (a.provenance["conditions"]["a"] != true) o.fail("ordeal condition (a) not detected");
    confirmed += confirm(o, "ordeal (a)", a, g);
    auto b = generate("ordeal", {{"psi", "rising"}, {"types", {0.8, 0.9}}, {"labor", {0, 1, 1.5}}, {"ordeal", {0, 0.1}}});
    if (b.provenance["conditions"]["b"] != true) o.fail("ordeal condition (b) not detected");
    confirmed += confirm(o, "ordeal (b)", b, g);

    auto seq = generate("sequential", {{"sigma", {0.5, 0.75, 1}}, {"types", {0, 1, 2}}});
    if (seq.expected.menu.size() != 1) o.fail("sequential: claim is not a single posted price");
    confirmed += confirm(o, "sequential", seq, g);

    for (const char* f : {"linear", "concave"}) {
        auto i = generate("info", {{"family", f}});
        if (i.expected.menu != std::vector<std::string>{"full"}) o.fail(std::string("info ") + f + ": not full information");
        confirmed += confirm(o, std::string("info ") + f, i, g);
    }
    for (int states : {2, 3}) {
        auto i = generate("info", {{"family", "convex"}, {"states", states}});
        if (i.expected.kind != FrontierKind::generalized) o.fail("info convex: not a ladder");
        confirmed += confirm(o, "info convex " + std::to_string(states), i, g);
    }

    auto ru = generate("regulation", json::object());
    if (ru.expected.statement != "uniform pricing") o.fail("regulation: expected uniform pricing");
    confirmed += confirm(o, "regulation uniform", ru, g);
    auto rd = generate("regulation", {{"h", {0.25, 1, 2.25}}, {"w", {0.3, 0.2}}});
    if (rd.expected.statement != "discriminatory pricing") o.fail("regulation: expected discriminatory pricing");
    confirmed += confirm(o, "regulation discriminatory", rd, g);
    auto rm = generate("regulation", {{"h", {0.5, 0.5, 0.5}}, {"w", {1, 1}}});
    confirmed += confirm(o, "regulation log-modular", rm, g);

    for (const char* k : {"exp", "exp-decreasing", "separable"})
        confirmed += confirm(o, std::string("contracts ") + k, generate("contracts", {{"kernel", k}}), g);

    o.detail << confirmed << " claims confirmed (" << bundles << " bundling draws with random weights), max gap " << g.worst;
}

void criterion9(Outcome& o) {
    Rng rng(99);
    std::vector<std::pair<std::string, ScreeningProblem>> cases{
        {"myerson", myerson()}, {"strong pair", strong_pair()}, {"product mix", product_mix()}};
    std::size_t drawn = 0;
    auto small = certified_instances(rng, 1, &drawn);
    cases.emplace_back("random certified", small[0]);
    std::size_t zero = 0;
    for (const auto& [name, p] : cases) {
        auto r = verify_problem(p, {.exact = true});
        if (!r.certificate) {
            o.fail(name + ": no certificate");
            continue;
        }
        for (const auto& c : r.checks) {
            if (c.informational) continue;
            if (c.tolerance != 0.0 || !c.exact_lhs || !c.exact_rhs || *c.exact_lhs != *c.exact_rhs || c.gap != 0.0)
                o.fail(name + ": " + c.name + " gap " + std::to_string(c.gap));
            else
                ++zero;
        }
    }
    auto m = stochastic_lp(myerson(), IcMode::full, std::nullopt, {.exact = true});
    auto d = deterministic_opt(myerson(), std::nullopt, {.exact = true});
    if (*m.exact_value != *d.exact_value) o.fail("myerson stochastic and deterministic differ exactly");
    auto s = verify_problem(strong_pair(), {.exact = true});
    if (s.checks.empty() || *s.checks[0].exact_lhs != Rational(13, 3)) o.fail("strong pair value is not 13/3");
    o.detail << zero << " exact equalities with zero gap";
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<void(Outcome&)> run;
    };
    std::vector<Criterion> all{
        {"myerson baseline", criterion1},
        {"frontier menus among deterministic mechanisms", criterion2},
        {"strong frontiers among stochastic mechanisms", criterion3},
        {"downward sufficiency", criterion4},
        {"reconstruction", criterion5},
        {"purification", criterion6},
        {"upgrade pricing", criterion7},
        {"applications", criterion8},
        {"exact rational mode", criterion9},
    };
    int failures = 0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        Outcome o;
        auto t0 = std::chrono::steady_clock::now();
        try {
            all[i].run(o);
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > kTimeLimit) o.fail("exceeded " + std::to_string(kTimeLimit) + " s");
        std::printf("%s %zu %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, all[i].name, o.detail.str().c_str(),
                    secs);
        for (const auto& f : o.failures) std::printf("     %s\n", f.c_str());
        std::fflush(stdout);
        failures += !o.pass;
    }
    return failures;
}
