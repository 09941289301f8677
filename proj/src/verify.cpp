#include "screenfront/verify.hpp"

#include <algorithm>
#include <cmath>

#include "screenfront/demand.hpp"

namespace screenfront {

namespace {

std::string describe(Space space, IcMode mode, const std::string& menu) {
    return to_string(space) + "/" + to_string(mode) + "/" + menu;
}

EqualityCheck compare(std::string name, const SolveResult& lhs, const SolveResult& rhs, bool exact,
                      bool informational = false) {
    EqualityCheck c;
    c.name = std::move(name);
    c.lhs_program = describe(lhs.program.space, lhs.program.ic_mode, lhs.program.menu.empty() ? "all" : "menu");
    c.rhs_program = describe(rhs.program.space, rhs.program.ic_mode, rhs.program.menu.empty() ? "all" : "menu");
    c.lhs = lhs.value;
    c.rhs = rhs.value;
    c.informational = informational;
    if (exact && lhs.exact_value && rhs.exact_value) {
        c.exact_lhs = lhs.exact_value;
        c.exact_rhs = rhs.exact_value;
        Rational d = *lhs.exact_value - *rhs.exact_value;
        c.gap = to_double(abs(d));
        c.tolerance = 0.0;
        c.passed = d == 0;
    } else {
        c.gap = std::abs(lhs.value - rhs.value);
        c.tolerance = kEqualityTolerance * std::max(1.0, std::abs(rhs.value));
        c.passed = c.gap <= c.tolerance;
    }
    return c;
}

SolveOptions solve_options(const VerifyOptions& o) { return {o.exact, o.budget}; }

}  // namespace

bool VerifyReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const EqualityCheck& c) { return c.informational || c.passed; });
}

bool ClaimReport::passed() const {
    return !claimed || (certified && std::all_of(checks.begin(), checks.end(),
                                                  [](const EqualityCheck& c) { return c.informational || c.passed; }));
}

bool strictly_ordered(const ScreeningProblem& problem) {
    std::vector<std::size_t> rest;
    for (std::size_t x = 0; x < problem.num_allocations(); ++x)
        if (x != problem.outside()) rest.push_back(x);
    auto chain = surplus_chain(problem, rest);
    if (!chain) return false;
    std::size_t prev = problem.outside();
    for (std::size_t x : *chain) {
        for (std::size_t k = 1; k < problem.num_types(); ++k) {
            double lo = problem.value(x, k - 1) - problem.value(prev, k - 1);
            double hi = problem.value(x, k) - problem.value(prev, k);
            if (!(hi > lo + kOrderTolerance * std::max({1.0, std::abs(lo), std::abs(hi)}))) return false;
        }
        prev = x;
    }
    return true;
}

VerifyReport verify_problem(const ScreeningProblem& problem, VerifyOptions options) {
    VerifyReport r;
    auto so = solve_options(options);
    try {
        r.certificate = detect_frontier(problem);
    } catch (const ElasticityUndefined& e) {
        r.notes.push_back(std::string("frontier detection undefined: ") + e.what());
    }
    std::optional<SolveResult> det_all, sto_full;
    auto det = [&]() -> const SolveResult& {
        if (!det_all) det_all = deterministic_opt(problem, std::nullopt, so);
        return *det_all;
    };
    auto sto = [&]() -> const SolveResult& {
        if (!sto_full) sto_full = stochastic_lp(problem, IcMode::full, std::nullopt, so);
        return *sto_full;
    };
    if (r.certificate) {
        auto on_frontier = deterministic_opt(problem, r.certificate->menu, so);
        r.checks.push_back(compare("frontier optimal among deterministic mechanisms", on_frontier, det(), options.exact));
        r.strong = check_strong(problem, *r.certificate).strong;
        if (*r.strong)
            r.checks.push_back(
                compare("strong frontier optimal among stochastic mechanisms", on_frontier, sto(), options.exact));
        else
            r.checks.push_back(compare("stochastic against deterministic optimum", sto(), det(), options.exact, true));
    } else {
        r.notes.push_back("no certificate; optimality checks skipped");
    }
    r.ordered = strictly_ordered(problem);
    auto down = stochastic_lp(problem, IcMode::downward, std::nullopt, so);
    r.checks.push_back(compare("downward constraints suffice", down, sto(), options.exact, !r.ordered));
    if (!r.ordered) r.notes.push_back("allocations are not strictly ordered; downward comparison is informational");
    return r;
}

ClaimReport verify_claim(const AppInstance& instance, VerifyOptions options) {
    ClaimReport r;
    const auto& p = instance.problem;
    const auto& claim = instance.expected;
    if (!claim.holds() || !claim.kind) return r;
    r.claimed = true;
    auto so = solve_options(options);
    auto indices = [&](const std::vector<std::string>& ids) {
        std::vector<std::size_t> out;
        for (const auto& id : ids) out.push_back(p.allocations.require(id));
        return out;
    };
    auto menu = indices(claim.menu);
    FrontierKind kind = *claim.kind;
    auto cert = kind == FrontierKind::generalized ? check_generalized(p, menu) : check_frontier(p, menu);
    r.certified = cert.ok();
    r.violation = cert.violation;
    if (r.certified && kind == FrontierKind::strong && !check_strong(p, *cert.certificate).strong) {
        r.certified = false;
        r.violation = check_strong(p, *cert.certificate).violation;
    }

    auto sto_all = stochastic_lp(p, IcMode::full, std::nullopt, so);
    auto det_menu = deterministic_opt(p, menu, so);
    if (kind != FrontierKind::generalized) {
        auto det_all = deterministic_opt(p, std::nullopt, so);
        r.checks.push_back(compare("claimed menu optimal among deterministic mechanisms", det_menu, det_all, options.exact));
    }
    if (kind != FrontierKind::surplus_elasticity)
        r.checks.push_back(compare("claimed menu optimal among stochastic mechanisms", det_menu, sto_all, options.exact));
    for (std::size_t i = 0; i < claim.alternatives.size(); ++i) {
        auto alt = stochastic_lp(p, IcMode::full, indices(claim.alternatives[i]), so);
        r.checks.push_back(compare("alternative menu " + std::to_string(i + 1) + " equally good", alt, sto_all,
                                   options.exact));
    }
    return r;
}

}  // namespace screenfront
