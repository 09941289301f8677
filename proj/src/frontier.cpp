#include "screenfront/frontier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>

#include "screenfront/demand.hpp"

namespace screenfront {

std::string to_string(FrontierKind kind) {
    switch (kind) {
        case FrontierKind::surplus_elasticity: return "surplus-elasticity";
        case FrontierKind::strong: return "strong";
        case FrontierKind::generalized: return "generalized";
    }
    return "unknown";
}

namespace {

const std::string& id(const ScreeningProblem& p, std::size_t x) { return p.allocations.ids[x]; }

void require_menu(const ScreeningProblem& p, const std::vector<std::size_t>& menu) {
    std::set<std::size_t> seen;
    for (std::size_t x : menu) {
        if (x >= p.num_allocations()) throw InputError("menu refers to allocation index " + std::to_string(x));
        if (x == p.outside()) throw InputError("menu must not contain the outside option");
        if (!seen.insert(x).second) throw InputError("menu lists '" + id(p, x) + "' twice");
    }
}

FrontierCheck fail(std::string code, std::string message, std::vector<std::size_t> allocations,
                   std::optional<std::size_t> type = std::nullopt) {
    return {std::nullopt, FrontierViolation{std::move(code), std::move(message), std::move(allocations), type}};
}

enum class Sign { nonpositive, mixed, positive };

Sign row_sign(const ScreeningProblem& p, std::size_t x) {
    bool pos = false, nonpos = false;
    for (double v : p.row(x)) (v > 0.0 ? pos : nonpos) = true;
    if (pos && nonpos) return Sign::mixed;
    return pos ? Sign::positive : Sign::nonpositive;
}

double sum(std::span<const double> r) { return std::accumulate(r.begin(), r.end(), 0.0); }

}  // namespace

std::optional<std::vector<std::size_t>> surplus_chain(const ScreeningProblem& problem, std::vector<std::size_t> menu) {
    std::stable_sort(menu.begin(), menu.end(),
                     [&](std::size_t a, std::size_t b) { return sum(problem.row(a)) < sum(problem.row(b)); });
    for (std::size_t s = 1; s < menu.size(); ++s)
        if (!surplus_leq(problem, menu[s - 1], menu[s], Order::strict)) return std::nullopt;
    return menu;
}

FrontierCheck check_frontier(const ScreeningProblem& problem, const std::vector<std::size_t>& candidate) {
    require_menu(problem, candidate);
    for (std::size_t x : candidate)
        if (!problem.row_positive(x))
            throw ElasticityUndefined("menu element '" + id(problem, x) + "' has a nonpositive value");

    auto chain = surplus_chain(problem, candidate);
    if (!chain) {
        auto sorted = candidate;
        std::stable_sort(sorted.begin(), sorted.end(),
                         [&](std::size_t a, std::size_t b) { return sum(problem.row(a)) < sum(problem.row(b)); });
        for (std::size_t s = 1; s < sorted.size(); ++s)
            if (!surplus_leq(problem, sorted[s - 1], sorted[s], Order::strict))
                return fail("not_surplus_ordered",
                            "'" + id(problem, sorted[s - 1]) + "' and '" + id(problem, sorted[s]) +
                                "' are not strictly ordered in surplus",
                            {sorted[s - 1], sorted[s]});
    }

    FrontierCertificate cert;
    cert.menu = *chain;
    const auto& menu = cert.menu;
    for (std::size_t s = 0; s < menu.size(); ++s)
        for (std::size_t r = s + 1; r < menu.size(); ++r) {
            PairEvidence e{menu[s], menu[r], surplus_leq(problem, menu[s], menu[r], Order::strict),
                           elasticity_leq(problem, menu[r], menu[s], Order::strict)};
            cert.pairs.push_back(e);
            if (!e.elasticity_strict)
                return fail("elasticity_not_strict",
                            "value ratio of '" + id(problem, menu[r]) + "' to '" + id(problem, menu[s]) +
                                "' is not strictly increasing",
                            {menu[s], menu[r]});
        }

    std::set<std::size_t> members(menu.begin(), menu.end());
    for (std::size_t x = 0; x < problem.num_allocations(); ++x) {
        if (x == problem.outside() || members.count(x)) continue;
        Sign sign = row_sign(problem, x);
        if (sign == Sign::nonpositive) {
            cert.dominance.push_back({x, std::nullopt});
            continue;
        }
        if (sign == Sign::mixed)
            return fail("requires_generalized",
                        "'" + id(problem, x) + "' has zero values at some types; use the generalized check", {x});
        bool found = false;
        for (std::size_t m : menu)
            if (surplus_leq(problem, x, m, Order::weak) && elasticity_leq(problem, x, m, Order::weak)) {
                cert.dominance.push_back({x, m});
                found = true;
                break;
            }
        if (!found)
            return fail("not_dominated",
                        "'" + id(problem, x) + "' is not weakly dominated in surplus and elasticity by any menu element",
                        {x});
    }
    return {std::move(cert), std::nullopt};
}

std::optional<FrontierCertificate> detect_frontier(const ScreeningProblem& problem, DetectOptions options) {
    std::vector<std::size_t> positive;
    for (std::size_t x = 0; x < problem.num_allocations(); ++x) {
        if (x == problem.outside()) continue;
        Sign s = row_sign(problem, x);
        if (s == Sign::mixed)
            throw ElasticityUndefined("'" + id(problem, x) + "' has a nonpositive value at some type");
        if (s == Sign::positive) positive.push_back(x);
    }

    if (options.exhaustive) {
        if (positive.size() > 12) throw InputError("exhaustive frontier search supports at most 12 allocations");
        std::size_t m = positive.size();
        std::vector<std::uint32_t> masks(std::size_t(1) << m);
        std::iota(masks.begin(), masks.end(), 0u);
        std::stable_sort(masks.begin(), masks.end(),
                         [](std::uint32_t a, std::uint32_t b) { return std::popcount(a) < std::popcount(b); });
        for (std::uint32_t mask : masks) {
            std::vector<std::size_t> cand;
            for (std::size_t i = 0; i < m; ++i)
                if (mask >> i & 1u) cand.push_back(positive[i]);
            auto c = check_frontier(problem, cand);
            if (c.ok()) return c.certificate;
        }
        return std::nullopt;
    }

    // among identical rows the last listed one represents the group
    std::vector<std::size_t> distinct;
    for (std::size_t i = 0; i < positive.size(); ++i) {
        bool dup = false;
        for (std::size_t j = i + 1; j < positive.size(); ++j)
            if (std::equal(problem.row(positive[i]).begin(), problem.row(positive[i]).end(),
                           problem.row(positive[j]).begin()))
                dup = true;
        if (!dup) distinct.push_back(positive[i]);
    }
    std::vector<std::size_t> undominated;
    for (std::size_t x : distinct) {
        bool dominated = false;
        for (std::size_t y : distinct)
            if (y != x && surplus_leq(problem, x, y, Order::weak) && elasticity_leq(problem, x, y, Order::weak)) {
                dominated = true;
                break;
            }
        if (!dominated) undominated.push_back(x);
    }
    auto c = check_frontier(problem, undominated);
    if (c.ok()) return c.certificate;
    return std::nullopt;
}

StrongCheck check_strong(const ScreeningProblem& problem, const FrontierCertificate& certificate) {
    if (certificate.kind == FrontierKind::generalized)
        throw PreconditionError("strong check requires a surplus-elasticity frontier certificate");
    std::size_t n = problem.num_types();
    const auto& menu = certificate.menu;
    std::vector<std::vector<double>> inc;
    for (std::size_t s = 0; s < menu.size(); ++s) {
        std::vector<double> d(n);
        for (std::size_t k = 0; k < n; ++k)
            d[k] = problem.value(menu[s], k) - (s ? problem.value(menu[s - 1], k) : 0.0);
        for (std::size_t k = 0; k < n; ++k)
            if (!(d[k] > 0.0)) {
                std::size_t below = s ? menu[s - 1] : problem.outside();
                return {false, FrontierViolation{"zero_increment",
                                                 "increment from '" + id(problem, below) + "' to '" +
                                                     id(problem, menu[s]) + "' is not positive",
                                                 {below, menu[s]}, k}};
            }
        inc.push_back(std::move(d));
    }
    for (std::size_t s = 1; s < inc.size(); ++s)
        if (!elasticity_leq(inc[s], inc[s - 1], Order::strict)) {
            std::size_t below = s > 1 ? menu[s - 2] : problem.outside();
            return {false, FrontierViolation{"increment_ratio_not_increasing",
                                             "increment ratio at '" + id(problem, menu[s]) + "' over '" +
                                                 id(problem, below) + "' is not strictly increasing",
                                             {below, menu[s - 1], menu[s]}, std::nullopt}};
        }
    return {true, std::nullopt};
}

FrontierCheck check_generalized(const ScreeningProblem& problem, const std::vector<std::size_t>& ordered_menu) {
    require_menu(problem, ordered_menu);
    std::size_t n = problem.num_types();
    FrontierCertificate cert;
    cert.kind = FrontierKind::generalized;
    cert.menu = ordered_menu;

    for (std::size_t s = 1; s < ordered_menu.size(); ++s) {
        std::size_t a = ordered_menu[s - 1], b = ordered_menu[s];
        for (std::size_t k = 1; k < n; ++k) {
            double lo = problem.value(b, k - 1) - problem.value(a, k - 1);
            double hi = problem.value(b, k) - problem.value(a, k);
            double tol = kOrderTolerance * std::max({1.0, std::abs(lo), std::abs(hi)});
            if (!(hi > lo + tol))
                return fail("increments_not_increasing",
                            "increment from '" + id(problem, a) + "' to '" + id(problem, b) +
                                "' is not strictly increasing in type",
                            {a, b}, k);
        }
        bool positive = true;
        for (std::size_t k = 0; k < n; ++k) positive = positive && problem.value(b, k) > problem.value(a, k);
        cert.pairs.push_back({a, b, positive, false});
    }

    std::vector<std::size_t> chain{problem.outside()};
    chain.insert(chain.end(), ordered_menu.begin(), ordered_menu.end());
    std::vector<double> lottery(n);
    for (std::size_t x = 0; x < problem.num_allocations(); ++x) {
        auto row = problem.row(x);
        if (x != problem.outside() && std::all_of(row.begin(), row.end(), [](double v) { return v <= 0.0; })) {
            for (std::size_t k = 0; k < n; ++k) cert.covering.push_back({x, k, problem.outside(), problem.outside(), 1.0});
            continue;
        }
        for (std::size_t k = 0; k < n; ++k) {
            double v = row[k];
            bool bracketed = false, covered = false;
            for (std::size_t j = 1; j < chain.size() && !covered; ++j) {
                double lo = problem.value(chain[j - 1], k), hi = problem.value(chain[j], k);
                double tol = kOrderTolerance * std::max({1.0, std::abs(lo), std::abs(hi)});
                if (v < lo - tol || v > hi + tol) continue;
                bracketed = true;
                double alpha = hi - lo > 0.0 ? std::clamp((v - lo) / (hi - lo), 0.0, 1.0) : 1.0;
                for (std::size_t i = 0; i < n; ++i)
                    lottery[i] = (1 - alpha) * problem.value(chain[j - 1], i) + alpha * problem.value(chain[j], i);
                if (crosses_at(row, lottery, k, kCoveringTolerance)) {
                    cert.covering.push_back({x, k, chain[j - 1], chain[j], alpha});
                    covered = true;
                }
            }
            if (!bracketed && ordered_menu.empty() && v == 0.0) {
                cert.covering.push_back({x, k, problem.outside(), problem.outside(), 1.0});
                covered = bracketed = true;
            }
            if (!bracketed)
                return fail("not_bracketed",
                            "value of '" + id(problem, x) + "' at type " + std::to_string(k) +
                                " lies outside every adjacent menu interval",
                            {x}, k);
            if (!covered)
                return fail("not_covered",
                            "no adjacent two-point lottery covers '" + id(problem, x) + "' at type " +
                                std::to_string(k),
                            {x}, k);
        }
    }
    return {std::move(cert), std::nullopt};
}

}  // namespace screenfront
