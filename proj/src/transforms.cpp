#include "screenfront/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "screenfront/demand.hpp"

namespace screenfront {

namespace {

const std::string& id(const ScreeningProblem& p, std::size_t x) { return p.allocations.ids[x]; }

std::vector<std::size_t> with_outside(const ScreeningProblem& p, const std::vector<std::size_t>& menu) {
    std::vector<std::size_t> chain{p.outside()};
    for (std::size_t x : menu) {
        if (x >= p.num_allocations()) throw InputError("menu refers to allocation index " + std::to_string(x));
        if (x == p.outside()) throw InputError("menu must not contain the outside option");
        chain.push_back(x);
    }
    return chain;
}

// weak (strict=false) or strict increasing differences along the chain, member pairs only for strict
void require_increasing_differences(const ScreeningProblem& p, const std::vector<std::size_t>& chain, bool strict) {
    for (std::size_t j = 1; j < chain.size(); ++j)
        for (std::size_t k = 1; k < p.num_types(); ++k) {
            double lo = p.value(chain[j], k - 1) - p.value(chain[j - 1], k - 1);
            double hi = p.value(chain[j], k) - p.value(chain[j - 1], k);
            double tol = kOrderTolerance * std::max({1.0, std::abs(lo), std::abs(hi)});
            bool ok = strict && j > 1 ? hi > lo + tol : hi >= lo - tol;
            if (!ok)
                throw PreconditionError("increments from '" + id(p, chain[j - 1]) + "' to '" + id(p, chain[j]) +
                                        "' are not increasing in type");
        }
}

}  // namespace

Reconstruction reconstruct(const ScreeningProblem& problem, const FrontierCertificate& certificate,
                           const DeterministicMechanism& mechanism) {
    std::size_t n = problem.num_types();
    if (mechanism.assignment.size() != n || mechanism.payments.size() != n)
        throw DimensionError("mechanism length does not match the type grid");
    auto chain = with_outside(problem, certificate.menu);
    Reconstruction out;
    out.mechanism.payments = mechanism.payments;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t x = mechanism.assignment[k];
        if (x >= problem.num_allocations()) throw DimensionError("assignment refers to allocation " + std::to_string(x));
        double v = problem.value(x, k);
        std::size_t pos = chain.size();
        auto on = std::find(chain.begin(), chain.end(), x);
        if (on != chain.end()) {
            pos = static_cast<std::size_t>(on - chain.begin());
        } else {
            if (v < 0.0)
                throw PreconditionError("value of '" + id(problem, x) + "' at type " + std::to_string(k) +
                                        " is below the outside option");
            for (std::size_t j = 0; j < chain.size(); ++j)
                if (problem.value(chain[j], k) >= v) {
                    pos = j;
                    break;
                }
            if (pos == chain.size())
                throw PreconditionError("value of '" + id(problem, x) + "' at type " + std::to_string(k) +
                                        " exceeds every frontier element");
        }
        std::size_t high = chain[pos];
        std::size_t low = pos ? chain[pos - 1] : chain[0];
        double alpha = 1.0;
        if (on == chain.end() && pos > 0) {
            double lo = problem.value(low, k), hi = problem.value(high, k);
            alpha = (v - lo) / (hi - lo);
        }
        std::vector<double> row(problem.num_allocations(), 0.0);
        row[high] += alpha;
        row[low] += 1.0 - alpha;
        out.mechanism.lotteries.push_back(std::move(row));
        out.trace.push_back({k, low, high, alpha});
    }
    return out;
}

std::vector<double> envelope_payments(const ScreeningProblem& problem, const std::vector<std::size_t>& assignment,
                                      const std::vector<std::size_t>& order, double u1) {
    std::size_t n = problem.num_types();
    if (assignment.size() != n) throw DimensionError("assignment length does not match the type grid");
    std::vector<std::size_t> menu = order;
    if (menu.empty()) {
        std::set<std::size_t> used;
        for (std::size_t x : assignment)
            if (x != problem.outside()) used.insert(x);
        auto chain = surplus_chain(problem, {used.begin(), used.end()});
        if (!chain) throw PreconditionError("assigned allocations are not ordered by surplus");
        menu = *chain;
    }
    auto chain = with_outside(problem, menu);
    std::vector<std::size_t> rank(problem.num_allocations(), chain.size());
    for (std::size_t j = 0; j < chain.size(); ++j) rank[chain[j]] = j;
    for (std::size_t k = 0; k < n; ++k) {
        if (rank.at(assignment[k]) == chain.size())
            throw PreconditionError("'" + id(problem, assignment[k]) + "' is not in the menu order");
        if (k && rank[assignment[k]] < rank[assignment[k - 1]])
            throw PreconditionError("allocation rule is not monotone at type " + std::to_string(k));
    }
    std::vector<std::size_t> used_chain;
    for (std::size_t j = 0; j < chain.size(); ++j)
        if (j == 0 || std::find(assignment.begin(), assignment.end(), chain[j]) != assignment.end())
            used_chain.push_back(chain[j]);
    require_increasing_differences(problem, used_chain, false);

    std::vector<double> p(n);
    double u = u1;
    for (std::size_t k = 0; k < n; ++k) {
        if (k) u += problem.value(assignment[k - 1], k) - problem.value(assignment[k - 1], k - 1);
        p[k] = problem.value(assignment[k], k) - u;
    }
    return p;
}

Purification purify(const ScreeningProblem& problem, const StochasticMechanism& mechanism,
                    const std::vector<std::size_t>& order) {
    std::size_t n = problem.num_types();
    auto chain = with_outside(problem, order);
    if (mechanism.lotteries.size() != n || mechanism.payments.size() != n)
        throw DimensionError("mechanism length does not match the type grid");
    require_increasing_differences(problem, chain, true);
    if (!check_ic_ir(problem, mechanism, IcMode::full).holds())
        throw PreconditionError("input mechanism is not incentive compatible");

    std::set<std::size_t> members(chain.begin(), chain.end());
    // cdf[k][j] = probability of chain[0..j] under type k's lottery
    std::vector<std::vector<double>> cdf(n, std::vector<double>(chain.size()));
    for (std::size_t k = 0; k < n; ++k) {
        const auto& row = mechanism.lotteries[k];
        if (row.size() != problem.num_allocations()) throw DimensionError("lottery row length mismatch");
        for (std::size_t x = 0; x < row.size(); ++x)
            if (!members.count(x) && row[x] > 1e-12)
                throw PreconditionError("lottery of type " + std::to_string(k) + " puts weight on '" + id(problem, x) +
                                        "' outside the menu");
        double s = 0.0;
        for (std::size_t j = 0; j < chain.size(); ++j) {
            s += row[chain[j]];
            cdf[k][j] = j + 1 == chain.size() ? 1.0 : std::min(s, 1.0);
        }
    }
    for (std::size_t k = 1; k < n; ++k)
        for (std::size_t j = 0; j < chain.size(); ++j)
            if (cdf[k][j] > cdf[k - 1][j] + 1e-12)
                throw PreconditionError("lotteries of types " + std::to_string(k - 1) + " and " + std::to_string(k) +
                                        " are not stochastically ordered");

    Purification out;
    std::vector<double> e{0.0, 1.0};
    for (const auto& c : cdf)
        for (double v : c)
            if (v > 1e-12 && v < 1.0 - 1e-12) e.push_back(v);
    std::sort(e.begin(), e.end());
    std::vector<double> uniq;
    for (double v : e)
        if (uniq.empty() || v > uniq.back() + 1e-12) uniq.push_back(v);
    uniq.back() = 1.0;
    out.breakpoints = uniq;

    double u1 = problem.lottery_value(mechanism.lotteries[0], 0) - mechanism.payments[0];
    std::optional<double> best;
    for (std::size_t i = 0; i + 1 < uniq.size(); ++i) {
        double eps = 0.5 * (uniq[i] + uniq[i + 1]);
        std::vector<std::size_t> rule(n);
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t j = 0;
            while (j + 1 < chain.size() && cdf[k][j] < eps) ++j;
            rule[k] = chain[j];
        }
        DeterministicMechanism m{rule, envelope_payments(problem, rule, order, u1)};
        double val = objective_value(problem, m);
        out.interval_values.push_back(val);
        if (!best || val > *best + 1e-12 * std::max(1.0, std::abs(*best))) {
            best = val;
            out.mechanism = m;
            out.chosen = i;
        }
    }
    return out;
}

UpgradePricing upgrade_pricing(const ScreeningProblem& problem, const FrontierCertificate& certificate) {
    for (double l : problem.grid.welfare_weights)
        if (l != 0.0) throw PreconditionError("upgrade pricing requires zero welfare weights");
    auto strong = check_strong(problem, certificate);
    if (!strong.strong) throw PreconditionError("upgrade pricing requires a strong frontier");

    std::size_t n = problem.num_types();
    auto chain = with_outside(problem, certificate.menu);
    UpgradePricing out;
    out.menu = certificate.menu;
    double cumulative = 0.0;
    for (std::size_t s = 1; s < chain.size(); ++s) {
        std::size_t best_k = 0;
        double best = -1.0;
        for (std::size_t k = 0; k < n; ++k) {
            double inc = problem.value(chain[s], k) - problem.value(chain[s - 1], k);
            double rev = inc * problem.grid.upper_mass(k);
            if (rev > best + 1e-12 * std::max(1.0, std::abs(best))) {
                best = rev;
                best_k = k;
            }
        }
        if (!out.monopoly_types.empty() && best_k < out.monopoly_types.back())
            throw Error("monopoly quantities of successive increments are not nested");
        double price = problem.value(chain[s], best_k) - problem.value(chain[s - 1], best_k);
        out.monopoly_types.push_back(best_k);
        out.increment_prices.push_back(price);
        cumulative += price;
        out.menu_prices.push_back(cumulative);
        out.revenue += price * problem.grid.upper_mass(best_k);
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t s = 0;
        while (s < out.monopoly_types.size() && out.monopoly_types[s] <= k) ++s;
        out.mechanism.assignment.push_back(chain[s]);
        out.mechanism.payments.push_back(s ? out.menu_prices[s - 1] : 0.0);
    }
    return out;
}

}  // namespace screenfront
