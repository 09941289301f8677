#pragma once

#include <optional>
#include <vector>

#include "screenfront/frontier.hpp"
#include "screenfront/model.hpp"

namespace screenfront {

struct ReconstructionStep {
    std::size_t type;
    std::size_t low;   // x-, the outside option or the frontier element below high
    std::size_t high;  // x+
    double alpha;      // weight on high, in (0,1]
};

struct Reconstruction {
    StochasticMechanism mechanism;
    std::vector<ReconstructionStep> trace;
};

/// Replaces each assigned allocation by a type-indifferent lottery over adjacent frontier elements.
/// Payments are kept. Throws PreconditionError if some value lies outside the frontier's range.
Reconstruction reconstruct(const ScreeningProblem& problem, const FrontierCertificate& certificate,
                           const DeterministicMechanism& mechanism);

/// Payments making local downward constraints bind, starting from bottom utility u1.
/// `order` lists the menu from low to high (outside option implicit at the bottom); when
/// empty, the assigned allocations are ordered by surplus.
std::vector<double> envelope_payments(const ScreeningProblem& problem, const std::vector<std::size_t>& assignment,
                                      const std::vector<std::size_t>& order = {}, double u1 = 0.0);

struct Purification {
    DeterministicMechanism mechanism;
    std::vector<double> breakpoints;        // 0 = e_0 < e_1 < ... < e_m = 1
    std::vector<double> interval_values;    // objective of the pure rule on (e_i, e_{i+1})
    std::size_t chosen = 0;
};

/// Monotone quantile coupling of stochastically ordered lotteries over an ordered menu, returning the
/// best pure rule with envelope payments anchored at the input's bottom utility.
Purification purify(const ScreeningProblem& problem, const StochasticMechanism& mechanism,
                    const std::vector<std::size_t>& order);

struct UpgradePricing {
    std::vector<std::size_t> menu;            // frontier, ascending
    std::vector<double> increment_prices;     // price of upgrading from element s-1 to s
    std::vector<double> menu_prices;          // cumulative
    std::vector<std::size_t> monopoly_types;  // lowest type buying each increment
    DeterministicMechanism mechanism;
    double revenue = 0.0;
};

/// Prices each incremental demand curve at its own monopoly point. Requires zero welfare
/// weights and a strong frontier certificate.
UpgradePricing upgrade_pricing(const ScreeningProblem& problem, const FrontierCertificate& certificate);

}  // namespace screenfront
