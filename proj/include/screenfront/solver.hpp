#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "screenfront/model.hpp"
#include "screenfront/rational.hpp"

namespace screenfront {

enum class Space { deterministic, stochastic };

std::string to_string(Space space);

struct ProgramDescriptor {
    IcMode ic_mode = IcMode::full;
    Space space = Space::deterministic;
    std::vector<std::size_t> menu;  // allocations available besides the outside option; empty means all
    bool exact = false;
};

using Mechanism = std::variant<DeterministicMechanism, StochasticMechanism>;

struct SolveResult {
    Mechanism mechanism;
    double value = 0.0;
    std::optional<Rational> exact_value;
    ProgramDescriptor program;
    std::uint64_t assignments = 0;  // enumerated by deterministic_opt
};

inline constexpr std::uint64_t kDefaultBudget = 1'000'000;

/// Enumeration cap: SCREENFRONT_BUDGET if set and valid, otherwise the default.
std::uint64_t default_budget();

struct SolveOptions {
    bool exact = false;
    std::optional<std::uint64_t> budget;
};

/// Optimal free payments for a fixed allocation rule; empty when the rule is not implementable.
std::optional<SolveResult> payment_lp(const ScreeningProblem& problem, const std::vector<std::size_t>& assignment,
                                      IcMode mode, SolveOptions options = {});
std::optional<SolveResult> payment_lp(const ScreeningProblem& problem,
                                      const std::vector<std::vector<double>>& lotteries, IcMode mode,
                                      SolveOptions options = {});

/// Optimal mechanism over lotteries supported on the menu and the outside option.
SolveResult stochastic_lp(const ScreeningProblem& problem, IcMode mode,
                          const std::optional<std::vector<std::size_t>>& menu = std::nullopt,
                          SolveOptions options = {});

/// Best deterministic mechanism by enumeration of assignments over the menu and the outside option.
/// Throws BudgetExceeded when the number of assignments exceeds the budget.
SolveResult deterministic_opt(const ScreeningProblem& problem,
                              const std::optional<std::vector<std::size_t>>& menu = std::nullopt,
                              SolveOptions options = {}, IcMode mode = IcMode::full);

/// Menu indices plus the outside option, sorted ascending.
std::vector<std::size_t> menu_with_outside(const ScreeningProblem& problem,
                                           const std::optional<std::vector<std::size_t>>& menu);

}  // namespace screenfront
