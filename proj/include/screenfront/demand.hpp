#pragma once

#include <optional>
#include <span>
#include <vector>

#include "screenfront/model.hpp"

namespace screenfront {

/// Step demand curve on the type grid: point k pairs the mass of types >= t_k with the value at t_k.
struct DemandCurve {
    std::vector<double> quantiles;
    std::vector<double> prices;

    std::size_t size() const { return prices.size(); }
};

enum class Order { weak, strict };

/// Relative tolerance used by ratio and pointwise comparisons.
inline constexpr double kOrderTolerance = 1e-12;

DemandCurve demand_curve(const ScreeningProblem& problem, std::size_t x);
DemandCurve demand_curve(const ScreeningProblem& problem, std::span<const double> lottery);

bool surplus_leq(std::span<const double> a, std::span<const double> b, Order order);
bool surplus_leq(const ScreeningProblem& problem, std::size_t x, std::size_t y, Order order);

/// a/b nondecreasing (weak) or strictly increasing (strict) along the grid.
/// Throws ElasticityUndefined if any entry is nonpositive.
bool elasticity_leq(std::span<const double> a, std::span<const double> b, Order order);
bool elasticity_leq(const ScreeningProblem& problem, std::size_t x, std::size_t y, Order order);

/// Smallest k with a <= b on [0,k] and a >= b on [k,n).
std::optional<std::size_t> single_crosses_from_below(std::span<const double> a, std::span<const double> b,
                                                     double tolerance = 0.0);
std::optional<std::size_t> single_crosses_from_below(const DemandCurve& a, const DemandCurve& b,
                                                     double tolerance = 0.0);

/// True when a <= b up to k and a >= b from k on.
bool crosses_at(std::span<const double> a, std::span<const double> b, std::size_t k, double tolerance = 0.0);

/// Pointwise difference of demand curves; requires x_low strictly below x_high in surplus.
DemandCurve incremental_curve(const ScreeningProblem& problem, std::size_t x_low, std::size_t x_high);

}  // namespace screenfront
