#include "screenfront/demand.hpp"

#include <algorithm>
#include <cmath>

namespace screenfront {

namespace {

std::vector<double> quantile_grid(const ScreeningProblem& problem) {
    std::size_t n = problem.num_types();
    std::vector<double> q(n);
    double s = 0.0;
    for (std::size_t k = n; k-- > 0;) {
        s += problem.grid.probabilities[k];
        q[k] = s;
    }
    if (n) q[0] = 1.0;
    return q;
}

double scale(double a, double b) { return std::max({1.0, std::abs(a), std::abs(b)}); }

void require_same_length(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionError("curves are on different grids");
}

}  // namespace

DemandCurve demand_curve(const ScreeningProblem& problem, std::size_t x) {
    if (x >= problem.num_allocations()) throw DimensionError("allocation index out of range");
    auto row = problem.row(x);
    return {quantile_grid(problem), std::vector<double>(row.begin(), row.end())};
}

DemandCurve demand_curve(const ScreeningProblem& problem, std::span<const double> lottery) {
    DemandCurve c{quantile_grid(problem), std::vector<double>(problem.num_types())};
    for (std::size_t k = 0; k < problem.num_types(); ++k) c.prices[k] = problem.lottery_value(lottery, k);
    return c;
}

bool surplus_leq(std::span<const double> a, std::span<const double> b, Order order) {
    require_same_length(a, b);
    for (std::size_t k = 0; k < a.size(); ++k) {
        double tol = kOrderTolerance * scale(a[k], b[k]);
        if (order == Order::weak ? a[k] > b[k] + tol : !(a[k] < b[k] - tol)) return false;
    }
    return true;
}

bool surplus_leq(const ScreeningProblem& problem, std::size_t x, std::size_t y, Order order) {
    return surplus_leq(problem.row(x), problem.row(y), order);
}

bool elasticity_leq(std::span<const double> a, std::span<const double> b, Order order) {
    require_same_length(a, b);
    for (std::size_t k = 0; k < a.size(); ++k)
        if (!(a[k] > 0.0) || !(b[k] > 0.0)) throw ElasticityUndefined("nonpositive value at type " + std::to_string(k));
    for (std::size_t k = 1; k < a.size(); ++k) {
        // a[k]/b[k] against a[k-1]/b[k-1] in cross-product form
        double hi = a[k] * b[k - 1];
        double lo = a[k - 1] * b[k];
        double tol = kOrderTolerance * (std::abs(hi) + std::abs(lo));
        if (order == Order::weak ? hi < lo - tol : !(hi > lo + tol)) return false;
    }
    return true;
}

bool elasticity_leq(const ScreeningProblem& problem, std::size_t x, std::size_t y, Order order) {
    return elasticity_leq(problem.row(x), problem.row(y), order);
}

bool crosses_at(std::span<const double> a, std::span<const double> b, std::size_t k, double tolerance) {
    require_same_length(a, b);
    for (std::size_t j = 0; j <= k && j < a.size(); ++j)
        if (a[j] > b[j] + tolerance) return false;
    for (std::size_t j = k; j < a.size(); ++j)
        if (a[j] < b[j] - tolerance) return false;
    return true;
}

std::optional<std::size_t> single_crosses_from_below(std::span<const double> a, std::span<const double> b,
                                                     double tolerance) {
    require_same_length(a, b);
    std::size_t n = a.size();
    if (n == 0) return std::nullopt;
    std::vector<bool> suffix(n + 1, true);
    for (std::size_t j = n; j-- > 0;) suffix[j] = suffix[j + 1] && a[j] >= b[j] - tolerance;
    bool prefix = true;
    for (std::size_t k = 0; k < n; ++k) {
        prefix = prefix && a[k] <= b[k] + tolerance;
        if (!prefix) break;
        if (suffix[k]) return k;
    }
    return std::nullopt;
}

std::optional<std::size_t> single_crosses_from_below(const DemandCurve& a, const DemandCurve& b, double tolerance) {
    if (a.quantiles.size() != b.quantiles.size()) throw DimensionError("curves are on different grids");
    return single_crosses_from_below(a.prices, b.prices, tolerance);
}

DemandCurve incremental_curve(const ScreeningProblem& problem, std::size_t x_low, std::size_t x_high) {
    if (!surplus_leq(problem, x_low, x_high, Order::strict))
        throw PreconditionError("'" + problem.allocations.ids[x_low] + "' is not strictly below '" +
                                problem.allocations.ids[x_high] + "' in surplus");
    DemandCurve c = demand_curve(problem, x_high);
    for (std::size_t k = 0; k < c.size(); ++k) c.prices[k] -= problem.value(x_low, k);
    return c;
}

}  // namespace screenfront
