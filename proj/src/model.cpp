#include "screenfront/model.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace screenfront {

double TypeGrid::upper_mass(std::size_t k) const {
    double s = 0.0;
    for (std::size_t j = probabilities.size(); j-- > k;) s += probabilities[j];
    return s;
}

double TypeGrid::mean_welfare_weight() const {
    double s = 0.0;
    for (std::size_t k = 0; k < probabilities.size(); ++k) s += probabilities[k] * welfare_weights[k];
    return s;
}

TypeGrid TypeGrid::uniform(std::vector<double> types, double welfare_weight) {
    std::size_t n = types.size();
    TypeGrid g;
    g.types = std::move(types);
    g.probabilities.assign(n, n ? 1.0 / static_cast<double>(n) : 0.0);
    g.welfare_weights.assign(n, welfare_weight);
    return g;
}

std::optional<std::size_t> AllocationSet::index_of(std::string_view id) const {
    for (std::size_t i = 0; i < ids.size(); ++i)
        if (ids[i] == id) return i;
    return std::nullopt;
}

std::size_t AllocationSet::require(std::string_view id) const {
    if (auto i = index_of(id)) return *i;
    throw InputError("unknown allocation id '" + std::string(id) + "'");
}

double ScreeningProblem::lottery_value(std::span<const double> lottery, std::size_t k) const {
    if (lottery.size() != num_allocations()) throw DimensionError("lottery length does not match allocation count");
    double s = 0.0;
    for (std::size_t x = 0; x < lottery.size(); ++x)
        if (lottery[x] != 0.0) s += lottery[x] * allocations.values[x][k];
    return s;
}

bool ScreeningProblem::row_positive(std::size_t x) const {
    for (double v : allocations.values[x])
        if (!(v > 0.0)) return false;
    return true;
}

ScreeningProblem make_problem(TypeGrid grid, std::vector<std::string> ids,
                              std::vector<std::vector<double>> values, std::string outside_id) {
    ScreeningProblem p;
    std::size_t n = grid.size();
    p.grid = std::move(grid);
    bool has_outside = false;
    for (const auto& id : ids) has_outside = has_outside || id == outside_id;
    if (!has_outside) {
        p.allocations.ids.push_back(outside_id);
        p.allocations.values.emplace_back(n, 0.0);
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
        p.allocations.ids.push_back(std::move(ids[i]));
        p.allocations.values.push_back(std::move(values[i]));
    }
    p.allocations.outside_index = p.allocations.require(outside_id);
    return p;
}

StochasticMechanism StochasticMechanism::from(const DeterministicMechanism& m, std::size_t num_allocations) {
    StochasticMechanism s;
    s.payments = m.payments;
    for (std::size_t x : m.assignment) {
        std::vector<double> row(num_allocations, 0.0);
        row.at(x) = 1.0;
        s.lotteries.push_back(std::move(row));
    }
    return s;
}

namespace {

void add(ValidationReport& r, std::string code, const std::string& message) {
    r.violations.push_back({std::move(code), message});
}

std::string idx(std::size_t k) { return std::to_string(k); }

}  // namespace

ValidationReport validate_problem(const ScreeningProblem& problem) {
    ValidationReport r;
    const auto& g = problem.grid;
    const auto& a = problem.allocations;
    std::size_t n = g.types.size();

    if (n == 0) add(r, "empty_grid", "type grid has no types");
    if (g.probabilities.size() != n || g.welfare_weights.size() != n)
        add(r, "dimension_mismatch", "types, probabilities and welfare_weights differ in length");
    for (std::size_t k = 0; k < n; ++k)
        if (!std::isfinite(g.types[k])) add(r, "nonfinite", "type " + idx(k) + " is not finite");
    for (std::size_t k = 1; k < n; ++k)
        if (!(g.types[k] > g.types[k - 1]))
            add(r, "types_not_increasing", "types not strictly increasing at index " + idx(k));

    if (g.probabilities.size() == n) {
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            double mu = g.probabilities[k];
            if (!std::isfinite(mu)) add(r, "nonfinite", "probability " + idx(k) + " is not finite");
            else if (!(mu > 0.0)) add(r, "probability_nonpositive", "probability " + idx(k) + " is not positive");
            sum += mu;
        }
        if (n > 0 && std::isfinite(sum) && std::abs(sum - 1.0) > 1e-12) {
            std::ostringstream os;
            os.precision(17);
            os << "probabilities sum to " << sum << ", not 1";
            add(r, "probabilities_sum", os.str());
        }
    }
    if (g.welfare_weights.size() == n) {
        for (std::size_t k = 0; k < n; ++k) {
            double l = g.welfare_weights[k];
            if (!std::isfinite(l)) add(r, "nonfinite", "welfare weight " + idx(k) + " is not finite");
            else if (l < 0.0) add(r, "welfare_weight_negative", "welfare weight " + idx(k) + " is negative");
        }
        for (std::size_t k = 1; k < n; ++k)
            if (g.welfare_weights[k] > g.welfare_weights[k - 1])
                add(r, "welfare_weights_not_nonincreasing",
                    "welfare weights not nonincreasing at index " + idx(k));
        if (g.probabilities.size() == n && g.mean_welfare_weight() > 1.0 + 1e-12)
            add(r, "welfare_mean_exceeds_one", "mean welfare weight exceeds 1");
    }

    if (a.values.size() != a.ids.size())
        add(r, "dimension_mismatch", "allocation ids and value rows differ in count");
    std::set<std::string> seen;
    for (std::size_t x = 0; x < a.ids.size(); ++x)
        if (!seen.insert(a.ids[x]).second) add(r, "duplicate_id", "allocation id '" + a.ids[x] + "' repeated");
    if (a.outside_index >= a.ids.size()) add(r, "outside_index", "outside option index out of range");

    for (std::size_t x = 0; x < a.values.size(); ++x) {
        const auto& row = a.values[x];
        std::string name = x < a.ids.size() ? a.ids[x] : idx(x);
        if (row.size() != n) {
            add(r, "dimension_mismatch", "value row '" + name + "' has " + idx(row.size()) + " entries, expected " + idx(n));
            continue;
        }
        bool finite = true;
        for (std::size_t k = 0; k < n; ++k)
            if (!std::isfinite(row[k])) {
                add(r, "nonfinite", "value of '" + name + "' at type " + idx(k) + " is not finite");
                finite = false;
            }
        if (!finite) continue;
        if (x == a.outside_index) {
            for (std::size_t k = 0; k < n; ++k)
                if (row[k] != 0.0) add(r, "outside_nonzero", "outside option has nonzero value at type " + idx(k));
            continue;
        }
        for (std::size_t k = 1; k < n; ++k)
            if (row[k] < row[k - 1])
                add(r, "values_decreasing", "values of '" + name + "' decrease at type " + idx(k));
    }
    return r;
}

namespace {

void require_dims(const ScreeningProblem& p, std::size_t rows, std::size_t pays) {
    if (rows != p.num_types() || pays != p.num_types())
        throw DimensionError("mechanism has " + std::to_string(rows) + " rows and " + std::to_string(pays) +
                             " payments, problem has " + std::to_string(p.num_types()) + " types");
}

void require_dims(const ScreeningProblem& p, const DeterministicMechanism& m) {
    require_dims(p, m.assignment.size(), m.payments.size());
    for (std::size_t x : m.assignment)
        if (x >= p.num_allocations()) throw DimensionError("assignment refers to allocation " + std::to_string(x));
}

void require_dims(const ScreeningProblem& p, const StochasticMechanism& m) {
    require_dims(p, m.lotteries.size(), m.payments.size());
    for (const auto& row : m.lotteries)
        if (row.size() != p.num_allocations()) throw DimensionError("lottery row length mismatch");
}

}  // namespace

double objective_value(const ScreeningProblem& problem, const DeterministicMechanism& m) {
    require_dims(problem, m);
    const auto& g = problem.grid;
    double s = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        double v = problem.value(m.assignment[k], k);
        s += g.probabilities[k] * (g.welfare_weights[k] * (v - m.payments[k]) + m.payments[k]);
    }
    return s;
}

double objective_value(const ScreeningProblem& problem, const StochasticMechanism& m) {
    require_dims(problem, m);
    const auto& g = problem.grid;
    double s = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        double v = problem.lottery_value(m.lotteries[k], k);
        s += g.probabilities[k] * (g.welfare_weights[k] * (v - m.payments[k]) + m.payments[k]);
    }
    return s;
}

double deviation_utility(const ScreeningProblem& problem, const StochasticMechanism& m, std::size_t k,
                         std::size_t j) {
    return problem.lottery_value(m.lotteries[j], k) - m.payments[j];
}

IcReport check_ic_ir(const ScreeningProblem& problem, const StochasticMechanism& m, IcMode mode,
                     double tolerance) {
    require_dims(problem, m);
    std::size_t n = problem.num_types();
    // u[k][j]: type k reporting j
    std::vector<std::vector<double>> u(n, std::vector<double>(n));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) u[k][j] = deviation_utility(problem, m, k, j);

    IcReport r;
    for (std::size_t k = 0; k < n; ++k) {
        if (u[k][k] < -tolerance) r.violations.push_back({ConstraintViolation::Kind::ir, k, std::nullopt, u[k][k]});
        std::size_t last = mode == IcMode::full ? n : k;
        for (std::size_t j = 0; j < last; ++j) {
            if (j == k) continue;
            double slack = u[k][k] - u[k][j];
            if (slack < -tolerance) r.violations.push_back({ConstraintViolation::Kind::ic, k, j, slack});
        }
    }
    return r;
}

IcReport check_ic_ir(const ScreeningProblem& problem, const DeterministicMechanism& m, IcMode mode,
                     double tolerance) {
    require_dims(problem, m);
    return check_ic_ir(problem, StochasticMechanism::from(m, problem.num_allocations()), mode, tolerance);
}

std::string to_string(IcMode mode) { return mode == IcMode::full ? "full" : "downward"; }

IcMode ic_mode_from_string(std::string_view s) {
    if (s == "full") return IcMode::full;
    if (s == "down" || s == "downward") return IcMode::downward;
    throw InputError("unknown IC mode '" + std::string(s) + "'");
}

}  // namespace screenfront
