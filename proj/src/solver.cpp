#include "screenfront/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <type_traits>

#include "screenfront/lp.hpp"

namespace screenfront {

std::string to_string(Space space) { return space == Space::deterministic ? "deterministic" : "stochastic"; }

std::uint64_t default_budget() {
    if (const char* env = std::getenv("SCREENFRONT_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return v;
    }
    return kDefaultBudget;
}

std::vector<std::size_t> menu_with_outside(const ScreeningProblem& problem,
                                           const std::optional<std::vector<std::size_t>>& menu) {
    std::vector<std::size_t> out;
    if (menu) {
        for (std::size_t x : *menu) {
            if (x >= problem.num_allocations()) throw InputError("menu refers to allocation index " + std::to_string(x));
            out.push_back(x);
        }
        out.push_back(problem.outside());
    } else {
        for (std::size_t x = 0; x < problem.num_allocations(); ++x) out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

template <class T>
struct Data {
    std::vector<std::vector<T>> v;  // v[x][k]
    std::vector<T> mu, lambda;
};

// A uniform payment cut changes the objective by sum mu (lambda - 1), so weights whose mean exceeds
// the probability mass (validation allows 1e-12 of slack) are scaled back onto that boundary.
template <class T>
void cap_mean_weight(Data<T>& d) {
    T mean(0), mass(0);
    for (std::size_t k = 0; k < d.mu.size(); ++k) {
        mean += d.mu[k] * d.lambda[k];
        mass += d.mu[k];
    }
    if (mean > mass)
        for (auto& l : d.lambda) l = l * mass / mean;
    if constexpr (std::is_same_v<T, double>) {
        // payment coefficients are rounded individually, so their exact sum decides boundedness
        auto slope = [&] {
            Rational sum(0);
            for (std::size_t k = 0; k < d.mu.size(); ++k) sum += to_rational(d.mu[k] * (1.0 - d.lambda[k]));
            return sum;
        };
        for (int guard = 0; guard < 64 && slope() < 0; ++guard)
            for (auto& l : d.lambda) l = std::nextafter(l, 0.0);
    }
}

Data<double> float_data(const ScreeningProblem& p) {
    Data<double> d{p.allocations.values, p.grid.probabilities, p.grid.welfare_weights};
    cap_mean_weight(d);
    return d;
}

Data<Rational> exact_data(const ScreeningProblem& p) {
    Data<Rational> d;
    for (const auto& row : p.allocations.values) d.v.push_back(to_rational(row));
    d.mu = to_rational(p.grid.probabilities);
    d.lambda = to_rational(p.grid.welfare_weights);
    cap_mean_weight(d);
    return d;
}

template <class T>
struct Num;

template <>
struct Num<double> {
    static bool better(double a, double b) { return a > b + 1e-12 * std::max(1.0, std::abs(b)); }
    static double relax_tolerance() { return 1e-9; }
};

template <>
struct Num<Rational> {
    static bool better(const Rational& a, const Rational& b) { return a > b; }
    static Rational relax_tolerance() { return 0; }
};

double as_double(double d) { return d; }
double as_double(const Rational& r) { return to_double(r); }

template <class T>
T objective(const Data<T>& d, const std::vector<std::vector<T>>& V, const std::vector<T>& p) {
    T s = 0;
    for (std::size_t k = 0; k < p.size(); ++k) s += d.mu[k] * (d.lambda[k] * V[k][k] + (T(1) - d.lambda[k]) * p[k]);
    return s;
}

/// V[k][j]: value to type k of report j's allocation.
template <class T>
std::optional<std::vector<T>> lp_payments(const Data<T>& d, const std::vector<std::vector<T>>& V, IcMode mode) {
    std::size_t n = V.size();
    LinearProgram<T> lp;
    for (std::size_t k = 0; k < n; ++k) lp.add_variable(d.mu[k] * (T(1) - d.lambda[k]), Bound<T>::free());
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<T> a(n, T(0));
        a[k] = 1;
        lp.add_constraint(a, Relation::leq, V[k][k]);
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t last = mode == IcMode::full ? n : k;
        for (std::size_t j = 0; j < last; ++j) {
            if (j == k) continue;
            std::vector<T> a(n, T(0));
            a[k] = 1;
            a[j] = -1;
            lp.add_constraint(a, Relation::leq, V[k][k] - V[k][j]);
        }
    }
    auto s = solve_lp(lp);
    if (s.status == LpStatus::infeasible) return std::nullopt;
    if (s.status == LpStatus::unbounded) throw Error("payment program is unbounded");
    return s.x;
}

/// Componentwise least utilities satisfying IR and the selected IC constraints.
template <class T>
std::optional<std::vector<T>> least_utilities(const std::vector<std::vector<T>>& V, IcMode mode) {
    std::size_t n = V.size();
    std::vector<T> u(n, T(0));
    auto edge_ok = [&](std::size_t j, std::size_t k) { return j != k && (mode == IcMode::full || j < k); };
    for (std::size_t pass = 0; pass < n; ++pass) {
        bool changed = false;
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) {
                if (!edge_ok(j, k)) continue;
                T cand = u[j] + V[k][j] - V[j][j];
                if (cand > u[k]) {
                    u[k] = cand;
                    changed = true;
                }
            }
        if (!changed) return u;
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j)
            if (edge_ok(j, k) && u[j] + V[k][j] - V[j][j] > u[k] + Num<T>::relax_tolerance()) return std::nullopt;
    return u;
}

template <class T>
std::optional<std::vector<T>> best_payments(const Data<T>& d, const std::vector<std::vector<T>>& V, IcMode mode,
                                            bool nonnegative_weights) {
    if (!nonnegative_weights) return lp_payments(d, V, mode);
    auto u = least_utilities(V, mode);
    if (!u) return std::nullopt;
    std::vector<T> p(V.size());
    for (std::size_t k = 0; k < V.size(); ++k) p[k] = V[k][k] - (*u)[k];
    return p;
}

template <class T>
std::vector<std::vector<T>> deterministic_table(const Data<T>& d, const std::vector<std::size_t>& a) {
    std::size_t n = a.size();
    std::vector<std::vector<T>> V(n, std::vector<T>(n));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) V[k][j] = d.v[a[j]][k];
    return V;
}

template <class T>
std::vector<std::vector<T>> lottery_table(const Data<T>& d, const std::vector<std::vector<T>>& w) {
    std::size_t n = w.size();
    std::vector<std::vector<T>> V(n, std::vector<T>(n, T(0)));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t x = 0; x < d.v.size(); ++x)
                if (w[j][x] != T(0)) V[k][j] += w[j][x] * d.v[x][k];
    return V;
}

std::vector<double> to_doubles(const std::vector<double>& v) { return v; }
std::vector<double> to_doubles(const std::vector<Rational>& v) {
    std::vector<double> out;
    for (const auto& r : v) out.push_back(to_double(r));
    return out;
}

void require_types(const ScreeningProblem& p, std::size_t rows) {
    if (rows != p.num_types()) throw DimensionError("allocation rule has " + std::to_string(rows) + " rows, problem has " +
                                                    std::to_string(p.num_types()) + " types");
}

template <class T>
std::optional<SolveResult> payment_lp_impl(const ScreeningProblem& problem, const Data<T>& d,
                                           const std::vector<std::vector<T>>& V, Mechanism mechanism, IcMode mode,
                                           bool exact) {
    auto p = lp_payments(d, V, mode);
    if (!p) return std::nullopt;
    SolveResult r;
    r.program = {mode, std::holds_alternative<DeterministicMechanism>(mechanism) ? Space::deterministic : Space::stochastic,
                 {}, exact};
    std::visit([&](auto& m) { m.payments = to_doubles(*p); }, mechanism);
    r.mechanism = std::move(mechanism);
    if constexpr (std::is_same_v<T, Rational>) {
        r.exact_value = objective(d, V, *p);
        r.value = to_double(*r.exact_value);
    } else {
        r.value = std::visit([&](const auto& m) { return objective_value(problem, m); }, r.mechanism);
    }
    return r;
}

}  // namespace

std::optional<SolveResult> payment_lp(const ScreeningProblem& problem, const std::vector<std::size_t>& assignment,
                                      IcMode mode, SolveOptions options) {
    require_types(problem, assignment.size());
    for (std::size_t x : assignment)
        if (x >= problem.num_allocations()) throw DimensionError("assignment refers to allocation " + std::to_string(x));
    DeterministicMechanism m{assignment, {}};
    if (options.exact) {
        auto d = exact_data(problem);
        return payment_lp_impl(problem, d, deterministic_table(d, assignment), m, mode, true);
    }
    auto d = float_data(problem);
    return payment_lp_impl(problem, d, deterministic_table(d, assignment), m, mode, false);
}

std::optional<SolveResult> payment_lp(const ScreeningProblem& problem,
                                      const std::vector<std::vector<double>>& lotteries, IcMode mode,
                                      SolveOptions options) {
    require_types(problem, lotteries.size());
    for (const auto& row : lotteries)
        if (row.size() != problem.num_allocations()) throw DimensionError("lottery row length mismatch");
    StochasticMechanism m{lotteries, {}};
    if (options.exact) {
        auto d = exact_data(problem);
        std::vector<std::vector<Rational>> w;
        for (const auto& row : lotteries) w.push_back(to_rational(row));
        return payment_lp_impl(problem, d, lottery_table(d, w), m, mode, true);
    }
    auto d = float_data(problem);
    return payment_lp_impl(problem, d, lottery_table(d, lotteries), m, mode, false);
}

namespace {

template <class T>
SolveResult stochastic_impl(const ScreeningProblem& problem, const Data<T>& d, IcMode mode,
                            const std::vector<std::size_t>& support, bool exact) {
    std::size_t n = problem.num_types(), m = support.size();
    LinearProgram<T> lp;
    auto w = [&](std::size_t k, std::size_t i) { return k * m + i; };
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < m; ++i) lp.add_variable(d.mu[k] * d.lambda[k] * d.v[support[i]][k]);
    std::size_t pay = lp.num_variables();
    for (std::size_t k = 0; k < n; ++k) lp.add_variable(d.mu[k] * (T(1) - d.lambda[k]), Bound<T>::free());
    std::size_t nv = lp.num_variables();

    for (std::size_t k = 0; k < n; ++k) {
        std::vector<T> a(nv, T(0));
        for (std::size_t i = 0; i < m; ++i) a[w(k, i)] = 1;
        lp.add_constraint(a, Relation::eq, T(1));
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<T> a(nv, T(0));
        for (std::size_t i = 0; i < m; ++i) a[w(k, i)] = d.v[support[i]][k];
        a[pay + k] = -1;
        lp.add_constraint(a, Relation::geq, T(0));
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t last = mode == IcMode::full ? n : k;
        for (std::size_t j = 0; j < last; ++j) {
            if (j == k) continue;
            std::vector<T> a(nv, T(0));
            for (std::size_t i = 0; i < m; ++i) {
                a[w(k, i)] += d.v[support[i]][k];
                a[w(j, i)] -= d.v[support[i]][k];
            }
            a[pay + k] = -1;
            a[pay + j] = 1;
            lp.add_constraint(a, Relation::geq, T(0));
        }
    }
    auto s = solve_lp(lp);
    if (s.status != LpStatus::optimal) throw Error("stochastic program is " + to_string(s.status));

    StochasticMechanism mech;
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<double> row(problem.num_allocations(), 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            double v = as_double(s.x[w(k, i)]);
            row[support[i]] = v < 0 && v > -1e-12 ? 0.0 : v;
        }
        mech.lotteries.push_back(std::move(row));
        mech.payments.push_back(as_double(s.x[pay + k]));
    }
    SolveResult r;
    r.program = {mode, Space::stochastic, {}, exact};
    r.mechanism = std::move(mech);
    if constexpr (std::is_same_v<T, Rational>) {
        r.exact_value = s.value;
        r.value = to_double(s.value);
    } else {
        r.value = objective_value(problem, std::get<StochasticMechanism>(r.mechanism));
    }
    return r;
}

template <class T>
SolveResult deterministic_impl(const ScreeningProblem& problem, const Data<T>& d, IcMode mode,
                               const std::vector<std::size_t>& choices, bool exact) {
    std::size_t n = problem.num_types();
    bool nonneg = true;
    for (std::size_t k = 0; k < n; ++k) nonneg = nonneg && d.lambda[k] <= T(1);

    std::vector<std::size_t> digit(n, 0), assignment(n, choices[0]);
    std::optional<T> best;
    std::vector<std::size_t> best_assignment;
    std::vector<T> best_p;
    std::uint64_t count = 0;
    for (;;) {
        for (std::size_t k = 0; k < n; ++k) assignment[k] = choices[digit[k]];
        ++count;
        auto V = deterministic_table(d, assignment);
        if (auto p = best_payments(d, V, mode, nonneg)) {
            T value = objective(d, V, *p);
            if (!best || Num<T>::better(value, *best)) {
                best = value;
                best_assignment = assignment;
                best_p = *p;
            }
        }
        bool done = true;
        for (std::size_t pos = n; pos-- > 0;) {
            if (++digit[pos] < choices.size()) {
                done = false;
                break;
            }
            digit[pos] = 0;
        }
        if (done) break;
    }
    if (!best) throw Error("no implementable assignment");

    SolveResult r;
    r.program = {mode, Space::deterministic, {}, exact};
    DeterministicMechanism mech{best_assignment, to_doubles(best_p)};
    r.mechanism = mech;
    r.assignments = count;
    if constexpr (std::is_same_v<T, Rational>) {
        r.exact_value = *best;
        r.value = to_double(*best);
    } else {
        r.value = objective_value(problem, mech);
    }
    return r;
}

std::vector<std::size_t> declared_menu(const ScreeningProblem& problem,
                                       const std::optional<std::vector<std::size_t>>& menu) {
    std::vector<std::size_t> out;
    if (!menu) return out;
    for (std::size_t x : menu_with_outside(problem, menu))
        if (x != problem.outside()) out.push_back(x);
    return out;
}

}  // namespace

SolveResult stochastic_lp(const ScreeningProblem& problem, IcMode mode,
                          const std::optional<std::vector<std::size_t>>& menu, SolveOptions options) {
    auto support = menu_with_outside(problem, menu);
    SolveResult r = options.exact ? stochastic_impl(problem, exact_data(problem), mode, support, true)
                                  : stochastic_impl(problem, float_data(problem), mode, support, false);
    r.program.menu = declared_menu(problem, menu);
    return r;
}

SolveResult deterministic_opt(const ScreeningProblem& problem, const std::optional<std::vector<std::size_t>>& menu,
                              SolveOptions options, IcMode mode) {
    auto choices = menu_with_outside(problem, menu);
    std::uint64_t budget = options.budget.value_or(default_budget());
    std::uint64_t total = 1;
    for (std::size_t k = 0; k < problem.num_types(); ++k) {
        if (total > budget / choices.size() + 1) {
            total = std::numeric_limits<std::uint64_t>::max();
            break;
        }
        total *= choices.size();
    }
    if (total > budget)
        throw BudgetExceeded(std::to_string(choices.size()) + "^" + std::to_string(problem.num_types()) +
                             " assignments exceed the enumeration budget of " + std::to_string(budget) +
                             "; restrict the menu or raise the budget");
    SolveResult r = options.exact ? deterministic_impl(problem, exact_data(problem), mode, choices, true)
                                  : deterministic_impl(problem, float_data(problem), mode, choices, false);
    r.program.menu = declared_menu(problem, menu);
    return r;
}

}  // namespace screenfront
