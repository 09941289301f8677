#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "screenfront/rational.hpp"

namespace screenfront {

enum class Relation { leq, eq, geq };

template <class T>
struct Constraint {
    std::vector<T> coefficients;
    Relation relation = Relation::leq;
    T rhs{};
};

template <class T>
struct Bound {
    std::optional<T> lower = T(0);
    std::optional<T> upper;

    static Bound free() { return {std::nullopt, std::nullopt}; }
};

/// maximize objective . x subject to constraints and bounds
template <class T>
struct LinearProgram {
    std::vector<T> objective;
    std::vector<Constraint<T>> constraints;
    std::vector<Bound<T>> bounds;

    std::size_t num_variables() const { return objective.size(); }
    std::size_t add_variable(T cost, Bound<T> bound = {}) {
        objective.push_back(std::move(cost));
        bounds.push_back(std::move(bound));
        for (auto& c : constraints) c.coefficients.resize(objective.size());
        return objective.size() - 1;
    }
    void add_constraint(std::vector<T> coefficients, Relation relation, T rhs) {
        coefficients.resize(objective.size());
        constraints.push_back({std::move(coefficients), relation, std::move(rhs)});
    }
};

enum class LpStatus { optimal, infeasible, unbounded };

template <class T>
struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    std::vector<T> x;
    T value{};
    /// Multipliers of the original constraints (nonnegative for <=, nonpositive for >=).
    std::vector<T> dual;
    std::size_t pivots = 0;
};

/// Two-phase dense primal simplex with Bland's rule. Throws DimensionError on malformed input.
template <class T>
LpSolution<T> solve_lp(const LinearProgram<T>& lp);

extern template LpSolution<double> solve_lp(const LinearProgram<double>&);
extern template LpSolution<Rational> solve_lp(const LinearProgram<Rational>&);

LinearProgram<Rational> to_rational(const LinearProgram<double>& lp);

std::string to_string(LpStatus s);

}  // namespace screenfront
