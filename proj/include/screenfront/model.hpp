#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace screenfront {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (bad file, unknown id, bad parameter).
class InputError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// An operation was called on data that does not meet its stated precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

class BudgetExceeded : public Error {
public:
    using Error::Error;
};

/// A ratio comparison touched a nonpositive value.
class ElasticityUndefined : public Error {
public:
    using Error::Error;
};

/// Absolute tolerance for IC/IR constraint checks.
inline constexpr double kConstraintTolerance = 1e-9;
/// Tolerance for asserting equality of two optimal LP values.
inline constexpr double kValueTolerance = 1e-7;

struct TypeGrid {
    std::vector<double> types;          // strictly increasing
    std::vector<double> probabilities;  // positive, sums to one
    std::vector<double> welfare_weights;

    std::size_t size() const { return types.size(); }

    /// Mass of types at or above index k.
    double upper_mass(std::size_t k) const;
    /// Sum of mu_k * lambda_k.
    double mean_welfare_weight() const;

    static TypeGrid uniform(std::vector<double> types, double welfare_weight = 0.0);
};

struct AllocationSet {
    std::vector<std::string> ids;
    std::size_t outside_index = 0;
    std::vector<std::vector<double>> values;  // values[x][k]

    std::size_t size() const { return ids.size(); }
    std::optional<std::size_t> index_of(std::string_view id) const;
    /// Resolves an id or throws InputError.
    std::size_t require(std::string_view id) const;
};

struct ScreeningProblem {
    TypeGrid grid;
    AllocationSet allocations;
    nlohmann::json metadata = nlohmann::json::object();

    std::size_t num_types() const { return grid.size(); }
    std::size_t num_allocations() const { return allocations.size(); }
    std::size_t outside() const { return allocations.outside_index; }
    double value(std::size_t x, std::size_t k) const { return allocations.values[x][k]; }
    std::span<const double> row(std::size_t x) const { return allocations.values[x]; }
    /// Expected value of a lottery over allocations for type k.
    double lottery_value(std::span<const double> lottery, std::size_t k) const;
    /// True when every entry of row x is strictly positive.
    bool row_positive(std::size_t x) const;
};

/// Builds a problem from rows; the outside option is inserted as "empty" at index 0
/// unless one of the supplied rows is already named `outside_id`.
ScreeningProblem make_problem(TypeGrid grid, std::vector<std::string> ids,
                              std::vector<std::vector<double>> values,
                              std::string outside_id = "empty");

struct DeterministicMechanism {
    std::vector<std::size_t> assignment;
    std::vector<double> payments;
};

struct StochasticMechanism {
    std::vector<std::vector<double>> lotteries;  // lotteries[k][x]
    std::vector<double> payments;

    static StochasticMechanism from(const DeterministicMechanism& m, std::size_t num_allocations);
};

struct Violation {
    std::string code;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

ValidationReport validate_problem(const ScreeningProblem& problem);

/// sum_k mu_k (lambda_k (v(x(t_k), t_k) - p_k) + p_k)
double objective_value(const ScreeningProblem& problem, const DeterministicMechanism& m);
double objective_value(const ScreeningProblem& problem, const StochasticMechanism& m);

enum class IcMode { full, downward };

struct ConstraintViolation {
    enum class Kind { ir, ic } kind;
    std::size_t type;                     // the type whose constraint fails
    std::optional<std::size_t> deviation; // reported type, for IC
    double slack;                         // negative when violated
};

struct IcReport {
    std::vector<ConstraintViolation> violations;
    bool holds() const { return violations.empty(); }
};

IcReport check_ic_ir(const ScreeningProblem& problem, const DeterministicMechanism& m,
                     IcMode mode, double tolerance = kConstraintTolerance);
IcReport check_ic_ir(const ScreeningProblem& problem, const StochasticMechanism& m,
                     IcMode mode, double tolerance = kConstraintTolerance);

/// Utility of type k when reporting j and facing (lotteries, payments).
double deviation_utility(const ScreeningProblem& problem, const StochasticMechanism& m,
                         std::size_t k, std::size_t j);

std::string to_string(IcMode mode);
IcMode ic_mode_from_string(std::string_view s);

}  // namespace screenfront
