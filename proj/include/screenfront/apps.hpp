#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "screenfront/frontier.hpp"
#include "screenfront/model.hpp"

namespace screenfront {

struct ExpectedClaim {
    std::vector<std::string> menu;  // ascending; empty when the generator makes no claim
    std::optional<FrontierKind> kind;
    std::string statement;
    std::vector<std::vector<std::string>> alternatives;  // other menus claimed equally good
    bool holds() const { return !menu.empty(); }
};

struct AppInstance {
    ScreeningProblem problem;
    ExpectedClaim expected;
    nlohmann::json provenance;
};

/// Outside option plus every (alpha, beta) with v = (alpha + t)^beta.
AppInstance gen_product_mix(TypeGrid grid, const std::vector<double>& alpha, const std::vector<double>& beta);

/// values[b - 1] is the row of the bundle with bit mask b. `nested` lists bundle masks from
/// small to large; it defaults to the grand bundle alone.
AppInstance gen_bundles(std::size_t goods, TypeGrid grid, const std::vector<std::vector<double>>& values,
                        std::vector<unsigned> nested = {});
/// v(b, t) = |b| t
std::vector<std::vector<double>> additive_bundle_values(std::size_t goods, const std::vector<double>& types);

using Disutility = std::function<double(double labor, double ordeal, double type)>;
/// "falling": l^2/(2t) + y/t, "rising": l^2/(2t) + y t
Disutility ordeal_disutility(const std::string& name);
/// Rows with value decreasing in type are dropped and listed in the provenance.
AppInstance gen_ordeal(TypeGrid grid, const std::vector<double>& labor, const std::vector<double>& ordeal,
                       const Disutility& psi, const std::string& psi_name = "custom");
/// Nonincreasing weights proportional to n - k with mean exactly one.
std::vector<double> normalized_redistributive_weights(const TypeGrid& grid);

using QuantileModel = std::function<double(double eps, std::size_t type_index)>;
/// log theta = t + sigma(t) eps
QuantileModel log_linear_model(std::vector<double> types, std::vector<double> sigma);
AppInstance gen_sequential(TypeGrid grid, const std::vector<double>& eps, const QuantileModel& theta);

enum class InfoFamily { linear, concave, convex };
InfoFamily info_family_from_string(const std::string& s);
std::string to_string(InfoFamily f);
AppInstance gen_info(std::size_t states, TypeGrid grid, InfoFamily family,
                     std::vector<double> alpha = {0.25, 0.5, 0.75, 1.0}, bool distractors = true);

using Kernel = std::function<double(double, double)>;
/// cost[i][k] = c(theta_i, t_k); S = theta - c. Welfare weights are set to alpha.
AppInstance gen_regulation(const std::vector<double>& theta, std::vector<double> weights, TypeGrid grid,
                           const std::vector<std::vector<double>>& cost, double alpha, bool distractors = true);

/// "exp": e^{st}, "exp-decreasing": e^{-st} e^{2t}, "separable": (1 + s) t
Kernel contract_kernel(const std::string& name);
AppInstance gen_contracts(const std::vector<double>& s, TypeGrid grid, const Kernel& kernel,
                          std::vector<double> weights, std::size_t distractors = 2, std::uint64_t seed = 1);

std::vector<std::string> app_names();
/// Builds an instance from CLI-style parameters; unknown keys are rejected.
AppInstance generate(const std::string& app, const nlohmann::json& params);

}  // namespace screenfront
