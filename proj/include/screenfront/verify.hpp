#pragma once

#include <optional>
#include <string>
#include <vector>

#include "screenfront/apps.hpp"
#include "screenfront/frontier.hpp"
#include "screenfront/solver.hpp"

namespace screenfront {

inline constexpr double kEqualityTolerance = 1e-7;

struct EqualityCheck {
    std::string name;
    std::string lhs_program;
    std::string rhs_program;
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;        // |lhs - rhs|
    double tolerance = 0.0;  // 0 in exact mode
    std::optional<Rational> exact_lhs, exact_rhs;
    bool passed = false;
    bool informational = false;  // reported but not backed by a theorem
};

struct VerifyOptions {
    bool exact = false;
    std::optional<std::uint64_t> budget;
};

struct VerifyReport {
    std::optional<FrontierCertificate> certificate;
    std::optional<bool> strong;
    bool ordered = false;  // allocations form a chain with strictly increasing differences
    std::vector<EqualityCheck> checks;
    std::vector<std::string> notes;

    bool passed() const;
};

/// Certifies a frontier and compares restricted against unrestricted programs.
VerifyReport verify_problem(const ScreeningProblem& problem, VerifyOptions options = {});

struct ClaimReport {
    bool claimed = false;
    bool certified = false;
    std::optional<FrontierViolation> violation;
    std::vector<EqualityCheck> checks;

    bool passed() const;
};

/// Checks a generator's expected menu against the solver.
ClaimReport verify_claim(const AppInstance& instance, VerifyOptions options = {});

/// True when the non-outside allocations form a surplus chain whose increments, starting
/// from the outside option, are strictly increasing in type.
bool strictly_ordered(const ScreeningProblem& problem);

}  // namespace screenfront
