#pragma once

#include <optional>
#include <string>
#include <vector>

#include "screenfront/model.hpp"

namespace screenfront {

enum class FrontierKind { surplus_elasticity, strong, generalized };

std::string to_string(FrontierKind kind);

/// Order verdicts between two menu elements (lower < upper in the menu order).
struct PairEvidence {
    std::size_t lower;
    std::size_t upper;
    bool surplus_strict;
    bool elasticity_strict;  // upper/lower strictly increasing in t
};

/// Non-member allocation and the menu element that weakly dominates it in both orders.
struct DominanceEvidence {
    std::size_t allocation;
    std::optional<std::size_t> dominated_by;  // empty: dominated by the outside option
};

/// Two-point lottery over adjacent menu elements that makes type k indifferent to x.
struct CoveringEntry {
    std::size_t allocation;
    std::size_t type;
    std::size_t low;   // outside option or a menu element
    std::size_t high;
    double alpha;      // weight on high
};

struct FrontierCertificate {
    std::vector<std::size_t> menu;  // ascending, outside option excluded
    FrontierKind kind = FrontierKind::surplus_elasticity;
    std::vector<PairEvidence> pairs;
    std::vector<DominanceEvidence> dominance;
    std::vector<CoveringEntry> covering;
};

struct FrontierViolation {
    std::string code;
    std::string message;
    std::vector<std::size_t> allocations;
    std::optional<std::size_t> type;
};

struct FrontierCheck {
    std::optional<FrontierCertificate> certificate;
    std::optional<FrontierViolation> violation;

    bool ok() const { return certificate.has_value(); }
};

/// Certifies a candidate as a surplus-elasticity frontier or returns the first violation.
/// Throws InputError for a candidate holding the outside option or duplicates and
/// ElasticityUndefined when a member has a nonpositive value.
FrontierCheck check_frontier(const ScreeningProblem& problem, const std::vector<std::size_t>& candidate);

struct DetectOptions {
    bool exhaustive = false;  // search every subset; at most 12 allocations
};

std::optional<FrontierCertificate> detect_frontier(const ScreeningProblem& problem, DetectOptions options = {});

struct StrongCheck {
    bool strong = false;
    std::optional<FrontierViolation> violation;
};

/// Consecutive increment ratios strictly increasing in t with positive increments.
/// Throws PreconditionError if the certificate is not a frontier certificate.
StrongCheck check_strong(const ScreeningProblem& problem, const FrontierCertificate& certificate);

/// Covering tolerance for single-crossing comparisons of lotteries.
inline constexpr double kCoveringTolerance = 1e-9;

/// Certifies an ordered menu as a generalized frontier through two-point covering lotteries.
FrontierCheck check_generalized(const ScreeningProblem& problem, const std::vector<std::size_t>& ordered_menu);

/// Menu sorted ascending along the strict surplus order, or empty if it is not a chain.
std::optional<std::vector<std::size_t>> surplus_chain(const ScreeningProblem& problem, std::vector<std::size_t> menu);

}  // namespace screenfront
