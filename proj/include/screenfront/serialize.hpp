#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "screenfront/apps.hpp"
#include "screenfront/demand.hpp"
#include "screenfront/frontier.hpp"
#include "screenfront/model.hpp"
#include "screenfront/solver.hpp"
#include "screenfront/transforms.hpp"
#include "screenfront/verify.hpp"

namespace screenfront {

using json = nlohmann::json;

inline constexpr const char* kReportSchema = "screenfront.report/1";

/// Malformed JSON text; `byte` is the offset reported by the parser.
class ParseError : public InputError {
public:
    ParseError(const std::string& what, std::size_t byte) : InputError(what), byte(byte) {}
    std::size_t byte;
};

json parse_json(std::string_view text);
std::string read_file(const std::string& path);

json to_json(const ScreeningProblem& problem);
/// Structural decoding only; call validate_problem for the model invariants.
/// Accepts the extra top-level keys "expected" and "provenance" written by generators.
ScreeningProblem problem_from_json(const json& j);
ScreeningProblem load_problem(const std::string& path);

json to_json(const ScreeningProblem& problem, const DeterministicMechanism& m);
json to_json(const ScreeningProblem& problem, const StochasticMechanism& m);
json to_json(const ScreeningProblem& problem, const Mechanism& m);
/// Reads {"assignment": [ids], "payments": [...]} or {"lotteries": [[...]], "payments": [...]},
/// optionally wrapped in a solve result under "mechanism".
Mechanism mechanism_from_json(const ScreeningProblem& problem, const json& j);

json to_json(const ScreeningProblem& problem, const SolveResult& r);
json to_json(const ScreeningProblem& problem, const FrontierCertificate& c);
json to_json(const ScreeningProblem& problem, const FrontierViolation& v);
json to_json(const ValidationReport& r);
json to_json(const ScreeningProblem& problem, const IcReport& r);
json to_json(const DemandCurve& c);

json to_json(const EqualityCheck& c);
json to_json(const ScreeningProblem& problem, const VerifyReport& r);
json to_json(const ScreeningProblem& problem, const ClaimReport& r);

json to_json(const ScreeningProblem& problem, const Reconstruction& r);
json to_json(const ScreeningProblem& problem, const Purification& r);
json to_json(const ScreeningProblem& problem, const UpgradePricing& r);

json to_json(const ExpectedClaim& c);
ExpectedClaim claim_from_json(const json& j);
/// Problem JSON plus "expected" and "provenance" blocks.
json to_json(const AppInstance& a);
AppInstance app_instance_from_json(const json& j);

std::uint64_t fnv1a64(std::string_view bytes);
std::string digest(std::string_view bytes);

/// Versioned report envelope around command results.
json make_report(const json& command, std::string_view input, const json& results, double timing_ms);

}  // namespace screenfront
