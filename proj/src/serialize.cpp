#include "screenfront/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace screenfront {

namespace {

const json& need(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
    return j.at(key);
}

std::vector<double> numbers(const json& j, const std::string& what) {
    if (!j.is_array()) throw InputError(what + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw InputError(what + " must be an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<std::string> strings(const json& j, const std::string& what) {
    if (!j.is_array()) throw InputError(what + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& v : j) {
        if (!v.is_string()) throw InputError(what + " must be an array of strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

std::vector<std::string> ids(const ScreeningProblem& p, const std::vector<std::size_t>& idx) {
    std::vector<std::string> out;
    for (std::size_t i : idx) out.push_back(p.allocations.ids.at(i));
    return out;
}

const std::string& id(const ScreeningProblem& p, std::size_t i) { return p.allocations.ids.at(i); }

json program_json(const ScreeningProblem& p, const ProgramDescriptor& d) {
    return {{"ic", to_string(d.ic_mode)},
            {"space", to_string(d.space)},
            {"menu", d.menu.empty() ? json("all") : json(ids(p, d.menu))},
            {"exact", d.exact}};
}

FrontierKind kind_from_string(const std::string& s) {
    for (auto k : {FrontierKind::surplus_elasticity, FrontierKind::strong, FrontierKind::generalized})
        if (to_string(k) == s) return k;
    throw InputError("unknown frontier kind '" + s + "'");
}

}  // namespace

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what(), e.byte);
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

json to_json(const ScreeningProblem& p) {
    return {{"types", p.grid.types},
            {"probabilities", p.grid.probabilities},
            {"welfare_weights", p.grid.welfare_weights},
            {"allocations", p.allocations.ids},
            {"outside", id(p, p.outside())},
            {"values", p.allocations.values},
            {"metadata", p.metadata}};
}

ScreeningProblem problem_from_json(const json& j) {
    if (!j.is_object()) throw InputError("problem must be a JSON object");
    static const std::set<std::string> known{"types",   "probabilities", "welfare_weights", "allocations", "outside",
                                             "values", "metadata",      "expected",        "provenance"};
    for (const auto& [k, v] : j.items())
        if (!known.count(k)) throw InputError("unknown field '" + k + "'");
    ScreeningProblem p;
    p.grid.types = numbers(need(j, "types"), "types");
    std::size_t n = p.grid.types.size();
    p.grid.probabilities = j.contains("probabilities") ? numbers(j.at("probabilities"), "probabilities")
                                                       : TypeGrid::uniform(p.grid.types).probabilities;
    p.grid.welfare_weights = j.contains("welfare_weights") ? numbers(j.at("welfare_weights"), "welfare_weights")
                                                           : std::vector<double>(n, 0.0);
    p.allocations.ids = strings(need(j, "allocations"), "allocations");
    const auto& values = need(j, "values");
    if (!values.is_array()) throw InputError("values must be an array of rows");
    for (const auto& row : values) p.allocations.values.push_back(numbers(row, "value row"));
    if (!need(j, "outside").is_string()) throw InputError("outside must be an allocation id");
    auto outside = p.allocations.index_of(j.at("outside").get<std::string>());
    if (!outside) throw InputError("outside option '" + j.at("outside").get<std::string>() + "' is not an allocation");
    p.allocations.outside_index = *outside;
    if (j.contains("metadata")) {
        if (!j.at("metadata").is_object()) throw InputError("metadata must be an object");
        p.metadata = j.at("metadata");
    }
    return p;
}

ScreeningProblem load_problem(const std::string& path) { return problem_from_json(parse_json(read_file(path))); }

json to_json(const ScreeningProblem& p, const DeterministicMechanism& m) {
    return {{"kind", "deterministic"}, {"assignment", ids(p, m.assignment)}, {"payments", m.payments}};
}

json to_json(const ScreeningProblem& p, const StochasticMechanism& m) {
    return {{"kind", "stochastic"}, {"allocations", p.allocations.ids}, {"lotteries", m.lotteries},
            {"payments", m.payments}};
}

json to_json(const ScreeningProblem& p, const Mechanism& m) {
    return std::visit([&](const auto& x) { return to_json(p, x); }, m);
}

Mechanism mechanism_from_json(const ScreeningProblem& p, const json& j) {
    if (j.is_object() && j.contains("mechanism")) return mechanism_from_json(p, j.at("mechanism"));
    if (!j.is_object()) throw InputError("mechanism must be a JSON object");
    auto payments = numbers(need(j, "payments"), "payments");
    if (payments.size() != p.num_types()) throw DimensionError("payments need one entry per type");
    if (j.contains("assignment")) {
        DeterministicMechanism m;
        for (const auto& a : strings(j.at("assignment"), "assignment")) m.assignment.push_back(p.allocations.require(a));
        if (m.assignment.size() != p.num_types()) throw DimensionError("assignment needs one entry per type");
        m.payments = payments;
        return m;
    }
    StochasticMechanism m;
    const auto& rows = need(j, "lotteries");
    if (!rows.is_array()) throw InputError("lotteries must be an array of rows");
    for (const auto& r : rows) {
        m.lotteries.push_back(numbers(r, "lottery row"));
        if (m.lotteries.back().size() != p.num_allocations()) throw DimensionError("lottery row length mismatch");
    }
    if (m.lotteries.size() != p.num_types()) throw DimensionError("lotteries need one row per type");
    m.payments = payments;
    return m;
}

json to_json(const ScreeningProblem& p, const SolveResult& r) {
    json j{{"mechanism", to_json(p, r.mechanism)}, {"value", r.value}, {"program", program_json(p, r.program)}};
    if (r.exact_value && r.program.exact) j["exact_value"] = to_string(*r.exact_value);
    if (r.program.space == Space::deterministic) j["assignments_enumerated"] = r.assignments;
    return j;
}

json to_json(const ScreeningProblem& p, const FrontierCertificate& c) {
    json pairs = json::array(), dominance = json::array(), covering = json::array();
    for (const auto& e : c.pairs)
        pairs.push_back({{"lower", id(p, e.lower)},
                         {"upper", id(p, e.upper)},
                         {"surplus_strict", e.surplus_strict},
                         {"elasticity_strict", e.elasticity_strict}});
    for (const auto& e : c.dominance)
        dominance.push_back({{"allocation", id(p, e.allocation)},
                             {"dominated_by", e.dominated_by ? id(p, *e.dominated_by) : id(p, p.outside())}});
    for (const auto& e : c.covering)
        covering.push_back({{"allocation", id(p, e.allocation)},
                            {"type", e.type},
                            {"low", id(p, e.low)},
                            {"high", id(p, e.high)},
                            {"alpha", e.alpha}});
    json j{{"menu", ids(p, c.menu)}, {"kind", to_string(c.kind)}, {"pairs", pairs}};
    if (c.kind == FrontierKind::generalized)
        j["covering"] = covering;
    else
        j["dominance"] = dominance;
    return j;
}

json to_json(const ScreeningProblem& p, const FrontierViolation& v) {
    return {{"code", v.code},
            {"message", v.message},
            {"allocations", ids(p, v.allocations)},
            {"type", v.type ? json(*v.type) : json(nullptr)}};
}

json to_json(const ValidationReport& r) {
    json v = json::array();
    for (const auto& x : r.violations) v.push_back({{"code", x.code}, {"message", x.message}});
    return {{"ok", r.ok()}, {"violations", v}};
}

json to_json(const ScreeningProblem&, const IcReport& r) {
    json v = json::array();
    for (const auto& x : r.violations)
        v.push_back({{"kind", x.kind == ConstraintViolation::Kind::ir ? "ir" : "ic"},
                     {"type", x.type},
                     {"deviation", x.deviation ? json(*x.deviation) : json(nullptr)},
                     {"slack", x.slack}});
    return {{"holds", r.holds()}, {"violations", v}};
}

json to_json(const DemandCurve& c) {
    json j = json::array();
    for (std::size_t i = 0; i < c.size(); ++i) j.push_back({c.quantiles[i], c.prices[i]});
    return j;
}

json to_json(const EqualityCheck& c) {
    json j{{"name", c.name},
           {"lhs_program", c.lhs_program},
           {"rhs_program", c.rhs_program},
           {"lhs", c.lhs},
           {"rhs", c.rhs},
           {"gap", c.gap},
           {"tolerance", c.tolerance},
           {"passed", c.passed},
           {"informational", c.informational}};
    if (c.exact_lhs) j["exact_lhs"] = to_string(*c.exact_lhs);
    if (c.exact_rhs) j["exact_rhs"] = to_string(*c.exact_rhs);
    return j;
}

json to_json(const ScreeningProblem& p, const VerifyReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    return {{"certificate", r.certificate ? to_json(p, *r.certificate) : json(nullptr)},
            {"strong", r.strong ? json(*r.strong) : json(nullptr)},
            {"ordered", r.ordered},
            {"checks", checks},
            {"notes", r.notes},
            {"passed", r.passed()}};
}

json to_json(const ScreeningProblem& p, const ClaimReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    return {{"claimed", r.claimed},
            {"certified", r.certified},
            {"violation", r.violation ? to_json(p, *r.violation) : json(nullptr)},
            {"checks", checks},
            {"passed", r.passed()}};
}

json to_json(const ScreeningProblem& p, const Reconstruction& r) {
    json trace = json::array();
    for (const auto& s : r.trace)
        trace.push_back({{"type", s.type}, {"low", id(p, s.low)}, {"high", id(p, s.high)}, {"alpha", s.alpha}});
    return {{"mechanism", to_json(p, r.mechanism)}, {"trace", trace}};
}

json to_json(const ScreeningProblem& p, const Purification& r) {
    return {{"mechanism", to_json(p, r.mechanism)},
            {"breakpoints", r.breakpoints},
            {"interval_values", r.interval_values},
            {"chosen", r.chosen}};
}

json to_json(const ScreeningProblem& p, const UpgradePricing& r) {
    return {{"menu", ids(p, r.menu)},
            {"increment_prices", r.increment_prices},
            {"menu_prices", r.menu_prices},
            {"monopoly_types", r.monopoly_types},
            {"mechanism", to_json(p, r.mechanism)},
            {"revenue", r.revenue}};
}

json to_json(const ExpectedClaim& c) {
    return {{"menu", c.holds() ? json(c.menu) : json("none")},
            {"kind", c.kind ? json(to_string(*c.kind)) : json(nullptr)},
            {"statement", c.statement},
            {"alternatives", c.alternatives}};
}

ExpectedClaim claim_from_json(const json& j) {
    ExpectedClaim c;
    if (!j.is_object()) throw InputError("expected block must be an object");
    if (j.contains("menu") && j.at("menu").is_array()) c.menu = strings(j.at("menu"), "expected menu");
    if (j.contains("kind") && j.at("kind").is_string()) c.kind = kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("statement") && j.at("statement").is_string()) c.statement = j.at("statement").get<std::string>();
    if (j.contains("alternatives"))
        for (const auto& a : j.at("alternatives")) c.alternatives.push_back(strings(a, "alternative menu"));
    return c;
}

json to_json(const AppInstance& a) {
    json j = to_json(a.problem);
    j["expected"] = to_json(a.expected);
    j["provenance"] = a.provenance;
    return j;
}

AppInstance app_instance_from_json(const json& j) {
    AppInstance a;
    a.problem = problem_from_json(j);
    if (j.contains("expected")) a.expected = claim_from_json(j.at("expected"));
    if (j.contains("provenance")) a.provenance = j.at("provenance");
    return a;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string digest(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    return std::string("fnv1a64:") + buf;
}

json make_report(const json& command, std::string_view input, const json& results, double timing_ms) {
    return {{"schema", kReportSchema},
            {"command", command},
            {"input_digest", digest(input)},
            {"results", results},
            {"timing_ms", timing_ms}};
}

}  // namespace screenfront
