#include "screenfront/screenfront.h"

#include <cmath>
#include <cstring>
#include <functional>
#include <string>

#include "screenfront/serialize.hpp"

using namespace screenfront;

struct sf_problem {
    AppInstance instance;
    bool has_expected = false;
};

namespace {

thread_local std::string last_error;
thread_local long last_byte = -1;

class Status : public std::runtime_error {
public:
    Status(sf_status code, const std::string& what) : std::runtime_error(what), code(code) {}
    sf_status code;
};

char* copy_out(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void emit(char** out, const json& j) {
    if (out) *out = copy_out(j.dump(2));
}

sf_status guarded(const std::function<sf_status()>& body) {
    last_error.clear();
    last_byte = -1;
    try {
        return body();
    } catch (const Status& e) {
        last_error = e.what();
        return e.code;
    } catch (const ParseError& e) {
        last_error = e.what();
        last_byte = static_cast<long>(e.byte);
        return SF_INPUT_ERROR;
    } catch (const BudgetExceeded& e) {
        last_error = e.what();
        return SF_BUDGET_EXCEEDED;
    } catch (const InputError& e) {
        last_error = e.what();
        return SF_INPUT_ERROR;
    } catch (const DimensionError& e) {
        last_error = e.what();
        return SF_INPUT_ERROR;
    } catch (const PreconditionError& e) {
        last_error = e.what();
        return SF_INPUT_ERROR;
    } catch (const ElasticityUndefined& e) {
        last_error = std::string("elasticity undefined: ") + e.what();
        return SF_INPUT_ERROR;
    } catch (const std::exception& e) {
        last_error = e.what();
        return SF_INTERNAL_ERROR;
    } catch (...) {
        last_error = "unknown error";
        return SF_INTERNAL_ERROR;
    }
}

json options(const char* text) {
    if (!text || !*text) return json::object();
    auto j = parse_json(text);
    if (!j.is_object()) throw InputError("options must be a JSON object");
    return j;
}

const ScreeningProblem& problem_of(const sf_problem* p) {
    if (!p) throw InputError("null problem handle");
    return p->instance.problem;
}

void require_valid(const ScreeningProblem& p) {
    auto r = validate_problem(p);
    if (r.ok()) return;
    std::string msg = "invalid problem:";
    for (const auto& v : r.violations) msg += " " + v.code + " (" + v.message + ");";
    msg.pop_back();
    throw InputError(msg);
}

std::vector<std::size_t> indices(const ScreeningProblem& p, const json& j, const char* what) {
    if (!j.is_array()) throw InputError(std::string(what) + " must be an array of allocation ids");
    std::vector<std::size_t> out;
    for (const auto& v : j) {
        if (!v.is_string()) throw InputError(std::string(what) + " must be an array of allocation ids");
        auto i = p.allocations.index_of(v.get<std::string>());
        if (!i) throw InputError("unknown allocation '" + v.get<std::string>() + "'");
        out.push_back(*i);
    }
    return out;
}

std::optional<std::uint64_t> budget_of(const json& o) {
    if (!o.contains("budget")) return std::nullopt;
    const auto& b = o.at("budget");
    if (!b.is_number_unsigned() && !(b.is_number_integer() && b.get<long long>() >= 0))
        throw InputError("budget must be a nonnegative integer");
    return b.get<std::uint64_t>();
}

bool flag(const json& o, const char* key) {
    if (!o.contains(key)) return false;
    if (!o.at(key).is_boolean()) throw InputError(std::string(key) + " must be a boolean");
    return o.at(key).get<bool>();
}

json table(const ScreeningProblem& p, const Mechanism& m) {
    json rows = json::array();
    auto sm = std::holds_alternative<StochasticMechanism>(m)
                  ? std::get<StochasticMechanism>(m)
                  : StochasticMechanism::from(std::get<DeterministicMechanism>(m), p.num_allocations());
    for (std::size_t k = 0; k < p.num_types(); ++k) {
        json alloc;
        if (const auto* d = std::get_if<DeterministicMechanism>(&m)) {
            alloc = p.allocations.ids[d->assignment[k]];
        } else {
            alloc = json::object();
            for (std::size_t x = 0; x < p.num_allocations(); ++x)
                if (sm.lotteries[k][x] > 1e-12) alloc[p.allocations.ids[x]] = sm.lotteries[k][x];
        }
        rows.push_back({{"type", k},
                        {"t", p.grid.types[k]},
                        {"allocation", alloc},
                        {"payment", sm.payments[k]},
                        {"utility", deviation_utility(p, sm, k, k)}});
    }
    return rows;
}

}  // namespace

extern "C" {

const char* sf_version(void) { return "0.1.0"; }

const char* sf_status_name(sf_status status) {
    switch (status) {
        case SF_OK: return "ok";
        case SF_INPUT_ERROR: return "input-error";
        case SF_INFEASIBLE: return "infeasible";
        case SF_BUDGET_EXCEEDED: return "budget-exceeded";
        case SF_NO_CERTIFICATE: return "no-certificate";
        case SF_CHECK_FAILED: return "check-failed";
        case SF_INTERNAL_ERROR: return "internal-error";
    }
    return "unknown";
}

const char* sf_last_error(void) { return last_error.c_str(); }

long sf_last_error_byte(void) { return last_byte; }

void sf_string_free(char* s) { std::free(s); }

sf_status sf_problem_from_json(const char* text, sf_problem** out) {
    return guarded([&] {
        if (!text || !out) throw InputError("null argument");
        *out = nullptr;
        auto j = parse_json(text);
        auto p = std::make_unique<sf_problem>();
        p->instance = app_instance_from_json(j);
        p->has_expected = j.contains("expected");
        *out = p.release();
        return SF_OK;
    });
}

sf_status sf_problem_load(const char* path, sf_problem** out) {
    return guarded([&] {
        if (!path || !out) throw InputError("null argument");
        *out = nullptr;
        auto text = read_file(path);
        sf_status s = sf_problem_from_json(text.c_str(), out);
        if (s != SF_OK) throw Status(s, std::string(path) + ": " + last_error);
        return SF_OK;
    });
}

void sf_problem_free(sf_problem* problem) { delete problem; }

size_t sf_problem_num_types(const sf_problem* problem) { return problem ? problem->instance.problem.num_types() : 0; }

size_t sf_problem_num_allocations(const sf_problem* problem) {
    return problem ? problem->instance.problem.num_allocations() : 0;
}

sf_status sf_validate(const sf_problem* problem, char** out_json) {
    return guarded([&] {
        auto r = validate_problem(problem_of(problem));
        emit(out_json, to_json(r));
        if (r.ok()) return SF_OK;
        last_error = "problem violates " + std::to_string(r.violations.size()) + " invariant(s)";
        return SF_INPUT_ERROR;
    });
}

sf_status sf_frontier(const sf_problem* problem, const char* options_json, char** out_json) {
    return guarded([&] {
        const auto& p = problem_of(problem);
        require_valid(p);
        auto o = options(options_json);
        bool want_strong = flag(o, "strong");
        bool generalized = flag(o, "generalized");
        std::optional<std::vector<std::size_t>> order;
        if (o.contains("order")) order = indices(p, o.at("order"), "order");

        json r{{"certificate", nullptr}, {"strong", nullptr}, {"violation", nullptr}};
        std::optional<FrontierCertificate> cert;
        if (generalized) {
            if (!order) {
                auto c = surplus_chain(p, [&] {
                    std::vector<std::size_t> all;
                    for (std::size_t x = 0; x < p.num_allocations(); ++x)
                        if (x != p.outside()) all.push_back(x);
                    return all;
                }());
                if (!c) throw InputError("generalized check needs an order when allocations are not a surplus chain");
                order = *c;
            }
            auto chk = check_generalized(p, *order);
            cert = chk.certificate;
            if (chk.violation) r["violation"] = to_json(p, *chk.violation);
        } else if (order) {
            auto chk = check_frontier(p, *order);
            cert = chk.certificate;
            if (chk.violation) r["violation"] = to_json(p, *chk.violation);
        } else {
            cert = detect_frontier(p);
            if (!cert)
                r["violation"] = {{"code", "no_frontier"},
                                  {"message", "no subset of the allocations is a surplus-elasticity frontier"},
                                  {"allocations", json::array()},
                                  {"type", nullptr}};
        }
        if (!cert) {
            emit(out_json, r);
            last_error = r["violation"].value("message", std::string("no certificate"));
            return SF_NO_CERTIFICATE;
        }
        r["certificate"] = to_json(p, *cert);
        if (cert->kind != FrontierKind::generalized) {
            auto s = check_strong(p, *cert);
            r["strong"] = s.strong;
            if (s.violation) r["strong_violation"] = to_json(p, *s.violation);
            if (want_strong && !s.strong) {
                r["violation"] = r["strong_violation"];
                emit(out_json, r);
                last_error = "frontier is not strong";
                return SF_NO_CERTIFICATE;
            }
        } else if (want_strong) {
            throw InputError("strong and generalized checks are exclusive");
        }
        emit(out_json, r);
        return SF_OK;
    });
}

sf_status sf_solve(const sf_problem* problem, const char* options_json, char** out_json) {
    return guarded([&] {
        const auto& p = problem_of(problem);
        require_valid(p);
        auto o = options(options_json);
        for (const auto& [k, v] : o.items())
            if (k != "space" && k != "ic" && k != "menu" && k != "assignment" && k != "exact" && k != "budget")
                throw InputError("unknown solve option '" + k + "'");
        std::string space = o.value("space", std::string("det"));
        if (space == "deterministic") space = "det";
        if (space == "stochastic") space = "stoch";
        if (space != "det" && space != "stoch") throw InputError("space must be det or stoch");
        IcMode mode = ic_mode_from_string(o.value("ic", std::string("full")));
        SolveOptions so{.exact = flag(o, "exact"), .budget = budget_of(o)};
        std::optional<std::vector<std::size_t>> menu;
        if (o.contains("menu")) menu = indices(p, o.at("menu"), "menu");

        std::optional<SolveResult> res;
        if (o.contains("assignment")) {
            if (space != "det" || menu) throw InputError("a fixed assignment excludes --space stoch and --menu");
            auto a = indices(p, o.at("assignment"), "assignment");
            if (a.size() != p.num_types()) throw InputError("assignment needs one allocation per type");
            res = payment_lp(p, a, mode, so);
            if (!res) throw Status(SF_INFEASIBLE, "assignment is not implementable");
        } else if (space == "det") {
            res = deterministic_opt(p, menu, so, mode);
        } else {
            res = stochastic_lp(p, mode, menu, so);
        }
        json r = to_json(p, *res);
        r["table"] = table(p, res->mechanism);
        emit(out_json, r);
        return SF_OK;
    });
}

sf_status sf_verify(const sf_problem* problem, const char* options_json, char** out_json) {
    return guarded([&] {
        const auto& p = problem_of(problem);
        require_valid(p);
        auto o = options(options_json);
        VerifyOptions vo{.exact = flag(o, "exact"), .budget = budget_of(o)};
        auto v = verify_problem(p, vo);
        json r{{"verify", to_json(p, v)}};
        bool ok = v.passed();
        if (problem->has_expected) {
            auto c = verify_claim(problem->instance, vo);
            r["claim"] = to_json(p, c);
            r["claim"]["expected"] = to_json(problem->instance.expected);
            ok = ok && c.passed();
        }
        r["passed"] = ok;
        emit(out_json, r);
        if (ok) return SF_OK;
        last_error = "a verification check failed";
        return SF_CHECK_FAILED;
    });
}

sf_status sf_reconstruct(const sf_problem* problem, const char* mechanism_json, char** out_json) {
    return guarded([&] {
        const auto& p = problem_of(problem);
        require_valid(p);
        if (!mechanism_json) throw InputError("null mechanism");
        auto m = mechanism_from_json(p, parse_json(mechanism_json));
        const auto* d = std::get_if<DeterministicMechanism>(&m);
        if (!d) throw InputError("reconstruction needs a deterministic mechanism");
        auto cert = detect_frontier(p);
        if (!cert) throw Status(SF_NO_CERTIFICATE, "no surplus-elasticity frontier to reconstruct onto");
        auto rec = reconstruct(p, *cert, *d);

        auto before = StochasticMechanism::from(*d, p.num_allocations());
        double drift = 0.0;
        for (std::size_t k = 0; k < p.num_types(); ++k)
            drift = std::max(drift, std::abs(deviation_utility(p, before, k, k) -
                                             deviation_utility(p, rec.mechanism, k, k)));
        auto ic = check_ic_ir(p, rec.mechanism, IcMode::downward);
        json r = to_json(p, rec);
        r["certificate"] = to_json(p, *cert);
        r["table"] = table(p, rec.mechanism);
        r["payoff_drift"] = drift;
        r["payoff_tolerance"] = 1e-12;
        r["downward_ic"] = to_json(p, ic);
        r["objective_before"] = objective_value(p, *d);
        r["objective_after"] = objective_value(p, rec.mechanism);
        bool ok = drift <= 1e-12 && ic.holds();
        r["passed"] = ok;
        emit(out_json, r);
        if (ok) return SF_OK;
        last_error = "reconstructed mechanism fails a downward constraint or moves a payoff";
        return SF_CHECK_FAILED;
    });
}

sf_status sf_generate(const char* app, const char* params_json, char** out_json) {
    return guarded([&] {
        if (!app) throw InputError("null application name");
        auto a = generate(app, options(params_json));
        emit(out_json, to_json(a));
        return SF_OK;
    });
}

sf_status sf_make_report(const char* command_json, const char* input, size_t input_len, const char* results_json,
                         double timing_ms, char** out_json) {
    return guarded([&] {
        json command = command_json ? parse_json(command_json) : json(nullptr);
        json results = results_json ? parse_json(results_json) : json(nullptr);
        std::string_view in = input ? std::string_view(input, input_len) : std::string_view();
        emit(out_json, make_report(command, in, results, timing_ms));
        return SF_OK;
    });
}

}  // extern "C"
