#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "screenfront/screenfront.h"

using nlohmann::json;

namespace {

struct Owned {
    char* s = nullptr;
    ~Owned() { sf_string_free(s); }
    json parse() const { return s ? json::parse(s) : json(nullptr); }
};

struct ProblemHandle {
    sf_problem* p = nullptr;
    ~ProblemHandle() { sf_problem_free(p); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return {};
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

// Commas inside (), [] or {} belong to the id.
std::vector<std::string> split_ids(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(' || c == '[' || c == '{') ++depth;
        if (c == ')' || c == ']' || c == '}') --depth;
        if (c == ',' && depth == 0) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

json number_list(const std::string& s) {
    json a = json::array();
    for (const auto& tok : split(s, ',')) {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        a.push_back(v);
    }
    return a.size() == 1 ? a[0] : a;
}

class Runner {
public:
    Runner(std::string name, std::vector<std::string> args) : command_{{"name", std::move(name)}, {"args", args}} {}

    bool json_out = false;

    int finish(sf_status status, const json& results, const std::string& input,
               const std::function<void(const json&)>& human) {
        double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
        json res = results;
        if (res.is_null()) res = json::object();
        if (status != SF_OK) {
            res["status"] = sf_status_name(status);
            if (*sf_last_error()) res["error"] = sf_last_error();
            if (sf_last_error_byte() >= 0) res["error_byte"] = sf_last_error_byte();
        }
        if (json_out) {
            Owned rep;
            std::string cmd = command_.dump(), r = res.dump();
            sf_make_report(cmd.c_str(), input.data(), input.size(), r.c_str(), ms, &rep.s);
            std::cout << (rep.s ? rep.s : "{}") << "\n";
        } else {
            if (!results.is_null()) human(results);
            if (status != SF_OK && *sf_last_error()) std::cerr << "error: " << sf_last_error() << "\n";
        }
        return static_cast<int>(status);
    }

private:
    json command_;
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(10) << v;
    return s.str();
}

void print_table(const json& rows) {
    std::cout << std::left << std::setw(6) << "type" << std::setw(10) << "t" << std::setw(28) << "allocation"
              << std::setw(14) << "payment" << "utility\n";
    for (const auto& r : rows) {
        std::string alloc;
        if (r["allocation"].is_string()) {
            alloc = r["allocation"].get<std::string>();
        } else {
            for (const auto& [id, w] : r["allocation"].items()) {
                if (!alloc.empty()) alloc += " ";
                alloc += id + ":" + fmt(w.get<double>());
            }
        }
        std::cout << std::setw(6) << r["type"].get<std::size_t>() << std::setw(10) << fmt(r["t"].get<double>())
                  << std::setw(28) << alloc << std::setw(14) << fmt(r["payment"].get<double>())
                  << fmt(r["utility"].get<double>()) << "\n";
    }
}

void print_checks(const json& checks) {
    for (const auto& c : checks) {
        std::string tag = c["informational"].get<bool>() ? "INFO" : (c["passed"].get<bool>() ? "PASS" : "FAIL");
        std::cout << tag << " " << c["name"].get<std::string>() << ": " << c["lhs_program"].get<std::string>()
                  << " = " << fmt(c["lhs"].get<double>()) << ", " << c["rhs_program"].get<std::string>() << " = "
                  << fmt(c["rhs"].get<double>()) << ", gap " << fmt(c["gap"].get<double>()) << " (tolerance "
                  << fmt(c["tolerance"].get<double>()) << ")\n";
    }
}

std::string join_ids(const json& a) {
    std::string s;
    for (const auto& x : a) s += (s.empty() ? "" : ", ") + x.get<std::string>();
    return "{" + s + "}";
}

// Loads the problem file or reports the failure; returns the exit code on failure.
std::optional<int> load(Runner& run, const std::string& path, ProblemHandle& h, std::string& input) {
    input = slurp(path);
    sf_status s = sf_problem_load(path.c_str(), &h.p);
    if (s == SF_OK) return std::nullopt;
    return run.finish(s, nullptr, input, [](const json&) {});
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    CLI::App app{"Screening menus: frontier certification, optimal mechanisms and verification"};
    app.require_subcommand(1);
    bool json_out = false;
    app.add_flag("--json", json_out, "print the JSON report");

    std::string path;

    auto* validate = app.add_subcommand("validate", "check the model invariants of a problem file");
    validate->add_option("problem", path)->required();
    validate->add_flag("--json", json_out);

    bool strong = false, generalized = false;
    std::string order;
    auto* frontier = app.add_subcommand("frontier", "certify a frontier");
    frontier->add_option("problem", path)->required();
    frontier->add_flag("--strong", strong, "require a strong frontier");
    frontier->add_flag("--generalized", generalized, "certify a generalized frontier along --order");
    frontier->add_option("--order", order, "comma-separated allocation ids");
    frontier->add_flag("--json", json_out);

    std::string space = "det", ic = "full", menu, assignment;
    bool exact = false;
    std::optional<std::uint64_t> budget;
    auto* solve = app.add_subcommand("solve", "solve a screening program");
    solve->add_option("problem", path)->required();
    solve->add_option("--space", space)->check(CLI::IsMember({"det", "stoch"}));
    solve->add_option("--ic", ic)->check(CLI::IsMember({"full", "down"}));
    solve->add_option("--menu", menu, "comma-separated allocation ids");
    solve->add_option("--assignment", assignment, "fixed allocation per type; solves for payments only");
    solve->add_flag("--exact", exact, "rational arithmetic");
    solve->add_option("--budget", budget, "deterministic enumeration cap");
    solve->add_flag("--json", json_out);

    auto* verify = app.add_subcommand("verify", "run every applicable optimality check");
    verify->add_option("problem", path)->required();
    verify->add_flag("--exact", exact);
    verify->add_option("--budget", budget);
    verify->add_flag("--json", json_out);

    std::string mech_path;
    auto* recon = app.add_subcommand("reconstruct", "map a deterministic mechanism onto frontier lotteries");
    recon->add_option("problem", path)->required();
    recon->add_option("mechanism", mech_path)->required();
    recon->add_flag("--json", json_out);

    std::string gen_app, out_path, params_text, cost;
    std::vector<std::string> raw_params;
    auto* gen = app.add_subcommand("gen", "generate an application instance");
    gen->set_help_flag("--help", "print this help message and exit");
    gen->add_option("app", gen_app)->required();
    gen->add_option("-o,--output", out_path, "output file (default stdout)");
    gen->add_option("--params", params_text, "parameters as a JSON object");
    gen->add_option("--param", raw_params, "key=json, repeatable");
    std::vector<std::pair<std::string, std::string>> named;
    named.reserve(32);
    for (const char* key : {"types", "t", "probabilities", "welfare_weights", "alpha", "beta", "goods", "values",
                            "nested", "labor", "ordeal", "psi", "eps", "sigma", "states", "family", "theta", "h", "w",
                            "G", "s", "kernel", "distractors", "seed"}) {
        named.emplace_back(key, "");
        gen->add_option(std::string("--") + key, named.back().second);
    }
    gen->add_option("--cost", cost, "regulation cost factors, h:a,b,...,w:c,d,...");
    gen->add_flag("--json", json_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : static_cast<int>(SF_INPUT_ERROR);
    }

    std::string name = app.get_subcommands().front()->get_name();
    Runner run(name, args);
    run.json_out = json_out;
    std::string input;

    auto result_of = [](const Owned& o) {
        try {
            return o.parse();
        } catch (const json::exception&) {
            return json(nullptr);
        }
    };

    if (name == "validate") {
        ProblemHandle h;
        if (auto e = load(run, path, h, input)) return *e;
        Owned out;
        auto s = sf_validate(h.p, &out.s);
        return run.finish(s, result_of(out), input, [](const json& r) {
            if (r["ok"].get<bool>()) std::cout << "valid\n";
            for (const auto& v : r["violations"])
                std::cout << v["code"].get<std::string>() << ": " << v["message"].get<std::string>() << "\n";
        });
    }

    if (name == "frontier") {
        ProblemHandle h;
        if (auto e = load(run, path, h, input)) return *e;
        json o{{"strong", strong}, {"generalized", generalized}};
        if (!order.empty()) o["order"] = split_ids(order);
        Owned out;
        auto s = sf_frontier(h.p, o.dump().c_str(), &out.s);
        return run.finish(s, result_of(out), input, [](const json& r) {
            if (!r["certificate"].is_null()) {
                const auto& c = r["certificate"];
                std::cout << "certificate (" << c["kind"].get<std::string>() << "): " << join_ids(c["menu"]) << "\n";
                if (!r["strong"].is_null()) std::cout << "strong: " << (r["strong"].get<bool>() ? "yes" : "no") << "\n";
            }
            if (!r["violation"].is_null())
                std::cout << "violation " << r["violation"]["code"].get<std::string>() << ": "
                          << r["violation"]["message"].get<std::string>() << "\n";
        });
    }

    if (name == "solve") {
        ProblemHandle h;
        if (auto e = load(run, path, h, input)) return *e;
        json o{{"space", space}, {"ic", ic}, {"exact", exact}};
        if (!menu.empty()) o["menu"] = split_ids(menu);
        if (!assignment.empty()) o["assignment"] = split_ids(assignment);
        if (budget) o["budget"] = *budget;
        Owned out;
        auto s = sf_solve(h.p, o.dump().c_str(), &out.s);
        return run.finish(s, result_of(out), input, [](const json& r) {
            print_table(r["table"]);
            std::cout << "value: " << fmt(r["value"].get<double>());
            if (r.contains("exact_value")) std::cout << " (" << r["exact_value"].get<std::string>() << ")";
            std::cout << "\n";
        });
    }

    if (name == "verify") {
        ProblemHandle h;
        if (auto e = load(run, path, h, input)) return *e;
        json o{{"exact", exact}};
        if (budget) o["budget"] = *budget;
        Owned out;
        auto s = sf_verify(h.p, o.dump().c_str(), &out.s);
        return run.finish(s, result_of(out), input, [](const json& r) {
            const auto& v = r["verify"];
            if (!v["certificate"].is_null())
                std::cout << "certificate (" << v["certificate"]["kind"].get<std::string>()
                          << "): " << join_ids(v["certificate"]["menu"]) << "\n";
            for (const auto& n : v["notes"]) std::cout << n.get<std::string>() << "\n";
            print_checks(v["checks"]);
            if (r.contains("claim")) {
                const auto& c = r["claim"];
                std::cout << "claim \"" << c["expected"]["statement"].get<std::string>() << "\": "
                          << (c["claimed"].get<bool>() ? (c["certified"].get<bool>() ? "certified" : "not certified")
                                                       : "none")
                          << "\n";
                print_checks(c["checks"]);
            }
            std::cout << (r["passed"].get<bool>() ? "all checks pass" : "some checks fail") << "\n";
        });
    }

    if (name == "reconstruct") {
        ProblemHandle h;
        if (auto e = load(run, path, h, input)) return *e;
        std::string mech = slurp(mech_path);
        if (mech.empty()) {
            std::cerr << "error: cannot read '" << mech_path << "'\n";
            return SF_INPUT_ERROR;
        }
        input += mech;
        Owned out;
        auto s = sf_reconstruct(h.p, mech.c_str(), &out.s);
        return run.finish(s, result_of(out), input, [](const json& r) {
            print_table(r["table"]);
            std::cout << "payoff drift: " << fmt(r["payoff_drift"].get<double>()) << "\n";
            std::cout << "downward IC: " << (r["downward_ic"]["holds"].get<bool>() ? "holds" : "fails") << "\n";
        });
    }

    // gen
    json params = json::object();
    auto fail = [&](const std::string& msg) {
        std::cerr << "error: " << msg << "\n";
        return static_cast<int>(SF_INPUT_ERROR);
    };
    try {
        if (!params_text.empty()) params = json::parse(params_text);
        if (!params.is_object()) return fail("--params must be a JSON object");
        for (const auto& kv : raw_params) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) return fail("--param expects key=json");
            params[kv.substr(0, eq)] = json::parse(kv.substr(eq + 1));
        }
        for (const auto& [key, text] : named) {
            if (text.empty()) continue;
            std::string k = key == "t" ? "types" : key;
            if (k == "values" || k == "nested")
                params[k] = json::parse(text);
            else if (k == "psi" || k == "family" || k == "kernel")
                params[k] = text;
            else if (k == "goods" || k == "states" || k == "seed")
                params[k] = std::stoull(text);
            else if (k == "distractors")
                params[k] = text == "true" ? json(true) : text == "false" ? json(false) : json(std::stoull(text));
            else
                params[k] = number_list(text);
        }
        if (!cost.empty()) {
            std::string current;
            for (const auto& tok : split(cost, ',')) {
                std::string v = tok;
                if (tok.rfind("h:", 0) == 0 || tok.rfind("w:", 0) == 0) {
                    current = tok.substr(0, 1);
                    params[current] = json::array();
                    v = tok.substr(2);
                }
                if (current.empty()) return fail("--cost expects h:... and w:... lists");
                params[current].push_back(std::stod(v));
            }
        }
    } catch (const std::exception& e) {
        return fail(std::string("bad parameter: ") + e.what());
    }
    input = params.dump();
    Owned out;
    auto s = sf_generate(gen_app.c_str(), input.c_str(), &out.s);
    json instance = result_of(out);
    if (s == SF_OK && !out_path.empty()) {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) return fail("cannot write '" + out_path + "'");
        f << out.s << "\n";
    }
    json summary = instance.is_null() ? json(nullptr)
                                      : json{{"output", out_path.empty() ? json(nullptr) : json(out_path)},
                                             {"expected", instance["expected"]},
                                             {"allocations", instance["allocations"].size()},
                                             {"types", instance["types"].size()}};
    if (s == SF_OK && out_path.empty() && !json_out) {
        std::cout << out.s << "\n";
        return 0;
    }
    return run.finish(s, summary, input, [&](const json& r) {
        std::cout << "wrote " << out_path << " (" << r["types"] << " types, " << r["allocations"]
                  << " allocations; expected " << r["expected"]["menu"].dump() << ")\n";
    });
}
