#include "screenfront/apps.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <set>
#include <type_traits>

#include "screenfront/demand.hpp"

namespace screenfront {

namespace {

using json = nlohmann::json;
using Rows = std::vector<std::vector<double>>;

std::string fmt(double x) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

bool close_leq(double a, double b) { return a <= b + kOrderTolerance * std::max({1.0, std::abs(a), std::abs(b)}); }

void require_increasing(const std::vector<double>& v, const std::string& name) {
    if (v.empty()) throw InputError(name + " grid is empty");
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1])) throw InputError(name + " grid must be strictly increasing");
}

std::vector<std::string> names_of(const ScreeningProblem& p, const std::vector<std::size_t>& idx) {
    std::vector<std::string> out;
    for (std::size_t i : idx) out.push_back(p.allocations.ids[i]);
    return out;
}

std::optional<FrontierKind> singleton_or(std::size_t size, FrontierKind kind) {
    return size == 1 ? FrontierKind::strong : kind;
}

bool strong_menu(const ScreeningProblem& p, const std::vector<std::size_t>& menu) {
    FrontierCertificate c;
    c.menu = menu;
    c.kind = FrontierKind::surplus_elasticity;
    return check_strong(p, c).strong;
}

struct Modularity {
    bool super = true;
    bool sub = true;
};

// f[i][k] over an increasing first argument i and increasing type k; adjacent cells suffice for positive f
Modularity log_modularity(const Rows& f) {
    Modularity m;
    for (std::size_t i = 0; i + 1 < f.size(); ++i)
        for (std::size_t k = 0; k + 1 < f[i].size(); ++k) {
            double diag = f[i + 1][k + 1] * f[i][k];
            double anti = f[i + 1][k] * f[i][k + 1];
            double tol = kOrderTolerance * std::max({1e-300, std::abs(diag), std::abs(anti)});
            if (diag < anti - tol) m.super = false;
            if (diag > anti + tol) m.sub = false;
        }
    return m;
}

ScreeningProblem build(TypeGrid grid, std::vector<std::string> ids, Rows rows, const std::string& app,
                       const std::string& outside = "empty") {
    auto p = make_problem(std::move(grid), std::move(ids), std::move(rows), outside);
    p.metadata = {{"app", app}};
    return p;
}

// indicator ladders on an increasing grid: lower sets [0, k], upper sets [k, end], and the full set
struct Ladders {
    std::vector<std::string> ids;
    Rows indicators;
    std::vector<std::string> lower, upper;  // ascending by inclusion, both ending at "all"
};

Ladders indicator_ladders(const std::vector<double>& grid) {
    std::size_t K = grid.size();
    Ladders l;
    for (std::size_t k = 0; k + 1 < K; ++k) {
        std::vector<double> x(K, 0.0);
        std::fill(x.begin(), x.begin() + k + 1, 1.0);
        l.ids.push_back("low(" + fmt(grid[k]) + ")");
        l.indicators.push_back(x);
        l.lower.push_back(l.ids.back());
    }
    for (std::size_t k = K; k-- > 1;) {
        std::vector<double> x(K, 0.0);
        std::fill(x.begin() + k, x.end(), 1.0);
        l.ids.push_back("up(" + fmt(grid[k]) + ")");
        l.indicators.push_back(x);
        l.upper.push_back(l.ids.back());
    }
    l.ids.push_back("all");
    l.indicators.emplace_back(K, 1.0);
    l.lower.push_back("all");
    l.upper.push_back("all");
    return l;
}

ExpectedClaim ladder_claim(const Modularity& m, const Ladders& l, const std::string& lower_name,
                           const std::string& upper_name) {
    ExpectedClaim c;
    if (m.super && m.sub) {
        c.menu = {"all"};
        c.kind = FrontierKind::strong;
        c.statement = "payoff-equivalent ladders; the full set alone is optimal";
        if (l.lower.size() > 1) c.alternatives = {l.lower, l.upper};
    } else if (m.super) {
        c.menu = l.lower;
        c.kind = singleton_or(c.menu.size(), FrontierKind::generalized);
        c.statement = lower_name;
    } else if (m.sub) {
        c.menu = l.upper;
        c.kind = singleton_or(c.menu.size(), FrontierKind::generalized);
        c.statement = upper_name;
    } else {
        c.statement = "none";
    }
    return c;
}

}  // namespace

AppInstance gen_product_mix(TypeGrid grid, const std::vector<double>& alpha, const std::vector<double>& beta) {
    require_increasing(alpha, "alpha");
    require_increasing(beta, "beta");
    if (beta.front() < 0) throw InputError("beta must be nonnegative");
    std::vector<std::string> ids;
    Rows rows;
    for (double a : alpha)
        for (double b : beta) {
            std::vector<double> r;
            for (double t : grid.types) {
                if (!(a + t > 0)) throw InputError("alpha + t must be positive, got " + fmt(a + t));
                r.push_back(std::pow(a + t, b));
            }
            ids.push_back("(" + fmt(a) + "," + fmt(b) + ")");
            rows.push_back(std::move(r));
        }
    AppInstance out;
    out.problem = build(std::move(grid), ids, rows, "product-mix");
    std::vector<std::size_t> menu;
    for (double b : beta) menu.push_back(out.problem.allocations.require("(" + fmt(alpha.back()) + "," + fmt(b) + ")"));
    out.expected.menu = names_of(out.problem, menu);
    out.expected.kind = strong_menu(out.problem, menu) ? FrontierKind::strong : FrontierKind::surplus_elasticity;
    out.expected.statement = "maximal alpha at every beta";
    out.provenance = {{"generator", "product-mix"}, {"parameters", {{"alpha", alpha}, {"beta", beta}}}};
    return out;
}

std::vector<std::vector<double>> additive_bundle_values(std::size_t goods, const std::vector<double>& types) {
    Rows rows;
    for (unsigned b = 1; b < (1u << goods); ++b) {
        std::vector<double> r;
        for (double t : types) r.push_back(std::popcount(b) * t);
        rows.push_back(std::move(r));
    }
    return rows;
}

AppInstance gen_bundles(std::size_t goods, TypeGrid grid, const Rows& values, std::vector<unsigned> nested) {
    if (goods == 0 || goods > 10) throw InputError("number of goods must be between 1 and 10");
    unsigned full = (1u << goods) - 1;
    if (values.size() != full) throw DimensionError("expected " + std::to_string(full) + " bundle rows");
    auto name = [&](unsigned b) {
        std::string s = "{";
        for (std::size_t g = 0; g < goods; ++g)
            if (b >> g & 1u) s += (s.size() > 1 ? "," : "") + std::to_string(g + 1);
        return s + "}";
    };
    std::vector<std::string> ids;
    for (unsigned b = 1; b <= full; ++b) {
        const auto& r = values[b - 1];
        if (r.size() != grid.size()) throw DimensionError("bundle row " + name(b) + " has the wrong length");
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (!(r[k] > 0)) throw InputError("bundle " + name(b) + " must have positive value");
            if (k && !(r[k] > r[k - 1])) throw InputError("bundle " + name(b) + " must be strictly increasing in type");
        }
        for (std::size_t g = 0; g < goods; ++g) {
            unsigned bigger = b | (1u << g);
            if (bigger == b) continue;
            for (std::size_t k = 0; k < r.size(); ++k)
                if (values[bigger - 1][k] < r[k])
                    throw InputError("value is not monotone in inclusion: " + name(b) + " exceeds " + name(bigger));
        }
        ids.push_back(name(b));
    }
    if (nested.empty()) nested = {full};
    for (std::size_t j = 0; j < nested.size(); ++j) {
        if (nested[j] == 0 || nested[j] > full) throw InputError("nested menu refers to an unknown bundle");
        if (j && ((nested[j - 1] & ~nested[j]) != 0 || nested[j - 1] == nested[j]))
            throw InputError("declared menu is not nested");
    }
    AppInstance out;
    out.problem = build(std::move(grid), ids, values, "bundles");
    const auto& p = out.problem;
    std::vector<std::size_t> menu;
    for (unsigned b : nested) menu.push_back(p.allocations.require(name(b)));

    // larger members have strictly higher surplus and strictly rising ratio over the smaller; every
    // bundle is weakly dominated by a member in both orders
    bool ok = true;
    for (std::size_t j = 1; j < menu.size() && ok; ++j)
        ok = surplus_leq(p, menu[j - 1], menu[j], Order::strict) && elasticity_leq(p, menu[j], menu[j - 1], Order::strict);
    for (std::size_t x = 0; x < p.num_allocations() && ok; ++x) {
        if (x == p.outside() || std::find(menu.begin(), menu.end(), x) != menu.end()) continue;
        bool dominated = false;
        for (std::size_t m : menu)
            dominated = dominated || (surplus_leq(p, x, m, Order::weak) && elasticity_leq(p, x, m, Order::weak));
        ok = dominated;
    }
    if (ok) {
        out.expected.menu = names_of(p, menu);
        out.expected.kind = strong_menu(p, menu) ? FrontierKind::strong : FrontierKind::surplus_elasticity;
        out.expected.statement = menu.size() == 1 && nested.back() == full ? "pure bundling" : "nested bundling";
    } else {
        out.expected.statement = "none";
    }
    json menus = json::array();
    for (unsigned b : nested) menus.push_back(name(b));
    out.provenance = {{"generator", "bundles"}, {"parameters", {{"goods", goods}, {"nested", menus}}}};
    return out;
}

Disutility ordeal_disutility(const std::string& name) {
    if (name == "falling") return [](double l, double y, double t) { return l * l / (2 * t) + y / t; };
    if (name == "rising") return [](double l, double y, double t) { return l * l / (2 * t) + y * t; };
    throw InputError("unknown disutility '" + name + "' (expected falling or rising)");
}

std::vector<double> normalized_redistributive_weights(const TypeGrid& grid) {
    std::size_t n = grid.size();
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += grid.probabilities[k] * static_cast<double>(n - k);
    std::vector<double> w(n);
    for (std::size_t k = 0; k < n; ++k) w[k] = static_cast<double>(n - k) / s;
    return w;
}

AppInstance gen_ordeal(TypeGrid grid, const std::vector<double>& labor, const std::vector<double>& ordeal,
                       const Disutility& psi, const std::string& psi_name) {
    require_increasing(labor, "labor");
    require_increasing(ordeal, "ordeal");
    if (labor.front() != 0 || ordeal.front() != 0) throw InputError("labor and ordeal grids must start at 0");
    const auto& t = grid.types;
    std::size_t n = t.size();
    for (double tk : t)
        if (psi(0, 0, tk) != 0) throw InputError("disutility of (0,0) must be zero");
    for (std::size_t i = 0; i + 1 < labor.size(); ++i)
        for (std::size_t k = 0; k + 1 < n; ++k) {
            double hi = psi(labor[i + 1], 0, t[k + 1]) - psi(labor[i], 0, t[k + 1]);
            double lo = psi(labor[i + 1], 0, t[k]) - psi(labor[i], 0, t[k]);
            if (!(hi < lo)) throw InputError("disutility without ordeal must be strictly submodular in (l, t)");
        }

    // (a) ordeal cost nonincreasing in type; (b) ratio form of the take-up comparison
    bool a = true, b = true;
    for (double l : labor)
        for (double y : ordeal) {
            if (y == 0) continue;
            for (std::size_t k = 0; k + 1 < n; ++k)
                if (!close_leq(psi(l, y, t[k + 1]) - psi(l, 0, t[k + 1]), psi(l, y, t[k]) - psi(l, 0, t[k]))) a = false;
            if (l == 0) continue;
            for (std::size_t k = 0; k < n && b; ++k)
                if (!(l - psi(l, 0, t[k]) > 0)) b = false;
            for (std::size_t k = 0; k + 1 < n && b; ++k) {
                double r0 = (l - psi(l, y, t[k])) / (l - psi(l, 0, t[k]));
                double r1 = (l - psi(l, y, t[k + 1])) / (l - psi(l, 0, t[k + 1]));
                if (!close_leq(r0, r1)) b = false;
            }
        }

    std::vector<std::string> ids;
    Rows rows;
    json dropped = json::array();
    for (double l : labor)
        for (double y : ordeal) {
            std::string id = "(" + fmt(l) + "," + fmt(y) + ")";
            std::vector<double> r;
            for (double tk : t) r.push_back(l - psi(l, y, tk));
            if (l == 0 && y == 0) {
                ids.push_back(id);
                rows.emplace_back(n, 0.0);
                continue;
            }
            bool monotone = true;
            for (std::size_t k = 1; k < n; ++k) monotone = monotone && r[k] >= r[k - 1];
            if (!monotone) {
                dropped.push_back(id);
                continue;
            }
            ids.push_back(id);
            rows.push_back(std::move(r));
        }
    if (grid.welfare_weights.empty() || std::all_of(grid.welfare_weights.begin(), grid.welfare_weights.end(),
                                                    [](double w) { return w == 0; }))
        grid.welfare_weights = normalized_redistributive_weights(grid);
    AppInstance out;
    out.problem = build(std::move(grid), ids, rows, "ordeal", "(0,0)");
    if (a || b) {
        for (double l : labor)
            if (l > 0) out.expected.menu.push_back("(" + fmt(l) + ",0)");
        out.expected.kind = singleton_or(out.expected.menu.size(), FrontierKind::generalized);
        out.expected.statement = std::string("no ordeals, condition ") + (a ? "(a)" : "(b)");
    } else {
        out.expected.statement = "none";
    }
    out.provenance = {{"generator", "ordeal"},
                      {"parameters", {{"labor", labor}, {"ordeal", ordeal}, {"psi", psi_name}}},
                      {"conditions", {{"a", a}, {"b", b}}},
                      {"dropped", dropped}};
    return out;
}

QuantileModel log_linear_model(std::vector<double> types, std::vector<double> sigma) {
    if (types.size() != sigma.size()) throw DimensionError("sigma needs one entry per type");
    return [types = std::move(types), sigma = std::move(sigma)](double eps, std::size_t k) {
        return std::exp(types.at(k) + sigma.at(k) * eps);
    };
}

AppInstance gen_sequential(TypeGrid grid, const std::vector<double>& eps, const QuantileModel& theta) {
    require_increasing(eps, "eps");
    std::size_t n = grid.size(), K = eps.size();
    Rows q(n, std::vector<double>(K));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < K; ++i) {
            q[k][i] = theta(eps[i], k);
            if (!(q[k][i] > 0) || !std::isfinite(q[k][i])) throw InputError("quantile values must be positive");
            if (i && q[k][i] < q[k][i - 1]) throw InputError("quantile function must be nondecreasing in eps");
            if (k && q[k][i] < q[k - 1][i])
                throw InputError("ex-ante types are not ordered by first-order stochastic dominance");
        }
    bool dispersion = true;
    for (std::size_t i = 0; i + 1 < K; ++i)
        for (std::size_t k = 0; k + 1 < n; ++k)
            if (!close_leq(std::log(q[k][i + 1]) - std::log(q[k][i]), std::log(q[k + 1][i + 1]) - std::log(q[k + 1][i])))
                dispersion = false;

    std::vector<std::string> ids;
    Rows rows;
    for (std::size_t c = 1; c <= K; ++c) {
        std::vector<double> r(n, 0.0);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = K - c; i < K; ++i) r[k] += q[k][i] / static_cast<double>(K);
        ids.push_back("top" + std::to_string(c));
        rows.push_back(std::move(r));
    }
    AppInstance out;
    out.problem = build(std::move(grid), ids, rows, "sequential");
    if (dispersion) {
        out.expected.menu = {"top" + std::to_string(K)};
        out.expected.kind = FrontierKind::strong;
        out.expected.statement = "full claim: a nonrefundable posted price for the option to buy at any realization";
    } else {
        out.expected.statement = "none";
    }
    out.provenance = {{"generator", "sequential"}, {"parameters", {{"eps", eps}}}, {"increasing_dispersion", dispersion}};
    return out;
}

InfoFamily info_family_from_string(const std::string& s) {
    if (s == "linear") return InfoFamily::linear;
    if (s == "concave") return InfoFamily::concave;
    if (s == "convex") return InfoFamily::convex;
    throw InputError("unknown information family '" + s + "'");
}

std::string to_string(InfoFamily f) {
    switch (f) {
        case InfoFamily::linear: return "linear";
        case InfoFamily::concave: return "concave";
        case InfoFamily::convex: return "convex";
    }
    return "?";
}

AppInstance gen_info(std::size_t states, TypeGrid grid, InfoFamily family, std::vector<double> alpha,
                     bool distractors) {
    if (states < 2) throw InputError("at least two states are required");
    std::sort(alpha.begin(), alpha.end());
    alpha.erase(std::unique(alpha.begin(), alpha.end()), alpha.end());
    if (alpha.empty() || alpha.front() <= 0 || alpha.back() > 1) throw InputError("alpha grid must lie in (0, 1]");
    if (alpha.back() != 1.0) alpha.push_back(1.0);
    for (double t : grid.types)
        if (!(t > 0)) throw InputError("information types must be positive");

    auto u = [family](double d, double t) {
        switch (family) {
            case InfoFamily::linear: return t * d;
            case InfoFamily::concave: return t * std::pow(d, 1 + 1 / t);
            case InfoFamily::convex: return std::expm1(t * d);
        }
        return 0.0;
    };
    double nn = static_cast<double>(states);
    std::vector<double> prior(states, 1 / nn);
    // normalized total-variation distance from the prior; equals alpha on truth-or-noise posteriors
    auto distance = [&](const std::vector<double>& mu) {
        double s = 0.0;
        for (std::size_t w = 0; w < states; ++w) s += std::abs(mu[w] - prior[w]);
        return s * nn / (2 * (nn - 1));
    };
    struct Experiment {
        std::string id;
        std::vector<std::pair<double, std::vector<double>>> signals;
    };
    auto mix = [&](double a, const std::vector<double>& target) {
        std::vector<double> mu(states);
        for (std::size_t w = 0; w < states; ++w) mu[w] = (1 - a) * prior[w] + a * target[w];
        return mu;
    };
    std::vector<Experiment> ex;
    for (double a : alpha) {
        Experiment e{a == 1.0 ? "full" : "tn(" + fmt(a) + ")", {}};
        for (std::size_t w = 0; w < states; ++w) {
            std::vector<double> delta(states, 0.0);
            delta[w] = 1;
            e.signals.push_back({1 / nn, mix(a, delta)});
        }
        ex.push_back(std::move(e));
    }
    // distractors only use posteriors at grid distances, so each is a garbling between ladder steps
    auto on_grid = [&](double a) {
        return std::any_of(alpha.begin(), alpha.end(), [a](double b) { return std::abs(a - b) < 1e-12; });
    };
    if (distractors) {
        if (states == 2) {
            for (std::size_t i = 0; i + 1 < alpha.size(); ++i) {
                double lo = alpha[i], hi = alpha[i + 1], up = lo / (lo + hi);
                ex.push_back({"asym(" + fmt(hi) + "," + fmt(lo) + ")",
                              {{up, {0.5 + hi / 2, 0.5 - hi / 2}}, {1 - up, {0.5 - lo / 2, 0.5 + lo / 2}}}});
            }
        } else {
            for (double a : alpha) {
                if (!on_grid(a / (nn - 1))) continue;
                std::vector<double> first(states, 0.0), rest(states, 1 / (nn - 1));
                first[0] = 1;
                rest[0] = 0;
                ex.push_back({"part(" + fmt(a) + ")", {{1 / nn, mix(a, first)}, {(nn - 1) / nn, mix(a, rest)}}});
            }
        }
    }

    std::set<double> ds{0.0};
    std::vector<std::string> ids;
    Rows rows;
    for (const auto& e : ex) {
        std::vector<double> mean(states, 0.0);
        double mass = 0.0;
        for (const auto& [pr, mu] : e.signals) {
            mass += pr;
            for (std::size_t w = 0; w < states; ++w) mean[w] += pr * mu[w];
            ds.insert(distance(mu));
        }
        for (std::size_t w = 0; w < states; ++w)
            if (std::abs(mean[w] - prior[w]) > 1e-9 || std::abs(mass - 1) > 1e-9)
                throw InputError("experiment " + e.id + " is not Bayes plausible");
        std::vector<double> r;
        for (double t : grid.types) {
            double v = 0.0;
            for (const auto& [pr, mu] : e.signals) v += pr * u(distance(mu), t);
            r.push_back(v);
        }
        ids.push_back(e.id);
        rows.push_back(std::move(r));
    }

    // sorted-slope test of the map u(., t_k) -> u(., t_{k+1}) across grid posteriors
    bool concave = true, convex = true;
    std::vector<double> d;
    for (double x : ds)
        if (d.empty() || x > d.back() + 1e-12) d.push_back(x);
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        std::vector<std::pair<double, double>> pts;
        for (double x : d) pts.push_back({u(x, grid.types[k]), u(x, grid.types[k + 1])});
        std::vector<double> slopes;
        for (std::size_t j = 1; j < pts.size(); ++j) {
            double dx = pts[j].first - pts[j - 1].first, dy = pts[j].second - pts[j - 1].second;
            if (!(dx > 0) || dy < 0) {
                concave = convex = false;
                break;
            }
            slopes.push_back(dy / dx);
        }
        for (std::size_t j = 1; j < slopes.size(); ++j) {
            if (!close_leq(slopes[j], slopes[j - 1])) concave = false;
            if (!(slopes[j] > slopes[j - 1] * (1 + 1e-9))) convex = false;
        }
    }

    AppInstance out;
    out.problem = build(std::move(grid), ids, rows, "info");
    if (concave) {
        out.expected.menu = {"full"};
        out.expected.kind = FrontierKind::strong;
        out.expected.statement = "selling full information";
    } else if (convex) {
        for (double a : alpha) out.expected.menu.push_back(a == 1.0 ? "full" : "tn(" + fmt(a) + ")");
        out.expected.kind = singleton_or(out.expected.menu.size(), FrontierKind::generalized);
        out.expected.statement = "truth-or-noise ladder";
    } else {
        out.expected.statement = "none";
    }
    out.provenance = {{"generator", "info"},
                      {"parameters",
                       {{"states", states}, {"family", to_string(family)}, {"alpha", alpha}, {"distractors", distractors}}},
                      {"increasingly_concave", concave},
                      {"increasingly_convex", convex}};
    return out;
}

AppInstance gen_regulation(const std::vector<double>& theta, std::vector<double> weights, TypeGrid grid,
                           const Rows& cost, double alpha, bool distractors) {
    require_increasing(theta, "theta");
    std::size_t K = theta.size(), n = grid.size();
    if (weights.empty()) weights.assign(K, 1.0 / static_cast<double>(K));
    if (weights.size() != K) throw DimensionError("consumer weights need one entry per theta");
    for (double g : weights)
        if (!(g > 0)) throw InputError("consumer weights must be positive");
    if (cost.size() != K) throw DimensionError("cost needs one row per theta");
    if (!(alpha >= 0 && alpha <= 1)) throw InputError("welfare weight must lie in [0, 1]");
    Rows S(K, std::vector<double>(n));
    for (std::size_t i = 0; i < K; ++i) {
        if (cost[i].size() != n) throw DimensionError("cost row has the wrong length");
        for (std::size_t k = 0; k < n; ++k) {
            S[i][k] = theta[i] - cost[i][k];
            if (S[i][k] < 0) throw InputError("surplus theta - c is negative at theta " + fmt(theta[i]));
            if (k && cost[i][k] > cost[i][k - 1]) throw InputError("cost must be decreasing in the monopolist type");
        }
    }
    auto l = indicator_ladders(theta);
    if (distractors)
        for (std::size_t k = 1; k + 1 < K; ++k) {
            std::vector<double> x(K, 0.0);
            x[k] = 1;
            l.ids.push_back("only(" + fmt(theta[k]) + ")");
            l.indicators.push_back(x);
        }
    Rows rows;
    for (const auto& x : l.indicators) {
        std::vector<double> r(n, 0.0);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < K; ++i) r[k] += weights[i] * S[i][k] * x[i];
        rows.push_back(std::move(r));
    }
    grid.welfare_weights.assign(n, alpha);
    AppInstance out;
    out.problem = build(std::move(grid), l.ids, rows, "regulation");
    out.expected = ladder_claim(log_modularity(S), l, "discriminatory pricing", "uniform pricing");
    out.provenance = {{"generator", "regulation"},
                      {"parameters", {{"theta", theta}, {"G", weights}, {"alpha", alpha}, {"distractors", distractors}}}};
    return out;
}

Kernel contract_kernel(const std::string& name) {
    if (name == "exp") return [](double s, double t) { return std::exp(s * t); };
    if (name == "exp-decreasing") return [](double s, double t) { return std::exp(-s * t) * std::exp(2 * t); };
    if (name == "separable") return [](double s, double t) { return (1 + s) * t; };
    throw InputError("unknown kernel '" + name + "'");
}

AppInstance gen_contracts(const std::vector<double>& s, TypeGrid grid, const Kernel& kernel,
                          std::vector<double> weights, std::size_t distractors, std::uint64_t seed) {
    require_increasing(s, "s");
    std::size_t K = s.size(), n = grid.size();
    if (weights.empty()) weights.assign(K, 1.0 / static_cast<double>(K));
    if (weights.size() != K) throw DimensionError("weights need one entry per grid point");
    Rows u(K, std::vector<double>(n));
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            u[i][k] = kernel(s[i], grid.types[k]);
            if (!(u[i][k] > 0) || !std::isfinite(u[i][k])) throw InputError("kernel must be positive");
            if (k && u[i][k] < u[i][k - 1]) throw InputError("kernel must be nondecreasing in type");
        }
    auto l = indicator_ladders(s);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> level(0, 4);
    for (std::size_t d = 0; d < distractors; ++d) {
        std::vector<double> x(K);
        for (auto& v : x) v = level(rng) / 4.0;
        if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0; })) x[rng() % K] = 1;
        l.ids.push_back("step" + std::to_string(d + 1));
        l.indicators.push_back(x);
    }
    Rows rows;
    for (const auto& x : l.indicators) {
        std::vector<double> r(n, 0.0);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < K; ++i) r[k] += weights[i] * x[i] * u[i][k];
        rows.push_back(std::move(r));
    }
    AppInstance out;
    out.problem = build(std::move(grid), l.ids, rows, "contracts");
    out.expected = ladder_claim(log_modularity(u), l, "lower-set contracts", "upper-set contracts");
    out.provenance = {{"generator", "contracts"},
                      {"parameters", {{"s", s}, {"G", weights}, {"distractors", distractors}, {"seed", seed}}}};
    return out;
}

std::vector<std::string> app_names() {
    return {"product-mix", "bundles", "ordeal", "sequential", "info", "regulation", "contracts"};
}

namespace {

class Params {
public:
    Params(const json& j, std::string app) : j_(j.is_null() ? json::object() : j), app_(std::move(app)) {
        if (!j_.is_object()) throw InputError("parameters must be a JSON object");
    }

    template <class T>
    T get(const std::string& key, T fallback) {
        used_.insert(key);
        if (!j_.contains(key)) return fallback;
        try {
            if constexpr (std::is_same_v<T, std::vector<double>>)
                if (j_.at(key).is_number()) return T{j_.at(key).get<double>()};
            return j_.at(key).get<T>();
        } catch (const json::exception& e) {
            throw InputError("parameter '" + key + "' has the wrong type");
        }
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    TypeGrid grid(std::vector<double> default_types, const std::string& key = "types") {
        auto types = get(key, default_types);
        auto probs = get("probabilities", std::vector<double>{});
        auto weights = get("welfare_weights", std::vector<double>{});
        TypeGrid g = TypeGrid::uniform(types);
        if (!probs.empty()) g.probabilities = probs;
        if (!weights.empty()) g.welfare_weights = weights;
        if (g.probabilities.size() != g.size() || g.welfare_weights.size() != g.size())
            throw DimensionError("probabilities and welfare weights need one entry per type");
        return g;
    }

    void finish() const {
        for (const auto& [k, v] : j_.items())
            if (!used_.count(k)) throw InputError("unknown parameter '" + k + "' for " + app_);
    }

private:
    json j_;
    std::string app_;
    std::set<std::string> used_;
};

}  // namespace

AppInstance generate(const std::string& app, const json& params) {
    Params p(params, app);
    AppInstance out;
    if (app == "product-mix") {
        auto g = p.grid({1, 1.5, 2});
        auto a = p.get("alpha", std::vector<double>{0, 0.5, 1});
        auto b = p.get("beta", std::vector<double>{0, 0.5, 1});
        p.finish();
        out = gen_product_mix(g, a, b);
    } else if (app == "bundles") {
        auto goods = p.get<std::size_t>("goods", 1);
        auto g = p.grid({1, 2, 3});
        auto values = p.get("values", Rows{});
        auto nested = p.get("nested", std::vector<std::vector<unsigned>>{});
        p.finish();
        if (values.empty()) values = additive_bundle_values(goods, g.types);
        std::vector<unsigned> masks;
        for (const auto& b : nested) {
            unsigned m = 0;
            for (unsigned good : b) {
                if (good == 0 || good > goods) throw InputError("nested menu refers to an unknown good");
                m |= 1u << (good - 1);
            }
            masks.push_back(m);
        }
        out = gen_bundles(goods, g, values, masks);
    } else if (app == "ordeal") {
        auto g = p.grid({1, 1.5, 2});
        auto labor = p.get("labor", std::vector<double>{0, 0.5, 1});
        auto ordeal = p.get("ordeal", std::vector<double>{0, 0.25});
        auto psi = p.get("psi", std::string("falling"));
        p.finish();
        out = gen_ordeal(g, labor, ordeal, ordeal_disutility(psi), psi);
    } else if (app == "sequential") {
        auto g = p.grid({0, 0.5});
        auto eps = p.get("eps", std::vector<double>{-1, 0, 1});
        auto sigma = p.get("sigma", std::vector<double>{});
        p.finish();
        if (sigma.empty()) sigma.assign(g.size(), 1.0);
        out = gen_sequential(g, eps, log_linear_model(g.types, sigma));
    } else if (app == "info") {
        auto states = p.get<std::size_t>("states", 2);
        auto g = p.grid({1, 2, 3});
        auto family = p.get("family", std::string("concave"));
        auto alpha = p.get("alpha", std::vector<double>{0.25, 0.5, 0.75, 1});
        auto distractors = p.get("distractors", true);
        p.finish();
        out = gen_info(states, g, info_family_from_string(family), alpha, distractors);
    } else if (app == "regulation") {
        auto theta = p.get("theta", std::vector<double>{1, 2, 3});
        auto weights = p.get("G", std::vector<double>{});
        auto g = p.grid({1, 2});
        std::vector<double> h_default;
        for (double x : theta) h_default.push_back(std::sqrt(x));
        auto h = p.get("h", h_default);
        auto w = p.get("w", std::vector<double>{});
        auto alpha = p.get("alpha", 0.5);
        auto distractors = p.get("distractors", true);
        p.finish();
        if (w.empty())
            for (std::size_t k = 0; k < g.size(); ++k) w.push_back(0.8 / static_cast<double>(k + 1));
        if (h.size() != theta.size() || w.size() != g.size()) throw DimensionError("cost factors have the wrong length");
        Rows cost(theta.size(), std::vector<double>(g.size()));
        for (std::size_t i = 0; i < theta.size(); ++i)
            for (std::size_t k = 0; k < g.size(); ++k) cost[i][k] = h[i] * w[k];
        out = gen_regulation(theta, weights, g, cost, alpha, distractors);
    } else if (app == "contracts") {
        auto s = p.get("s", std::vector<double>{0, 0.5, 1});
        auto g = p.grid({1, 2});
        auto kernel = p.get("kernel", std::string("exp"));
        auto weights = p.get("G", std::vector<double>{});
        auto distractors = p.get<std::size_t>("distractors", 2);
        auto seed = p.get<std::uint64_t>("seed", 1);
        p.finish();
        out = gen_contracts(s, g, contract_kernel(kernel), weights, distractors, seed);
    } else {
        throw InputError("unknown application '" + app + "'");
    }
    out.provenance["generator"] = app;
    out.provenance["parameters"] = params.is_null() ? json::object() : params;
    return out;
}

}  // namespace screenfront
