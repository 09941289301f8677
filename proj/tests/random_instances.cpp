#include "random_instances.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace testing_support {

namespace {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::vector<double> increasing(Rng& rng, std::size_t n, double start_lo, double start_hi, double step_lo,
                               double step_hi) {
    std::vector<double> r(n);
    double v = uniform(rng, start_lo, start_hi);
    for (std::size_t k = 0; k < n; ++k) {
        r[k] = v;
        v += uniform(rng, step_lo, step_hi);
    }
    return r;
}

ScreeningProblem assemble(TypeGrid grid, std::vector<std::vector<double>> rows) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < rows.size(); ++i) ids.push_back("x" + std::to_string(i + 1));
    return screenfront::make_problem(std::move(grid), std::move(ids), std::move(rows));
}

}  // namespace

TypeGrid random_grid(Rng& rng, std::size_t n) {
    return TypeGrid::uniform(increasing(rng, n, 1.0, 2.0, 0.2, 1.0));
}

void randomize_distribution(Rng& rng, TypeGrid& grid) {
    std::size_t n = grid.size();
    std::vector<double> mu(n);
    for (auto& m : mu) m = uniform(rng, 0.05, 1.0);
    double total = std::accumulate(mu.begin(), mu.end(), 0.0);
    for (auto& m : mu) m /= total;
    // tidy the last entry so the sum is closer to one
    double rest = 1.0 - std::accumulate(mu.begin(), mu.end() - 1, 0.0);
    if (rest > 0) mu.back() = rest;

    std::vector<double> lambda(n);
    for (auto& l : lambda) l = uniform(rng, 0.0, 1.0);
    std::sort(lambda.rbegin(), lambda.rend());
    double mean = 0;
    for (std::size_t k = 0; k < n; ++k) mean += mu[k] * lambda[k];
    double target = uniform(rng, 0.0, 1.0);
    if (uniform(rng, 0, 1) < 0.2) target = 0.0;
    if (uniform(rng, 0, 1) < 0.1) target = 1.0;
    double scale = mean > 0 ? target / mean : 0.0;
    for (auto& l : lambda) l *= scale;
    mean = 0;
    for (std::size_t k = 0; k < n; ++k) mean += mu[k] * lambda[k];
    if (mean > 1.0)
        for (auto& l : lambda) l /= mean * (1 + 1e-15);
    grid.probabilities = mu;
    grid.welfare_weights = lambda;
}

std::vector<double> random_increasing_row(Rng& rng, std::size_t n, double lo, double hi) {
    return increasing(rng, n, lo, hi, 0.05, 1.0);
}

ScreeningProblem random_frontier_problem(Rng& rng, std::size_t n, std::size_t frontier_size, std::size_t dominated) {
    std::vector<std::vector<double>> f;
    f.push_back(increasing(rng, n, 0.5, 2.0, 0.0, 1.0));
    for (std::size_t s = 1; s < frontier_size; ++s) {
        auto g = increasing(rng, n, 1.05, 1.6, 0.02, 0.4);
        std::vector<double> next(n);
        for (std::size_t k = 0; k < n; ++k) next[k] = f.back()[k] * g[k];
        f.push_back(next);
    }
    std::vector<std::vector<double>> rows = f;
    std::uniform_int_distribution<std::size_t> pick(0, frontier_size - 1);
    for (std::size_t d = 0; d < dominated; ++d) {
        const auto& base = f[pick(rng)];
        // h <= 1, nondecreasing
        auto h = increasing(rng, n, 0.2, 0.9, 0.0, 0.15);
        for (auto& v : h) v = std::min(v, 1.0);
        std::vector<double> y(n);
        for (std::size_t k = 0; k < n; ++k) y[k] = base[k] * h[k];
        rows.push_back(y);
    }
    std::shuffle(rows.begin(), rows.end(), rng);
    return assemble(random_grid(rng, n), std::move(rows));
}

ScreeningProblem random_positive_problem(Rng& rng, std::size_t n, std::size_t m) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < m; ++i) rows.push_back(increasing(rng, n, 0.2, 3.0, 0.0, 1.5));
    return assemble(random_grid(rng, n), std::move(rows));
}

ScreeningProblem random_ordered_problem(Rng& rng, std::size_t n, std::size_t m) {
    std::vector<std::vector<double>> rows;
    std::vector<double> cur(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        auto d = increasing(rng, n, 0.05, 1.5, 0.01, 1.0);
        for (std::size_t k = 0; k < n; ++k) cur[k] += d[k];
        rows.push_back(cur);
    }
    return assemble(random_grid(rng, n), std::move(rows));
}

ScreeningProblem random_strong_problem(Rng& rng, std::size_t n, std::size_t m) {
    std::vector<std::vector<double>> rows;
    std::vector<double> inc = increasing(rng, n, 0.3, 1.5, 0.05, 1.0);
    std::vector<double> cur = inc;
    rows.push_back(cur);
    for (std::size_t i = 1; i < m; ++i) {
        auto g = increasing(rng, n, 0.3, 1.2, 0.05, 0.6);
        for (std::size_t k = 0; k < n; ++k) {
            inc[k] *= g[k];
            cur[k] += inc[k];
        }
        rows.push_back(cur);
    }
    return assemble(random_grid(rng, n), std::move(rows));
}

}  // namespace testing_support
