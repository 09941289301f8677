#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "screenfront/model.hpp"

namespace fixtures {

using namespace screenfront;

inline ScreeningProblem myerson() {
    return make_problem(TypeGrid::uniform({1, 2, 3}), {"good"}, {{1, 2, 3}});
}

// x1: v = t, x2: v = t + t^2 on {1,2,3}
inline ScreeningProblem strong_pair() {
    return make_problem(TypeGrid::uniform({1, 2, 3}), {"x1", "x2"}, {{1, 2, 3}, {2, 6, 12}});
}

// v = (alpha + t)^beta over alpha, beta in {0, 0.5, 1}
inline ScreeningProblem opening_example() {
    std::vector<double> t{1, 1.5, 2};
    std::vector<double> grid{0, 0.5, 1};
    std::vector<std::string> ids;
    std::vector<std::vector<double>> rows;
    for (double a : grid)
        for (double b : grid) {
            ids.push_back("(" + std::to_string(a).substr(0, 3) + "," + std::to_string(b).substr(0, 3) + ")");
            std::vector<double> r;
            for (double tk : t) r.push_back(std::pow(a + tk, b));
            rows.push_back(r);
        }
    return make_problem(TypeGrid::uniform(t), ids, rows);
}

}  // namespace fixtures
