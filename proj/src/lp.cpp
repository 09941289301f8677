#include "screenfront/lp.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

#include "screenfront/model.hpp"

namespace screenfront {

namespace {

template <class T>
struct Tolerance;

template <>
struct Tolerance<double> {
    static double pivot() { return 1e-9; }
    static double cost() { return 1e-10; }
    static double feasibility() { return 1e-8; }
    static bool ratio_tie(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }
    static void chop(double& v) {
        if (std::abs(v) < 1e-13) v = 0.0;
    }
    static double abs(double v) { return std::abs(v); }
};

template <>
struct Tolerance<Rational> {
    static Rational pivot() { return 0; }
    static Rational cost() { return 0; }
    static Rational feasibility() { return 0; }
    static bool ratio_tie(const Rational& a, const Rational& b) { return a == b; }
    static void chop(Rational&) {}
    static Rational abs(const Rational& v) { return ::abs(v); }
};

template <class T>
struct Column {
    std::size_t col;
    int sign;
};

template <class T>
class Simplex {
public:
    using Tol = Tolerance<T>;

    explicit Simplex(const LinearProgram<T>& lp) : lp_(lp) {}

    LpSolution<T> run() {
        build();
        LpSolution<T> out;

        // phase 1
        std::vector<T> cost(cols_, T(0));
        for (std::size_t j = art_begin_; j < cols_; ++j) cost[j] = -1;
        price(cost);
        if (!iterate()) throw Error("phase one reported unbounded");
        T worst = 0;
        for (std::size_t i = 0; i < rows_; ++i) worst = std::max(worst, Tol::abs(tab_[i][cols_]));
        T tol = Tol::feasibility() * std::max(T(1), worst);
        if (z_[cols_] < -tol) {
            out.status = LpStatus::infeasible;
            out.pivots = pivots_;
            return out;
        }
        drive_out_artificials();

        // phase 2
        std::fill(cost.begin(), cost.end(), T(0));
        for (std::size_t i = 0; i < lp_.num_variables(); ++i)
            for (const auto& c : map_[i]) cost[c.col] += lp_.objective[i] * T(c.sign);
        price(cost);
        if (!iterate()) {
            out.status = LpStatus::unbounded;
            out.pivots = pivots_;
            return out;
        }

        std::vector<T> y(cols_, T(0));
        for (std::size_t i = 0; i < rows_; ++i) y[basis_[i]] = tab_[i][cols_];
        out.status = LpStatus::optimal;
        out.x.assign(lp_.num_variables(), T(0));
        out.value = 0;
        for (std::size_t i = 0; i < lp_.num_variables(); ++i) {
            T xi = offset_[i];
            for (const auto& c : map_[i]) xi += T(c.sign) * y[c.col];
            out.x[i] = xi;
            out.value += lp_.objective[i] * xi;
        }
        out.dual.resize(lp_.constraints.size());
        for (std::size_t i = 0; i < lp_.constraints.size(); ++i) {
            T pi = z_[identity_[i]];
            out.dual[i] = flipped_[i] ? T(-pi) : pi;
        }
        out.pivots = pivots_;
        return out;
    }

private:
    void build() {
        std::size_t nv = lp_.num_variables();
        if (lp_.bounds.size() != nv) throw DimensionError("bounds length does not match variable count");
        for (const auto& c : lp_.constraints)
            if (c.coefficients.size() != nv) throw DimensionError("constraint length does not match variable count");

        // substitute x = offset + sum sign * y with y >= 0
        std::size_t ny = 0;
        map_.resize(nv);
        offset_.assign(nv, T(0));
        struct UpperRow {
            std::size_t col;
            T rhs;
        };
        std::vector<UpperRow> uppers;
        for (std::size_t i = 0; i < nv; ++i) {
            const auto& b = lp_.bounds[i];
            if (b.lower && b.upper && *b.upper < *b.lower) {
                infeasible_bounds_ = true;
            }
            if (b.lower) {
                offset_[i] = *b.lower;
                map_[i].push_back({ny, 1});
                if (b.upper) uppers.push_back({ny, *b.upper - *b.lower});
                ++ny;
            } else if (b.upper) {
                offset_[i] = *b.upper;
                map_[i].push_back({ny++, -1});
            } else {
                map_[i].push_back({ny++, 1});
                map_[i].push_back({ny++, -1});
            }
        }

        struct Row {
            std::vector<T> a;
            Relation rel;
            T rhs;
        };
        std::vector<Row> rows;
        for (const auto& c : lp_.constraints) {
            Row r{std::vector<T>(ny, T(0)), c.relation, c.rhs};
            for (std::size_t i = 0; i < nv; ++i) {
                if (c.coefficients[i] == T(0)) continue;
                r.rhs -= c.coefficients[i] * offset_[i];
                for (const auto& m : map_[i]) r.a[m.col] += c.coefficients[i] * T(m.sign);
            }
            rows.push_back(std::move(r));
        }
        for (const auto& u : uppers) {
            Row r{std::vector<T>(ny, T(0)), Relation::leq, u.rhs};
            r.a[u.col] = 1;
            rows.push_back(std::move(r));
        }
        if (infeasible_bounds_) {
            // x <= u < l: encode as 0 <= negative
            Row r{std::vector<T>(ny, T(0)), Relation::leq, T(-1)};
            rows.push_back(std::move(r));
        }

        rows_ = rows.size();
        flipped_.assign(rows_, false);
        for (std::size_t i = 0; i < rows_; ++i) {
            auto& r = rows[i];
            if (r.rhs < T(0)) {
                for (auto& v : r.a) v = -v;
                r.rhs = -r.rhs;
                if (r.rel == Relation::leq) r.rel = Relation::geq;
                else if (r.rel == Relation::geq) r.rel = Relation::leq;
                flipped_[i] = true;
            }
        }

        std::size_t slacks = 0, arts = 0;
        for (const auto& r : rows) {
            if (r.rel != Relation::eq) ++slacks;
            if (r.rel != Relation::leq) ++arts;
        }
        art_begin_ = ny + slacks;
        cols_ = art_begin_ + arts;
        tab_.assign(rows_, std::vector<T>(cols_ + 1, T(0)));
        basis_.assign(rows_, 0);
        identity_.assign(rows_, 0);
        std::size_t s = ny, a = art_begin_;
        for (std::size_t i = 0; i < rows_; ++i) {
            auto& r = rows[i];
            for (std::size_t j = 0; j < ny; ++j) tab_[i][j] = r.a[j];
            tab_[i][cols_] = r.rhs;
            if (r.rel == Relation::leq) {
                tab_[i][s] = 1;
                basis_[i] = identity_[i] = s++;
            } else {
                if (r.rel == Relation::geq) tab_[i][s++] = -1;
                tab_[i][a] = 1;
                basis_[i] = identity_[i] = a++;
            }
        }
    }

    void price(const std::vector<T>& cost) {
        z_.assign(cols_ + 1, T(0));
        for (std::size_t j = 0; j <= cols_; ++j) {
            T v = j < cols_ ? T(-cost[j]) : T(0);
            for (std::size_t i = 0; i < rows_; ++i) {
                const T& cb = cost[basis_[i]];
                if (cb != T(0) && tab_[i][j] != T(0)) v += cb * tab_[i][j];
            }
            z_[j] = v;
        }
    }

    void pivot(std::size_t r, std::size_t c) {
        ++pivots_;
        T p = tab_[r][c];
        for (auto& v : tab_[r]) {
            if (v != T(0)) v /= p;
        }
        tab_[r][c] = 1;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == r || tab_[i][c] == T(0)) continue;
            T f = tab_[i][c];
            for (std::size_t j = 0; j <= cols_; ++j) {
                if (tab_[r][j] == T(0)) continue;
                tab_[i][j] -= f * tab_[r][j];
                Tol::chop(tab_[i][j]);
            }
            tab_[i][c] = 0;
        }
        if (z_[c] != T(0)) {
            T f = z_[c];
            for (std::size_t j = 0; j <= cols_; ++j) {
                if (tab_[r][j] == T(0)) continue;
                z_[j] -= f * tab_[r][j];
                Tol::chop(z_[j]);
            }
            z_[c] = 0;
        }
        basis_[r] = c;
    }

    // false when unbounded
    bool iterate() {
        for (;;) {
            std::size_t enter = cols_;
            for (std::size_t j = 0; j < art_begin_; ++j)
                if (z_[j] < -Tol::cost()) {
                    enter = j;
                    break;
                }
            if (enter == cols_) return true;
            std::size_t leave = rows_;
            T best{};
            for (std::size_t i = 0; i < rows_; ++i) {
                if (!(tab_[i][enter] > Tol::pivot())) continue;
                T rhs = tab_[i][cols_] < T(0) ? T(0) : tab_[i][cols_];
                T ratio = rhs / tab_[i][enter];
                if (leave == rows_ || (ratio < best && !Tol::ratio_tie(ratio, best))) {
                    leave = i;
                    best = ratio;
                } else if (Tol::ratio_tie(ratio, best) && basis_[i] < basis_[leave]) {
                    leave = i;
                }
            }
            if (leave == rows_) return false;
            pivot(leave, enter);
        }
    }

    void drive_out_artificials() {
        for (std::size_t i = 0; i < rows_; ++i) {
            if (basis_[i] < art_begin_) continue;
            std::size_t best = art_begin_;
            for (std::size_t j = 0; j < art_begin_; ++j)
                if (Tol::abs(tab_[i][j]) > Tol::pivot()) {
                    best = j;
                    break;
                }
            if (best == art_begin_) continue;  // redundant row
            pivot(i, best);
            for (std::size_t k = 0; k < rows_; ++k)
                if (tab_[k][cols_] < T(0)) tab_[k][cols_] = 0;
        }
    }

    const LinearProgram<T>& lp_;
    std::vector<std::vector<Column<T>>> map_;
    std::vector<T> offset_;
    bool infeasible_bounds_ = false;
    std::vector<std::vector<T>> tab_;
    std::vector<T> z_;
    std::vector<std::size_t> basis_;
    std::vector<std::size_t> identity_;
    std::vector<bool> flipped_;
    std::size_t rows_ = 0, cols_ = 0, art_begin_ = 0;
    std::size_t pivots_ = 0;
};

}  // namespace

namespace {

// Residual check of a float solution against the original rows and bounds.
bool satisfies(const LinearProgram<double>& lp, const std::vector<double>& x) {
    constexpr double tol = 1e-7;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto& b = lp.bounds[i];
        double scale = std::max(1.0, std::abs(x[i]));
        if ((b.lower && x[i] < *b.lower - tol * scale) || (b.upper && x[i] > *b.upper + tol * scale)) return false;
    }
    for (const auto& c : lp.constraints) {
        double lhs = 0.0, scale = std::max(1.0, std::abs(c.rhs));
        for (std::size_t i = 0; i < x.size(); ++i) {
            lhs += c.coefficients[i] * x[i];
            scale = std::max(scale, std::abs(c.coefficients[i] * x[i]));
        }
        double r = lhs - c.rhs;
        if ((c.relation != Relation::geq && r > tol * scale) || (c.relation != Relation::leq && r < -tol * scale))
            return false;
    }
    return true;
}

LpSolution<double> float_solution(const LpSolution<Rational>& s) {
    LpSolution<double> out;
    out.status = s.status;
    for (const auto& v : s.x) out.x.push_back(to_double(v));
    for (const auto& v : s.dual) out.dual.push_back(to_double(v));
    out.value = to_double(s.value);
    out.pivots = s.pivots;
    return out;
}

}  // namespace

template <class T>
LpSolution<T> solve_lp(const LinearProgram<T>& lp) {
    auto s = Simplex<T>(lp).run();
    if constexpr (std::is_same_v<T, double>) {
        // drifted float tableaus and marginal unbounded calls are re-solved in rational arithmetic
        if (s.status == LpStatus::unbounded || (s.status == LpStatus::optimal && !satisfies(lp, s.x)))
            return float_solution(Simplex<Rational>(to_rational(lp)).run());
    }
    return s;
}

template LpSolution<double> solve_lp(const LinearProgram<double>&);
template LpSolution<Rational> solve_lp(const LinearProgram<Rational>&);

LinearProgram<Rational> to_rational(const LinearProgram<double>& lp) {
    LinearProgram<Rational> out;
    out.objective = to_rational(lp.objective);
    for (const auto& c : lp.constraints) out.constraints.push_back({to_rational(c.coefficients), c.relation, to_rational(c.rhs)});
    for (const auto& b : lp.bounds) {
        Bound<Rational> r{std::nullopt, std::nullopt};
        if (b.lower) r.lower = to_rational(*b.lower);
        if (b.upper) r.upper = to_rational(*b.upper);
        out.bounds.push_back(r);
    }
    return out;
}

std::string to_string(LpStatus s) {
    switch (s) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
    }
    return "unknown";
}

}  // namespace screenfront
