#include "doubletopt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "doubletopt/errors.hpp"

namespace doubletopt {
namespace oracle {

namespace {

struct PairOption {
    int ext = -1;
    int inj = -1;
    double upper = 0.0;  // residual rate bound for this pair
};

// max sum(q) over l <= q <= u subject to rows a'q <= c, by enumerating
// basic points: every choice of n active constraints among rows and bound
// facets. Returns false when the polytope is empty.
bool vertex_lp_max_sum(const std::vector<double>& lo, const std::vector<double>& hi,
                       const std::vector<std::vector<double>>& row_coefs,
                       const std::vector<double>& row_rhs, double& best_obj,
                       std::vector<double>& best_q) {
    const int n = static_cast<int>(lo.size());
    if (n == 0) {
        best_obj = 0.0;
        best_q.clear();
        return true;
    }

    // Constraint list: a'q <= c. Bounds become unit rows.
    std::vector<std::vector<double>> a;
    std::vector<double> c;
    for (int i = 0; i < n; ++i) {
        std::vector<double> e(n, 0.0);
        e[i] = 1.0;
        a.push_back(e);
        c.push_back(hi[i]);
        e[i] = -1.0;
        a.push_back(e);
        c.push_back(-lo[i]);
    }
    for (std::size_t r = 0; r < row_coefs.size(); ++r) {
        a.push_back(row_coefs[r]);
        c.push_back(row_rhs[r]);
    }
    const int total = static_cast<int>(a.size());

    double scale = 1.0;
    for (double v : c) scale = std::max(scale, std::abs(v));
    const double feas_tol = 1e-9 * scale;

    bool found = false;
    std::vector<int> pick(n);
    // Iterate all n-subsets of constraint indices in lexicographic order.
    for (int i = 0; i < n; ++i) pick[i] = i;
    while (true) {
        // Solve the active system a[pick] q = c[pick].
        std::vector<std::vector<double>> m(n, std::vector<double>(n + 1, 0.0));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) m[i][j] = a[pick[i]][j];
            m[i][n] = c[pick[i]];
        }
        bool singular = false;
        for (int col = 0; col < n && !singular; ++col) {
            int piv = col;
            for (int row = col + 1; row < n; ++row)
                if (std::abs(m[row][col]) > std::abs(m[piv][col])) piv = row;
            if (std::abs(m[piv][col]) < 1e-12) {
                singular = true;
                break;
            }
            std::swap(m[col], m[piv]);
            for (int row = 0; row < n; ++row) {
                if (row == col) continue;
                const double f = m[row][col] / m[col][col];
                if (f != 0.0)
                    for (int j = col; j <= n; ++j) m[row][j] -= f * m[col][j];
            }
        }
        if (!singular) {
            std::vector<double> q(n);
            for (int i = 0; i < n; ++i) q[i] = m[i][n] / m[i][i];
            bool feasible = true;
            for (int r = 0; r < total && feasible; ++r) {
                double lhs = 0.0;
                for (int j = 0; j < n; ++j) lhs += a[r][j] * q[j];
                if (lhs > c[r] + feas_tol) feasible = false;
            }
            if (feasible) {
                double obj = 0.0;
                for (double v : q) obj += v;
                if (!found || obj > best_obj) {
                    best_obj = obj;
                    best_q = q;
                }
                found = true;
            }
        }
        // Next subset.
        int i = n - 1;
        while (i >= 0 && pick[i] == total - n + i) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < n; ++j) pick[j] = pick[j - 1] + 1;
    }
    return found;
}

}  // namespace

BruteForceResult brute_force_optimum(const BlockProblem& p, const EnumerationBound& bound,
                                     bool apply_interference) {
    const int n = static_cast<int>(p.lines.size());
    if (n > bound.max_lines)
        throw TooLarge("brute force: " + std::to_string(n) + " lines exceed the bound");
    for (const auto& line : p.lines)
        if (static_cast<int>(line.wells.size()) > bound.max_wells_per_line)
            throw TooLarge("brute force: line " + line.line_id + " exceeds the well bound");

    const double q_min = p.scenario.q_min;
    const double r_delta = p.scenario.r_delta;

    auto triggered = [&](int k, int q) {
        return p.pair_dist(k, q) < r_delta * 0.5 * (p.lines[k].chi + p.lines[q].chi);
    };

    // Per-line options. Option 0 is "not installed".
    std::vector<std::vector<PairOption>> options(n);
    double combinations = 1.0;
    for (int k = 0; k < n; ++k) {
        options[k].push_back(PairOption{});

        bool degenerate = false;
        if (!(p.lines[k].alpha_med > 0.0))
            for (int q = 0; q < n && !degenerate; ++q)
                if (q != k && triggered(k, q)) degenerate = true;

        if (!degenerate) {
            const auto& wells = p.lines[k].wells;
            for (std::size_t i = 0; i < wells.size(); ++i) {
                for (std::size_t j = 0; j < wells.size(); ++j) {
                    if (!pair_admissible(wells[i], wells[j], p.scenario.delta_min)) continue;
                    const double dist = std::hypot(wells[i].x - wells[j].x,
                                                   wells[i].y - wells[j].y);
                    const double alpha_pair =
                        0.5 * (wells[i].limits.alpha + wells[j].limits.alpha);
                    const double upper =
                        std::min(std::min(p.q_max[k], wells[j].limits.q_drawdown),
                                 std::min(wells[i].limits.q_upconing, alpha_pair * dist));
                    if (upper < q_min) continue;  // mirrors the minimum-rate rule
                    options[k].push_back(
                        PairOption{static_cast<int>(j), static_cast<int>(i), upper});
                }
            }
        }
        combinations *= static_cast<double>(options[k].size());
        if (combinations > bound.max_combinations)
            throw TooLarge("brute force: combination count exceeds the bound");
    }

    BruteForceResult best;
    best.objective = 0.0;
    best.assignment.assign(n, LineChoice{});

    std::vector<std::size_t> choice(n, 0);
    while (true) {
        std::vector<int> installed;
        for (int k = 0; k < n; ++k)
            if (choice[k] > 0) installed.push_back(k);

        bool feasible = true;
        for (std::size_t a = 0; a < installed.size() && feasible; ++a)
            for (std::size_t b = a + 1; b < installed.size() && feasible; ++b)
                if (p.pair_dist(installed[a], installed[b]) <
                    r_delta * p.scenario.delta_min)
                    feasible = false;

        if (feasible) {
            std::vector<double> lo(installed.size(), q_min), hi;
            for (int k : installed) hi.push_back(options[k][choice[k]].upper);

            std::vector<std::vector<double>> rows;
            std::vector<double> rhs;
            for (std::size_t a = 0; a < installed.size(); ++a) {
                for (std::size_t b = a + 1; b < installed.size(); ++b) {
                    const int k = installed[a], q = installed[b];
                    if (!apply_interference || !triggered(k, q)) continue;
                    std::vector<double> coef(installed.size(), 0.0);
                    coef[a] = 1.0 / p.lines[k].alpha_med;
                    coef[b] = 1.0 / p.lines[q].alpha_med;
                    rows.push_back(std::move(coef));
                    rhs.push_back((2.0 / r_delta) * p.pair_dist(k, q));
                }
            }

            double obj = 0.0;
            std::vector<double> qvals;
            if (vertex_lp_max_sum(lo, hi, rows, rhs, obj, qvals) && obj > best.objective) {
                best.objective = obj;
                best.assignment.assign(n, LineChoice{});
                for (std::size_t a = 0; a < installed.size(); ++a) {
                    const int k = installed[a];
                    best.assignment[k] =
                        LineChoice{options[k][choice[k]].ext, options[k][choice[k]].inj,
                                   qvals[a]};
                }
            }
        }

        int k = n - 1;
        while (k >= 0 && choice[k] + 1 == options[k].size()) choice[k--] = 0;
        if (k < 0) break;
        ++choice[k];
    }
    return best;
}

}  // namespace oracle
}  // namespace doubletopt
