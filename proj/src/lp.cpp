#include "doubletopt/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "doubletopt/errors.hpp"

namespace doubletopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDualTol = 1e-9;
constexpr double kRatioTol = 1e-9;
constexpr double kTieTol = 1e-12;

enum class VarState : char { Basic, AtLower, AtUpper };

// Full per-solve simplex state. Variables are ordered structural, slack
// (one per LE row), artificial (one per row that starts infeasible).
struct Tableau {
    int n_total = 0;
    int m = 0;
    int n_nb = 0;

    std::vector<double> lb, ub, x;
    std::vector<VarState> state;
    std::vector<int> basic_of_row;   // var basic in each row
    std::vector<int> nb_var;         // var occupying each tableau column
    std::vector<int> col_of_var;     // -1 when basic
    std::vector<double> t;           // m x n_nb, row-major
    std::vector<double> d;           // reduced costs per tableau column
    std::vector<double> cost;        // minimization costs per var
    std::vector<char> is_artificial;

    double& T(int i, int a) { return t[static_cast<std::size_t>(i) * n_nb + a]; }
    double T(int i, int a) const { return t[static_cast<std::size_t>(i) * n_nb + a]; }
};

}  // namespace

LpSolver::LpSolver(const MilpInstance& inst) {
    n_ = static_cast<int>(inst.vars.size());
    cols_.resize(n_);
    obj_ = inst.objective;
    lb_.resize(n_);
    ub_.resize(n_);
    for (int j = 0; j < n_; ++j) {
        lb_[j] = inst.vars[j].lb;
        ub_[j] = inst.vars[j].ub;
    }
    sense_.reserve(inst.rows.size());
    rhs_.reserve(inst.rows.size());
    for (const auto& row : inst.rows) {
        const int r = static_cast<int>(sense_.size());
        sense_.push_back(row.sense);
        rhs_.push_back(row.rhs);
        for (const auto& term : row.terms) cols_[term.var].push_back({r, term.coef});
    }
}

LpResult LpSolver::solve(const std::vector<Fixing>& fixings) const {
    std::vector<double> lb = lb_, ub = ub_;
    for (const auto& f : fixings) {
        lb[f.var] = f.value;
        ub[f.var] = f.value;
    }
    try {
        return run_once(lb, ub, false);
    } catch (const NumericalFailure&) {
        // Retry on the slower, stall-proof pivot rule.
        return run_once(lb, ub, true);
    }
}

namespace {

struct PivotChoice {
    int col = -1;          // tableau column of the entering variable
    int row = -1;          // blocking row, -1 for a bound flip
    double delta = 0.0;    // step length
    bool bound_flip = false;
    bool unbounded = false;
};

// Ratio test for a chosen entering column. Returns false when no step,
// not even a degenerate one, is numerically acceptable.
bool ratio_test(const Tableau& tb, int col, bool bland, PivotChoice& out) {
    const int e = tb.nb_var[col];
    const int dir = tb.state[e] == VarState::AtLower ? 1 : -1;
    double best = tb.ub[e] - tb.lb[e];  // bound flip step (may be inf)
    int best_row = -1;
    double best_piv = 0.0;

    for (int i = 0; i < tb.m; ++i) {
        const double w = tb.T(i, col);
        const double rate = -dir * w;
        if (std::abs(rate) <= kRatioTol) continue;
        const int b = tb.basic_of_row[i];
        double room;
        if (rate < 0.0) {
            room = tb.x[b] - tb.lb[b];
        } else {
            room = tb.ub[b] - tb.x[b];
        }
        if (room == kInf) continue;
        double step = std::max(room, 0.0) / std::abs(rate);
        if (step < best - kTieTol) {
            best = step;
            best_row = i;
            best_piv = std::abs(w);
        } else if (best_row >= 0 && step <= best + kTieTol) {
            // Tie. Bland: lowest leaving variable index. Otherwise prefer the
            // larger pivot, then the lowest index, for numerical stability.
            const int cur = tb.basic_of_row[best_row];
            if (bland) {
                if (b < cur) {
                    best_row = i;
                    best_piv = std::abs(w);
                }
            } else if (std::abs(w) > best_piv + kTieTol ||
                       (std::abs(w) >= best_piv - kTieTol && b < cur)) {
                best_row = i;
                best_piv = std::abs(w);
            }
        }
    }

    if (best == kInf) {
        out = PivotChoice{col, -1, 0.0, false, true};
        return true;
    }
    if (best_row < 0) {
        out = PivotChoice{col, -1, best, true, false};
        return true;
    }
    if (best_piv <= kRatioTol) return false;
    out = PivotChoice{col, best_row, best, false, false};
    return true;
}

void apply_step(Tableau& tb, const PivotChoice& pc) {
    const int col = pc.col;
    const int e = tb.nb_var[col];
    const int dir = tb.state[e] == VarState::AtLower ? 1 : -1;
    const double delta = pc.delta;

    if (delta != 0.0) {
        for (int i = 0; i < tb.m; ++i) {
            const int b = tb.basic_of_row[i];
            tb.x[b] -= dir * delta * tb.T(i, col);
        }
    }

    if (pc.bound_flip) {
        tb.x[e] = dir > 0 ? tb.ub[e] : tb.lb[e];
        tb.state[e] = dir > 0 ? VarState::AtUpper : VarState::AtLower;
        return;
    }

    const int r = pc.row;
    const int leaving = tb.basic_of_row[r];
    const double piv = tb.T(r, col);

    tb.x[e] = (dir > 0 ? tb.lb[e] : tb.ub[e]) + dir * delta;
    // Snap the leaving variable to the bound it hit.
    const double rate = -dir * piv;
    if (rate < 0.0) {
        tb.x[leaving] = tb.lb[leaving];
        tb.state[leaving] = VarState::AtLower;
    } else {
        tb.x[leaving] = tb.ub[leaving];
        tb.state[leaving] = VarState::AtUpper;
    }

    // Save the entering column before transforming.
    std::vector<double> w(tb.m);
    for (int i = 0; i < tb.m; ++i) w[i] = tb.T(i, col);

    const double de = tb.d[col];
    for (int a = 0; a < tb.n_nb; ++a) {
        if (a == col) continue;
        const double v = tb.T(r, a) / piv;
        if (v != 0.0) {
            tb.T(r, a) = v;
            for (int i = 0; i < tb.m; ++i)
                if (i != r) tb.T(i, a) -= w[i] * v;
            tb.d[a] -= de * v;
        }
    }
    // The vacated column now represents the leaving variable.
    for (int i = 0; i < tb.m; ++i) tb.T(i, col) = -w[i] / piv;
    tb.T(r, col) = 1.0 / piv;
    tb.d[col] = -de / piv;

    tb.basic_of_row[r] = e;
    tb.col_of_var[e] = -1;
    tb.state[e] = VarState::Basic;
    tb.nb_var[col] = leaving;
    tb.col_of_var[leaving] = col;
}

void recompute_reduced_costs(Tableau& tb) {
    for (int a = 0; a < tb.n_nb; ++a) {
        double v = tb.cost[tb.nb_var[a]];
        for (int i = 0; i < tb.m; ++i) {
            const double cb = tb.cost[tb.basic_of_row[i]];
            if (cb != 0.0) v -= cb * tb.T(i, a);
        }
        tb.d[a] = v;
    }
}

// Runs the simplex loop until no improving column remains. Returns false on
// an unbounded direction.
bool optimize(Tableau& tb, long max_iter, bool bland_from_start) {
    bool bland = bland_from_start;
    long degenerate_run = 0;
    for (long iter = 0; iter < max_iter; ++iter) {
        PivotChoice pc;
        bool found = false;
        if (bland) {
            int best_var = std::numeric_limits<int>::max();
            int best_col = -1;
            for (int a = 0; a < tb.n_nb; ++a) {
                const int v = tb.nb_var[a];
                if (tb.lb[v] == tb.ub[v]) continue;
                const bool eligible = (tb.state[v] == VarState::AtLower && tb.d[a] < -kDualTol) ||
                                      (tb.state[v] == VarState::AtUpper && tb.d[a] > kDualTol);
                if (eligible && v < best_var) {
                    best_var = v;
                    best_col = a;
                }
            }
            if (best_col < 0) return true;
            if (!ratio_test(tb, best_col, true, pc))
                throw NumericalFailure("simplex: no acceptable pivot under Bland's rule");
            found = true;
        } else {
            // Dantzig: most violating reduced cost; try runners-up when the
            // ratio test rejects a column on pivot size.
            std::vector<std::pair<double, int>> candidates;
            for (int a = 0; a < tb.n_nb; ++a) {
                const int v = tb.nb_var[a];
                if (tb.lb[v] == tb.ub[v]) continue;
                double viol = 0.0;
                if (tb.state[v] == VarState::AtLower && tb.d[a] < -kDualTol)
                    viol = -tb.d[a];
                else if (tb.state[v] == VarState::AtUpper && tb.d[a] > kDualTol)
                    viol = tb.d[a];
                if (viol > 0.0) candidates.emplace_back(-viol, a);
            }
            if (candidates.empty()) return true;
            std::sort(candidates.begin(), candidates.end(),
                      [&](const auto& lhs, const auto& rhs) {
                          if (lhs.first != rhs.first) return lhs.first < rhs.first;
                          return tb.nb_var[lhs.second] < tb.nb_var[rhs.second];
                      });
            for (const auto& [neg_viol, a] : candidates) {
                if (ratio_test(tb, a, false, pc)) {
                    found = true;
                    break;
                }
            }
            if (!found) throw NumericalFailure("simplex: all improving columns rejected");
        }

        if (pc.unbounded) return false;
        apply_step(tb, pc);

        if (pc.delta <= kTieTol) {
            if (++degenerate_run > 128 + 2L * (tb.m + tb.n_nb)) bland = true;
        } else {
            degenerate_run = 0;
            bland = bland_from_start;
        }
    }
    throw NumericalFailure("simplex: iteration limit exceeded");
}

}  // namespace

LpResult LpSolver::run_once(const std::vector<double>& lb_in, const std::vector<double>& ub_in,
                            bool bland_from_start) const {
    const int n = n_;
    const int m = rows();

    // Trivial case: no rows, everything sits at its preferred bound.
    if (m == 0) {
        LpResult res;
        res.status = LpStatus::Optimal;
        res.x.resize(n);
        res.objective = 0.0;
        for (int j = 0; j < n; ++j) {
            res.x[j] = obj_[j] > 0.0 ? ub_in[j] : lb_in[j];
            res.objective += obj_[j] * res.x[j];
        }
        return res;
    }

    Tableau tb;
    tb.m = m;

    // Layout: structural | slack per LE row | artificials as needed.
    std::vector<int> slack_of_row(m, -1);
    int n_total = n;
    for (int r = 0; r < m; ++r)
        if (sense_[r] == RowSense::LE) slack_of_row[r] = n_total++;
    const int first_artificial = n_total;

    std::vector<double> residual(rhs_);
    for (int j = 0; j < n; ++j) {
        const double xj = lb_in[j];
        if (xj != 0.0)
            for (const auto& entry : cols_[j]) residual[entry.row] -= entry.coef * xj;
    }

    std::vector<int> artificial_of_row(m, -1);
    for (int r = 0; r < m; ++r) {
        const bool needs_artificial =
            sense_[r] == RowSense::EQ || residual[r] < -kRatioTol;
        if (needs_artificial) artificial_of_row[r] = n_total++;
    }

    tb.n_total = n_total;
    tb.lb.assign(n_total, 0.0);
    tb.ub.assign(n_total, kInf);
    tb.cost.assign(n_total, 0.0);
    tb.x.assign(n_total, 0.0);
    tb.state.assign(n_total, VarState::AtLower);
    tb.is_artificial.assign(n_total, 0);
    tb.col_of_var.assign(n_total, -1);
    for (int j = 0; j < n; ++j) {
        tb.lb[j] = lb_in[j];
        tb.ub[j] = ub_in[j];
        tb.x[j] = lb_in[j];
    }
    for (int v = first_artificial; v < n_total; ++v) tb.is_artificial[v] = 1;

    tb.basic_of_row.assign(m, -1);
    bool any_artificial_load = false;
    for (int r = 0; r < m; ++r) {
        if (const int a = artificial_of_row[r]; a >= 0) {
            tb.basic_of_row[r] = a;
            tb.x[a] = std::abs(residual[r]);
            tb.state[a] = VarState::Basic;
            if (tb.x[a] > kRatioTol) any_artificial_load = true;
        } else {
            const int s = slack_of_row[r];
            tb.basic_of_row[r] = s;
            tb.x[s] = std::max(residual[r], 0.0);
            tb.state[s] = VarState::Basic;
        }
    }

    // Nonbasic set: structurals plus slacks of rows that start on an
    // artificial.
    for (int j = 0; j < n; ++j) tb.nb_var.push_back(j);
    for (int r = 0; r < m; ++r)
        if (artificial_of_row[r] >= 0 && slack_of_row[r] >= 0)
            tb.nb_var.push_back(slack_of_row[r]);
    tb.n_nb = static_cast<int>(tb.nb_var.size());
    for (int a = 0; a < tb.n_nb; ++a) tb.col_of_var[tb.nb_var[a]] = a;

    // Initial tableau: the starting basis is diagonal with entries +1
    // (slack), or the sign of the residual (artificial), so B^-1 N is N with
    // per-row sign flips.
    std::vector<double> row_sign(m, 1.0);
    for (int r = 0; r < m; ++r)
        if (artificial_of_row[r] >= 0 && residual[r] < 0.0) row_sign[r] = -1.0;

    tb.t.assign(static_cast<std::size_t>(m) * tb.n_nb, 0.0);
    for (int a = 0; a < tb.n_nb; ++a) {
        const int v = tb.nb_var[a];
        if (v < n) {
            for (const auto& entry : cols_[v]) tb.T(entry.row, a) = row_sign[entry.row] * entry.coef;
        } else {
            // nonbasic slack of an artificial row
            for (int r = 0; r < m; ++r)
                if (slack_of_row[r] == v) tb.T(r, a) = row_sign[r] * 1.0;
        }
    }

    tb.d.assign(tb.n_nb, 0.0);
    const long max_iter = 20000 + 200L * (m + tb.n_nb);

    // Phase 1: drive the artificial load to zero.
    if (any_artificial_load) {
        for (int v = first_artificial; v < n_total; ++v) tb.cost[v] = 1.0;
        recompute_reduced_costs(tb);
        if (!optimize(tb, max_iter, bland_from_start))
            throw NumericalFailure("simplex: phase 1 unbounded");
        double load = 0.0;
        for (int v = first_artificial; v < n_total; ++v) load += tb.x[v];
        double scale = 1.0;
        for (int r = 0; r < m; ++r) scale = std::max(scale, std::abs(rhs_[r]));
        if (load > 1e-7 * scale) {
            LpResult res;
            res.status = LpStatus::Infeasible;
            return res;
        }
        for (int v = first_artificial; v < n_total; ++v) tb.cost[v] = 0.0;
    }
    // Artificials may not move again.
    for (int v = first_artificial; v < n_total; ++v) tb.ub[v] = 0.0;

    // Phase 2: minimize the negated objective.
    for (int j = 0; j < n; ++j) tb.cost[j] = -obj_[j];
    recompute_reduced_costs(tb);
    if (!optimize(tb, max_iter, bland_from_start)) {
        LpResult res;
        res.status = LpStatus::Unbounded;
        return res;
    }

    // Final feasibility check; catches tableau drift.
    double scale = 1.0;
    for (int r = 0; r < m; ++r) scale = std::max(scale, std::abs(rhs_[r]));
    std::vector<double> activity(m, 0.0);
    for (int j = 0; j < n; ++j) {
        if (tb.x[j] != 0.0)
            for (const auto& entry : cols_[j]) activity[entry.row] += entry.coef * tb.x[j];
        if (tb.x[j] < lb_in[j] - 1e-7 || tb.x[j] > ub_in[j] + 1e-7)
            throw NumericalFailure("simplex: final point violates variable bounds");
    }
    for (int r = 0; r < m; ++r) {
        const double res_r = activity[r] - rhs_[r];
        const bool bad = sense_[r] == RowSense::EQ ? std::abs(res_r) > 1e-7 * scale
                                                   : res_r > 1e-7 * scale;
        if (bad) throw NumericalFailure("simplex: final point violates a row");
    }

    LpResult res;
    res.status = LpStatus::Optimal;
    res.x.assign(tb.x.begin(), tb.x.begin() + n);
    res.objective = 0.0;
    for (int j = 0; j < n; ++j) res.objective += obj_[j] * res.x[j];
    return res;
}

LpResult solve_lp(const MilpInstance& inst, const std::vector<Fixing>& fixings) {
    return LpSolver(inst).solve(fixings);
}

}  // namespace doubletopt
