#include "doubletopt/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "doubletopt/errors.hpp"

namespace doubletopt {

namespace {

constexpr double kIntegralityTol = 1e-6;
constexpr double kGapTol = 1e-6;

struct Node {
    std::vector<Fixing> fixings;
    double parent_bound = 0.0;
    long seq = 0;
};

bool prunable(double bound, double incumbent) {
    return bound <= incumbent + kGapTol * std::max(1.0, std::abs(incumbent));
}

// Most fractional binary; ties by lowest variable index. Returns -1 when all
// binaries are within the integrality tolerance.
int pick_branch_var(const MilpInstance& inst, const std::vector<double>& x,
                    const std::vector<char>& fixed) {
    int best = -1;
    double best_frac = kIntegralityTol;
    for (int j = 0; j < static_cast<int>(inst.vars.size()); ++j) {
        if (inst.vars[j].type != VarType::Binary || fixed[j]) continue;
        const double frac = std::min(x[j] - std::floor(x[j]), std::ceil(x[j]) - x[j]);
        if (frac > best_frac + 1e-15) {
            best_frac = frac;
            best = j;
        }
    }
    return best;
}

// Lowest-index unfixed binary, for the rare case where the relaxation looks
// integral but hard-fixing the rounded point is infeasible.
int pick_any_unfixed(const MilpInstance& inst, const std::vector<char>& fixed) {
    for (int j = 0; j < static_cast<int>(inst.vars.size()); ++j)
        if (inst.vars[j].type == VarType::Binary && !fixed[j] &&
            inst.vars[j].lb != inst.vars[j].ub)
            return j;
    return -1;
}

BlockSolution extract_solution(const MilpInstance& inst, const std::vector<double>& x) {
    BlockSolution sol;
    sol.block_id = inst.block_id;
    const std::size_t n = inst.d_of_line.size();
    for (std::size_t k = 0; k < n; ++k) {
        if (x[inst.d_of_line[k]] < 0.5) continue;
        InstalledDoublet d;
        d.line_id = inst.line_ids[k];
        d.q = x[inst.q_of_line[k]];
        for (std::size_t w = 0; w < inst.ext_of_well[k].size(); ++w) {
            if (x[inst.ext_of_well[k][w]] > 0.5) d.ext_well_id = inst.well_ids[k][w];
            if (x[inst.inj_of_well[k][w]] > 0.5) d.inj_well_id = inst.well_ids[k][w];
        }
        sol.q_block += d.q;
        sol.installed.push_back(std::move(d));
    }
    sol.n_doublet = static_cast<int>(sol.installed.size());
    return sol;
}

}  // namespace

BlockSolution solve_milp(const MilpInstance& inst, const Budget& budget) {
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    LpSolver lp(inst);
    const int n_vars = static_cast<int>(inst.vars.size());

    long node_count = 0;
    bool budget_hit = false;
    // The empty installation is always feasible, so it seeds the incumbent.
    double incumbent_obj = 0.0;
    std::vector<double> incumbent_x(n_vars, 0.0);

    std::vector<Node> open;
    long seq = 0;

    // Fix binaries to the rounded relaxation point and re-solve, so reported
    // rates satisfy every row exactly rather than within the integrality
    // tolerance times a big-M. First-found incumbents win ties.
    auto try_incumbent = [&](const std::vector<Fixing>& base, const std::vector<double>& x) {
        std::vector<Fixing> all = base;
        for (int j = 0; j < n_vars; ++j)
            if (inst.vars[j].type == VarType::Binary)
                all.push_back(Fixing{j, std::round(x[j])});
        const LpResult clean = lp.solve(all);
        if (clean.status != LpStatus::Optimal) return;
        if (clean.objective > incumbent_obj) {
            incumbent_obj = clean.objective;
            incumbent_x = clean.x;
        }
    };

    // Depth-first dive from one node; siblings go to the open list.
    auto dive = [&](Node start) {
        std::vector<Fixing> fixings = std::move(start.fixings);
        while (true) {
            if (node_count >= budget.max_nodes || elapsed() > budget.max_time_s) {
                budget_hit = true;
                Node rest;
                rest.fixings = std::move(fixings);
                rest.parent_bound = start.parent_bound;
                rest.seq = seq++;
                open.push_back(std::move(rest));
                return;
            }
            ++node_count;
            const LpResult rel = lp.solve(fixings);
            if (rel.status == LpStatus::Infeasible) {
                if (fixings.empty())
                    throw InfeasibleModel("block " + inst.block_id +
                                          ": root relaxation infeasible");
                return;
            }
            if (rel.status == LpStatus::Unbounded)
                throw NumericalFailure("block " + inst.block_id + ": unbounded relaxation");
            if (prunable(rel.objective, incumbent_obj)) return;

            std::vector<char> fixed(n_vars, 0);
            for (const auto& f : fixings) fixed[f.var] = 1;
            int branch = pick_branch_var(inst, rel.x, fixed);
            if (branch < 0) {
                try_incumbent(fixings, rel.x);
                if (prunable(rel.objective, incumbent_obj)) return;
                // The rounded point did not reach this node's bound; keep
                // branching so no integer point is cut off.
                branch = pick_any_unfixed(inst, fixed);
                if (branch < 0) return;
            }

            const double frac = rel.x[branch] - std::floor(rel.x[branch]);
            const double first = frac >= 0.5 ? 1.0 : 0.0;
            Node sibling;
            sibling.fixings = fixings;
            sibling.fixings.push_back(Fixing{branch, 1.0 - first});
            sibling.parent_bound = rel.objective;
            sibling.seq = seq++;
            open.push_back(std::move(sibling));
            fixings.push_back(Fixing{branch, first});
        }
    };

    Node root;
    root.parent_bound = std::numeric_limits<double>::infinity();
    root.seq = seq++;
    dive(std::move(root));

    while (!open.empty() && !budget_hit) {
        // Best-bound backtracking; ties go to the most recent node.
        std::size_t best = 0;
        for (std::size_t i = 1; i < open.size(); ++i) {
            if (open[i].parent_bound > open[best].parent_bound ||
                (open[i].parent_bound == open[best].parent_bound &&
                 open[i].seq > open[best].seq))
                best = i;
        }
        Node node = std::move(open[best]);
        open.erase(open.begin() + static_cast<std::ptrdiff_t>(best));
        if (prunable(node.parent_bound, incumbent_obj)) continue;
        dive(std::move(node));
    }

    double best_open_bound = incumbent_obj;
    for (const auto& node : open) best_open_bound = std::max(best_open_bound, node.parent_bound);

    BlockSolution sol = extract_solution(inst, incumbent_x);
    sol.node_count = node_count;
    sol.certificate.proven_optimal = !budget_hit;
    sol.certificate.gap =
        budget_hit ? (best_open_bound - incumbent_obj) / std::max(std::abs(incumbent_obj), 1e-12)
                   : 0.0;
    sol.solve_time = elapsed();
    return sol;
}

std::string to_string(const Violation& v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v.residual);
    return v.family + "[" + v.entities + "] residual=" + buf;
}

std::vector<Violation> audit_solution(const BlockSolution& sol, const BlockProblem& p) {
    constexpr double kTol = 1e-6;  // absolute, SI units
    std::vector<Violation> out;
    auto flag = [&](const char* family, std::string entities, double residual) {
        if (residual > kTol) out.push_back(Violation{family, std::move(entities), residual});
    };

    std::vector<int> line_index_of;  // per installed entry, -1 when unknown
    std::vector<int> installed_of_line(p.lines.size(), -1);

    double q_sum = 0.0;
    for (std::size_t e = 0; e < sol.installed.size(); ++e) {
        const auto& inst = sol.installed[e];
        q_sum += inst.q;
        int k = -1;
        for (std::size_t i = 0; i < p.lines.size(); ++i)
            if (p.lines[i].line_id == inst.line_id) k = static_cast<int>(i);
        line_index_of.push_back(k);
        if (k < 0) {
            out.push_back(Violation{"unknown_line", inst.line_id, 0.0});
            continue;
        }
        if (installed_of_line[k] >= 0)
            out.push_back(Violation{"duplicate_line", inst.line_id, 1.0});
        installed_of_line[k] = static_cast<int>(e);

        const auto& line = p.lines[k];
        const WellCandidate* ext = nullptr;
        const WellCandidate* inj = nullptr;
        for (const auto& w : line.wells) {
            if (w.well_id == inst.ext_well_id) ext = &w;
            if (w.well_id == inst.inj_well_id) inj = &w;
        }
        if (!ext || !inj) {
            out.push_back(Violation{"unknown_well",
                                    inst.ext_well_id + "," + inst.inj_well_id, 0.0});
            continue;
        }

        flag("install_cap", inst.line_id, inst.q - p.q_max[k]);
        flag("min_rate", inst.line_id, p.scenario.q_min - inst.q);
        flag("drawdown", ext->well_id, inst.q - ext->limits.q_drawdown);
        flag("upconing", inj->well_id, inst.q - inj->limits.q_upconing);

        const double dist = std::hypot(inj->x - ext->x, inj->y - ext->y);
        const double alpha_pair = 0.5 * (inj->limits.alpha + ext->limits.alpha);
        flag("breakthrough", inj->well_id + "," + ext->well_id, inst.q - alpha_pair * dist);
        flag("pair_distance", inj->well_id + "," + ext->well_id, p.scenario.delta_min - dist);
        if (!(inj->s > ext->s))
            out.push_back(Violation{"pair_order", inj->well_id + "," + ext->well_id,
                                    ext->s - inj->s});
    }

    // Pairwise checks over installed lines.
    for (std::size_t a = 0; a < sol.installed.size(); ++a) {
        const int k = line_index_of[a];
        if (k < 0) continue;
        for (std::size_t b = a + 1; b < sol.installed.size(); ++b) {
            const int q = line_index_of[b];
            if (q < 0 || q == k) continue;
            const double dist = p.pair_dist(k, q);
            const auto& lk = p.lines[k];
            const auto& lq = p.lines[q];
            flag("line_spacing", lk.line_id + "," + lq.line_id,
                 p.scenario.r_delta * p.scenario.delta_min - dist);
            const bool triggered = dist < p.scenario.r_delta * 0.5 * (lk.chi + lq.chi);
            if (triggered) {
                if (!(lk.alpha_med > 0.0) || !(lq.alpha_med > 0.0)) {
                    out.push_back(
                        Violation{"interference_degenerate", lk.line_id + "," + lq.line_id, 1.0});
                } else {
                    // Units: meters on both sides.
                    flag("interference", lk.line_id + "," + lq.line_id,
                         sol.installed[a].q / lk.alpha_med + sol.installed[b].q / lq.alpha_med -
                             (2.0 / p.scenario.r_delta) * dist);
                }
            }
        }
    }

    if (std::abs(q_sum - sol.q_block) > 1e-9 * std::max(1.0, std::abs(sol.q_block)))
        out.push_back(Violation{"q_block_sum", sol.block_id, std::abs(q_sum - sol.q_block)});
    return out;
}

}  // namespace doubletopt
