#include "doubletopt/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace doubletopt {

double compute_q_max(const DoubletLine& line) {
    double best_d = 0.0, best_f = 0.0;
    for (const auto& w : line.wells) {
        best_d = std::max(best_d, w.limits.q_drawdown);
        best_f = std::max(best_f, w.limits.q_upconing);
    }
    return std::min(best_d, best_f);
}

bool pair_admissible(const WellCandidate& inj, const WellCandidate& ext, double delta_min) {
    if (!(inj.s > ext.s)) return false;  // injection strictly downstream
    const double dist = std::hypot(inj.x - ext.x, inj.y - ext.y);
    return dist >= delta_min;
}

BlockProblem make_block_problem(std::string block_id, std::vector<DoubletLine> lines,
                                const ScenarioConfig& scenario) {
    BlockProblem p;
    p.block_id = std::move(block_id);
    p.lines = std::move(lines);
    p.scenario = scenario;
    const std::size_t n = p.lines.size();
    p.q_max.resize(n);
    p.pair_dist = PairMatrix(n);
    p.m_param = PairMatrix(n);
    for (std::size_t k = 0; k < n; ++k) p.q_max[k] = compute_q_max(p.lines[k]);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t q = k + 1; q < n; ++q) {
            const double dist = std::abs(p.lines[k].t - p.lines[q].t);
            p.pair_dist(k, q) = dist;
            p.pair_dist(q, k) = dist;
            const double ak = p.lines[k].alpha_med, aq = p.lines[q].alpha_med;
            if (ak > 0.0 && aq > 0.0) {
                const double m = p.q_max[k] / ak + p.q_max[q] / aq;
                p.m_param(k, q) = m;
                p.m_param(q, k) = m;
            }
        }
    }
    return p;
}

namespace {

std::string pair_tag(const char* family, const std::string& a, const std::string& b) {
    return std::string(family) + "[" + a + "," + b + "]";
}

}  // namespace

MilpInstance build_milp(const BlockProblem& p) {
    MilpInstance inst;
    inst.block_id = p.block_id;
    const std::size_t n = p.lines.size();
    const double q_min = p.scenario.q_min;
    const double r_delta = p.scenario.r_delta;
    const double delta_min = p.scenario.delta_min;

    // Interference trigger: lines closer than r_delta times the mean line
    // length interact hydraulically.
    auto interference_triggered = [&](std::size_t k, std::size_t q) {
        return p.pair_dist(k, q) < r_delta * 0.5 * (p.lines[k].chi + p.lines[q].chi);
    };

    // Presolve. A doublet below the minimum rate can never be installed; a
    // line with zero median breakthrough parameter cannot carry an
    // interference row (any pumping recirculates in stagnant groundwater).
    inst.line_fixed_zero.assign(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
        if (p.q_max[k] < q_min) inst.line_fixed_zero[k] = 1;
        if (!(p.lines[k].alpha_med > 0.0)) {
            for (std::size_t q = 0; q < n && !inst.line_fixed_zero[k]; ++q) {
                if (q == k) continue;
                if (interference_triggered(k, q)) {
                    inst.line_fixed_zero[k] = 1;
                    inst.warnings.push_back("line " + p.lines[k].line_id +
                                            ": zero breakthrough parameter within interference "
                                            "range, fixed to not installed");
                }
            }
        }
    }

    // Variables: d per line, q per line, then d_ext/d_inj per well.
    auto add_var = [&](const std::string& name, VarType type, double lb, double ub) {
        inst.vars.push_back(Variable{name, type, lb, ub});
        inst.objective.push_back(0.0);
        return static_cast<int>(inst.vars.size()) - 1;
    };
    inst.d_of_line.resize(n);
    inst.q_of_line.resize(n);
    inst.ext_of_well.resize(n);
    inst.inj_of_well.resize(n);
    inst.line_ids.resize(n);
    inst.well_ids.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const bool fixed = inst.line_fixed_zero[k];
        inst.line_ids[k] = p.lines[k].line_id;
        inst.d_of_line[k] = add_var("d[" + p.lines[k].line_id + "]", VarType::Binary, 0.0,
                                    fixed ? 0.0 : 1.0);
    }
    for (std::size_t k = 0; k < n; ++k) {
        const bool fixed = inst.line_fixed_zero[k];
        inst.q_of_line[k] = add_var("q[" + p.lines[k].line_id + "]", VarType::Continuous, 0.0,
                                    fixed ? 0.0 : p.q_max[k]);
        inst.objective[inst.q_of_line[k]] = 1.0;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const bool fixed = inst.line_fixed_zero[k];
        for (const auto& w : p.lines[k].wells) {
            inst.well_ids[k].push_back(w.well_id);
            inst.ext_of_well[k].push_back(
                add_var("dext[" + w.well_id + "]", VarType::Binary, 0.0, fixed ? 0.0 : 1.0));
            inst.inj_of_well[k].push_back(
                add_var("dinj[" + w.well_id + "]", VarType::Binary, 0.0, fixed ? 0.0 : 1.0));
        }
    }

    auto add_row = [&](RowSense sense, double rhs, std::vector<RowTerm> terms, std::string tag) {
        inst.rows.push_back(Row{sense, rhs, std::move(terms), std::move(tag)});
    };

    for (std::size_t k = 0; k < n; ++k) {
        if (inst.line_fixed_zero[k]) continue;
        const auto& line = p.lines[k];
        const std::size_t w = line.wells.size();
        const int d = inst.d_of_line[k];
        const int q = inst.q_of_line[k];
        const double qmax = p.q_max[k];

        // Only installed doublets can be operated.
        add_row(RowSense::LE, 0.0, {{q, 1.0}, {d, -qmax}}, "install_cap[" + line.line_id + "]");
        // Installed doublets pump at least q_min.
        add_row(RowSense::LE, 0.0, {{d, q_min}, {q, -1.0}}, "min_rate[" + line.line_id + "]");

        // Exactly one injection and one extraction well when installed.
        std::vector<RowTerm> inj_sum, ext_sum;
        for (std::size_t i = 0; i < w; ++i) inj_sum.push_back({inst.inj_of_well[k][i], 1.0});
        inj_sum.push_back({d, -1.0});
        add_row(RowSense::EQ, 0.0, std::move(inj_sum), "one_inj[" + line.line_id + "]");
        for (std::size_t j = 0; j < w; ++j) ext_sum.push_back({inst.ext_of_well[k][j], 1.0});
        ext_sum.push_back({d, -1.0});
        add_row(RowSense::EQ, 0.0, std::move(ext_sum), "one_ext[" + line.line_id + "]");

        // Selected extraction wells cap the rate at their drawdown threshold.
        for (std::size_t j = 0; j < w; ++j) {
            add_row(RowSense::LE, qmax,
                    {{q, 1.0}, {inst.ext_of_well[k][j], qmax - line.wells[j].limits.q_drawdown}},
                    "drawdown[" + line.wells[j].well_id + "]");
        }
        // Selected injection wells cap the rate at their upconing threshold.
        for (std::size_t i = 0; i < w; ++i) {
            add_row(RowSense::LE, qmax,
                    {{q, 1.0}, {inst.inj_of_well[k][i], qmax - line.wells[i].limits.q_upconing}},
                    "upconing[" + line.wells[i].well_id + "]");
        }
        // Internal breakthrough cap for admissible pairs; exclusion rows for
        // the rest (too close, or injection not downstream).
        for (std::size_t i = 0; i < w; ++i) {
            for (std::size_t j = 0; j < w; ++j) {
                const auto& inj = line.wells[i];
                const auto& ext = line.wells[j];
                if (pair_admissible(inj, ext, delta_min)) {
                    const double alpha_pair = 0.5 * (inj.limits.alpha + ext.limits.alpha);
                    const double dist = std::hypot(inj.x - ext.x, inj.y - ext.y);
                    add_row(RowSense::LE, alpha_pair * dist + 2.0 * qmax,
                            {{q, 1.0},
                             {inst.ext_of_well[k][j], qmax},
                             {inst.inj_of_well[k][i], qmax}},
                            pair_tag("breakthrough", inj.well_id, ext.well_id));
                } else {
                    add_row(RowSense::LE, 1.0,
                            {{inst.inj_of_well[k][i], 1.0}, {inst.ext_of_well[k][j], 1.0}},
                            pair_tag("pair_excluded", inj.well_id, ext.well_id));
                }
            }
        }
    }

    // Line-pair constraints.
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t q = k + 1; q < n; ++q) {
            if (inst.line_fixed_zero[k] || inst.line_fixed_zero[q]) continue;
            const double dist = p.pair_dist(k, q);
            if (interference_triggered(k, q)) {
                const double m = p.m_param(k, q);
                add_row(RowSense::LE, (2.0 / r_delta) * dist + 2.0 * m,
                        {{inst.q_of_line[k], 1.0 / p.lines[k].alpha_med},
                         {inst.q_of_line[q], 1.0 / p.lines[q].alpha_med},
                         {inst.d_of_line[k], m},
                         {inst.d_of_line[q], m}},
                        pair_tag("interference", p.lines[k].line_id, p.lines[q].line_id));
            }
            if (dist < r_delta * delta_min) {
                add_row(RowSense::LE, 1.0,
                        {{inst.d_of_line[k], 1.0}, {inst.d_of_line[q], 1.0}},
                        pair_tag("line_spacing", p.lines[k].line_id, p.lines[q].line_id));
            }
        }
    }
    return inst;
}

std::string dump_milp(const MilpInstance& inst) {
    std::ostringstream os;
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    os << "milp-instance format_version=1\n";
    os << "block " << inst.block_id << "\n";
    os << "vars " << inst.vars.size() << "\n";
    for (std::size_t i = 0; i < inst.vars.size(); ++i) {
        const auto& v = inst.vars[i];
        os << "v " << i << " " << v.name << " " << (v.type == VarType::Binary ? "B" : "C") << " "
           << num(v.lb) << " " << num(v.ub) << "\n";
    }
    os << "maximize\n";
    for (std::size_t i = 0; i < inst.objective.size(); ++i)
        if (inst.objective[i] != 0.0) os << "o " << i << " " << num(inst.objective[i]) << "\n";
    os << "rows " << inst.rows.size() << "\n";
    for (std::size_t r = 0; r < inst.rows.size(); ++r) {
        const auto& row = inst.rows[r];
        os << "r " << r << " " << (row.sense == RowSense::LE ? "LE" : "EQ") << " " << num(row.rhs)
           << " " << row.tag << " :";
        for (const auto& term : row.terms) os << " " << term.var << "*" << num(term.coef);
        os << "\n";
    }
    return os.str();
}

}  // namespace doubletopt
