#pragma once

#include <string>
#include <vector>

#include "doubletopt/lp.hpp"
#include "doubletopt/model.hpp"

namespace doubletopt {

struct Budget {
    long max_nodes = 1'000'000;
    double max_time_s = 60.0;
};

struct InstalledDoublet {
    std::string line_id;
    std::string ext_well_id;
    std::string inj_well_id;
    double q = 0.0;  ///< m3/s
};

struct Certificate {
    bool proven_optimal = false;
    double gap = 0.0;  ///< relative bound gap at termination
};

struct BlockSolution {
    std::string block_id;
    std::vector<InstalledDoublet> installed;
    double q_block = 0.0;  ///< m3/s
    int n_doublet = 0;
    Certificate certificate;
    long node_count = 0;
    double solve_time = 0.0;  ///< s
};

/// Branch-and-bound over the binary variables with an exact LP relaxation
/// bound at each node. Deterministic: most-fractional branching with ties
/// broken by lowest variable index, depth-first dives with best-bound
/// backtracking, first-found tie-breaking among equal incumbents.
///
/// Throws InfeasibleModel when the root relaxation is infeasible (the empty
/// installation is always feasible, so that indicates a construction bug).
BlockSolution solve_milp(const MilpInstance& inst, const Budget& budget = {});

/// One re-checked constraint violation.
struct Violation {
    std::string family;    ///< constraint family, e.g. "drawdown"
    std::string entities;  ///< lines/wells involved
    double residual = 0.0; ///< amount by which the constraint is exceeded
};

std::string to_string(const Violation& v);

/// Independent re-check of a solution against the raw block problem,
/// bypassing the MilpInstance. Empty iff every constraint family holds
/// within 1e-6 absolute (SI units).
std::vector<Violation> audit_solution(const BlockSolution& sol, const BlockProblem& p);

}  // namespace doubletopt
