#pragma once

#include <string>
#include <vector>

#include "doubletopt/model.hpp"

namespace doubletopt {
namespace oracle {

/// Guard on the enumeration size: the product over lines of
/// (1 + admissible ordered pairs) must stay within this budget.
struct EnumerationBound {
    int max_lines = 3;
    int max_wells_per_line = 4;
    double max_combinations = 1e7;
};

/// One per-line choice in the optimum: not installed (ext = inj = -1) or a
/// concrete well pair with its rate.
struct LineChoice {
    int ext = -1;  ///< well index within the line, s order
    int inj = -1;
    double q = 0.0;
};

struct BruteForceResult {
    double objective = 0.0;  ///< m3/s
    std::vector<LineChoice> assignment;  ///< one entry per line
};

/// Exhaustive reference optimum for small instances, used only by tests.
///
/// Enumerates every combination of per-line pair choices, solves the
/// residual continuous problem by enumerating polytope vertices (an
/// algorithm independent of the simplex in the production path), and keeps
/// the best. Lines follow the production model's documented degeneracy rule:
/// a line with zero median breakthrough parameter inside another line's
/// interference range cannot be installed.
///
/// Throws TooLarge when the instance exceeds the bound.
///
/// `apply_interference = false` drops the doublet-spacing couplings, which
/// upper-bounds the coupled optimum; tests use it to check the relaxation
/// ordering.
BruteForceResult brute_force_optimum(const BlockProblem& p, const EnumerationBound& bound = {},
                                     bool apply_interference = true);

}  // namespace oracle
}  // namespace doubletopt
