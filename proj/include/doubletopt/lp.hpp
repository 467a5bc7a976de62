#pragma once

#include <vector>

#include "doubletopt/model.hpp"

namespace doubletopt {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double objective = 0.0;          ///< maximization value
    std::vector<double> x;           ///< one value per instance variable
};

/// Hard assignment of a (binary) variable, applied as lb = ub = value.
struct Fixing {
    int var = 0;
    double value = 0.0;
};

/// Bounded-variable two-phase primal simplex over the rows of one
/// MilpInstance with binaries relaxed to [0, 1]. The sparse column
/// structure is built once; each solve starts cold from the given fixings,
/// so concurrent solves on one instance are safe.
///
/// Pivoting uses the Dantzig rule and falls back to Bland's rule after a
/// stretch of degenerate steps, which guarantees termination. A solve whose
/// final point fails the 1e-7-scaled feasibility check is retried once from
/// scratch and then reported as NumericalFailure.
class LpSolver {
  public:
    explicit LpSolver(const MilpInstance& inst);

    LpResult solve(const std::vector<Fixing>& fixings) const;

    int rows() const { return static_cast<int>(sense_.size()); }

  private:
    struct ColEntry {
        int row;
        double coef;
    };

    LpResult run_once(const std::vector<double>& lb, const std::vector<double>& ub,
                      bool bland_from_start) const;

    int n_ = 0;  // structural variables
    std::vector<std::vector<ColEntry>> cols_;
    std::vector<RowSense> sense_;
    std::vector<double> rhs_;
    std::vector<double> obj_;  // maximize
    std::vector<double> lb_, ub_;
};

/// One-shot convenience wrapper around LpSolver.
LpResult solve_lp(const MilpInstance& inst, const std::vector<Fixing>& fixings = {});

}  // namespace doubletopt
