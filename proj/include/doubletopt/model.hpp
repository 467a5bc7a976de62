#pragma once

#include <string>
#include <vector>

#include "doubletopt/candidates.hpp"

namespace doubletopt {

/// Scenario parameters. Rates in m3/s, distances in m.
struct ScenarioConfig {
    double q_min = 1e-3;          ///< minimum rate of an installed doublet
    double r_delta = 2.0;         ///< external-internal well distance ratio
    double delta_min = 10.0;      ///< regulatory minimum internal distance
    double min_well_rate = 1e-3;  ///< candidate filter applied during prep
};

/// Square symmetric matrix of line-pair values.
class PairMatrix {
  public:
    PairMatrix() = default;
    explicit PairMatrix(std::size_t n) : n_(n), v_(n * n, 0.0) {}
    double operator()(std::size_t k, std::size_t p) const { return v_[k * n_ + p]; }
    double& operator()(std::size_t k, std::size_t p) { return v_[k * n_ + p]; }
    std::size_t size() const { return n_; }

  private:
    std::size_t n_ = 0;
    std::vector<double> v_;
};

/// The full per-block optimization input: doublet lines plus the derived
/// bounds and pairwise parameters.
struct BlockProblem {
    std::string block_id;
    std::vector<DoubletLine> lines;
    std::vector<double> q_max;  ///< per line, m3/s
    PairMatrix pair_dist;       ///< |t_k - t_p| between line supports [m]
    PairMatrix m_param;         ///< q_max_k/alpha_med_k + q_max_p/alpha_med_p [m]
    ScenarioConfig scenario;
};

/// Upper rate bound of one line: min over roles of the best candidate
/// (every candidate may serve either role).
double compute_q_max(const DoubletLine& line);

BlockProblem make_block_problem(std::string block_id, std::vector<DoubletLine> lines,
                                const ScenarioConfig& scenario);

/// Ordered well pair admissibility: injection strictly downstream of
/// extraction and at least delta_min apart.
bool pair_admissible(const WellCandidate& inj, const WellCandidate& ext, double delta_min);

enum class VarType { Binary, Continuous };
enum class RowSense { LE, EQ };

struct Variable {
    std::string name;
    VarType type = VarType::Continuous;
    double lb = 0.0, ub = 0.0;
};

struct RowTerm {
    int var = 0;
    double coef = 0.0;
};

struct Row {
    RowSense sense = RowSense::LE;
    double rhs = 0.0;
    std::vector<RowTerm> terms;
    std::string tag;  ///< constraint family + entities, e.g. "install_cap[L000]"
};

/// The assembled mixed-integer linear program. Objective is maximization of
/// the total rate (all-ones over the q variables).
struct MilpInstance {
    std::string block_id;
    std::vector<Variable> vars;
    std::vector<double> objective;  // aligned with vars
    std::vector<Row> rows;

    // Index maps into vars.
    std::vector<int> d_of_line;               // d_k
    std::vector<int> q_of_line;               // q_k
    std::vector<std::vector<int>> ext_of_well;  // d_ext per line, per well (s order)
    std::vector<std::vector<int>> inj_of_well;  // d_inj per line, per well

    std::vector<std::string> line_ids;
    std::vector<std::vector<std::string>> well_ids;
    std::vector<char> line_fixed_zero;  // presolve: d_k = 0
    std::vector<std::string> warnings;
};

/// Assemble variables, objective and all constraint rows from the block
/// problem. Lines whose q_max falls below q_min, and lines with a zero
/// median breakthrough parameter that sit close enough to a neighbor to
/// trigger an interference row, are presolve-fixed to "not installed".
MilpInstance build_milp(const BlockProblem& p);

/// Canonical plain-text dump (17 significant digits), for debugging and
/// cross-checking. Documented in docs/formats.md.
std::string dump_milp(const MilpInstance& inst);

}  // namespace doubletopt
