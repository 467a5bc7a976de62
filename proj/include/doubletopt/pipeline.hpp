#pragma once

#include <optional>
#include <string>
#include <vector>

#include "doubletopt/candidates.hpp"
#include "doubletopt/model.hpp"
#include "doubletopt/solver.hpp"

namespace doubletopt {

/// Aggregate statistics of one scenario over all solved blocks. Rates in
/// l/s here: this type mirrors the published result table and is consumed
/// by the writers as-is.
struct ScenarioReport {
    double q_min_lps = 0.0;
    double r_delta = 0.0;
    long total_doublets = 0;
    int max_doublets_per_block = 0;
    double mean_doublets_per_block = 0.0;   ///< over blocks with candidate lines
    double avg_max_doublet_rate_lps = 0.0;  ///< mean over blocks with doublets of the block max
    double mean_doublet_rate_lps = 0.0;     ///< total rate / installed doublets
    long blocks_with = 0;
    long blocks_without = 0;
    double total_rate_lps = 0.0;
    double max_block_rate_lps = 0.0;
    double mean_block_rate_lps = 0.0;       ///< over blocks with doublets
};

struct BlockFailure {
    std::string block_id;
    std::string stage;  ///< "prep" or "solve"
    std::string message;
};

struct PreparedBlock {
    std::string block_id;
    std::vector<DoubletLine> lines;
};

struct ScenarioResult {
    ScenarioConfig scenario;
    std::vector<BlockSolution> solutions;  ///< ordered by block_id
    ScenarioReport report;
};

struct RunResult {
    std::vector<PreparedBlock> prepared;  ///< ordered by block_id
    std::vector<ScenarioResult> scenarios;
    std::vector<BlockFailure> failures;
};

/// Candidate preparation for every block, dispatched to `workers` threads.
/// Failed blocks become failure records, not exceptions.
std::vector<PreparedBlock> prepare_blocks(const std::vector<BlockGeometry>& blocks,
                                          const GroundwaterAccessor& field,
                                          const PrepConfig& prep, int workers,
                                          std::vector<BlockFailure>& failures);

ScenarioReport aggregate_report(const ScenarioConfig& scenario,
                                const std::vector<PreparedBlock>& prepared,
                                const std::vector<BlockSolution>& solutions);

/// Full pipeline for one scenario: prepare, build, solve, audit, aggregate.
ScenarioResult run_scenario(const std::vector<BlockGeometry>& blocks,
                            const GroundwaterAccessor& field, const ScenarioConfig& scenario,
                            const PrepConfig& prep, const Budget& budget, int workers,
                            std::vector<BlockFailure>& failures);

/// Runs every scenario over the same prepared candidates; preparation does
/// not depend on q_min or r_delta, so it happens once.
RunResult run_matrix(const std::vector<BlockGeometry>& blocks, const GroundwaterAccessor& field,
                     const std::vector<ScenarioConfig>& scenarios, const PrepConfig& prep,
                     const Budget& budget, int workers);

}  // namespace doubletopt
