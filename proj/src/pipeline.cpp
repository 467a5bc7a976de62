#include "doubletopt/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include "doubletopt/errors.hpp"

namespace doubletopt {

namespace {

// Index-parallel dispatch; results are written by index so the outcome is
// independent of scheduling.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
    workers = std::max(1, workers);
    if (workers == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int n_threads = static_cast<int>(std::min<std::size_t>(workers, count));
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

std::vector<PreparedBlock> prepare_blocks(const std::vector<BlockGeometry>& blocks,
                                          const GroundwaterAccessor& field,
                                          const PrepConfig& prep, int workers,
                                          std::vector<BlockFailure>& failures) {
    std::vector<std::size_t> order(blocks.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return blocks[a].block_id < blocks[b].block_id;
    });

    std::vector<std::optional<PreparedBlock>> slots(blocks.size());
    std::vector<std::optional<BlockFailure>> errors(blocks.size());
    parallel_for(blocks.size(), workers, [&](std::size_t i) {
        const auto& g = blocks[order[i]];
        try {
            slots[i] = PreparedBlock{g.block_id, adaptive_candidates(g, field, prep)};
        } catch (const Error& e) {
            errors[i] = BlockFailure{g.block_id, "prep", e.what()};
        }
    });

    std::vector<PreparedBlock> prepared;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (slots[i]) prepared.push_back(std::move(*slots[i]));
        if (errors[i]) failures.push_back(std::move(*errors[i]));
    }
    return prepared;
}

ScenarioReport aggregate_report(const ScenarioConfig& scenario,
                                const std::vector<PreparedBlock>& prepared,
                                const std::vector<BlockSolution>& solutions) {
    ScenarioReport rep;
    rep.q_min_lps = si_to_lps(scenario.q_min);
    rep.r_delta = scenario.r_delta;

    std::size_t blocks_with_candidates = 0;
    {
        // Only count prepared blocks that were actually solved.
        std::vector<std::string> solved_ids;
        solved_ids.reserve(solutions.size());
        for (const auto& sol : solutions) solved_ids.push_back(sol.block_id);
        for (const auto& pb : prepared)
            if (!pb.lines.empty() &&
                std::find(solved_ids.begin(), solved_ids.end(), pb.block_id) != solved_ids.end())
                ++blocks_with_candidates;
    }

    double sum_block_max = 0.0;
    for (const auto& sol : solutions) {
        const double q_block = si_to_lps(sol.q_block);
        rep.total_doublets += sol.n_doublet;
        rep.max_doublets_per_block = std::max(rep.max_doublets_per_block, sol.n_doublet);
        if (sol.n_doublet > 0) {
            ++rep.blocks_with;
            rep.total_rate_lps += q_block;
            rep.max_block_rate_lps = std::max(rep.max_block_rate_lps, q_block);
            double block_max = 0.0;
            for (const auto& d : sol.installed) block_max = std::max(block_max, si_to_lps(d.q));
            sum_block_max += block_max;
        } else {
            ++rep.blocks_without;
        }
    }
    if (blocks_with_candidates > 0)
        rep.mean_doublets_per_block =
            static_cast<double>(rep.total_doublets) / static_cast<double>(blocks_with_candidates);
    if (rep.blocks_with > 0) {
        rep.avg_max_doublet_rate_lps = sum_block_max / static_cast<double>(rep.blocks_with);
        rep.mean_block_rate_lps = rep.total_rate_lps / static_cast<double>(rep.blocks_with);
    }
    if (rep.total_doublets > 0)
        rep.mean_doublet_rate_lps = rep.total_rate_lps / static_cast<double>(rep.total_doublets);
    return rep;
}

namespace {

ScenarioResult solve_scenario(const std::vector<PreparedBlock>& prepared,
                              const ScenarioConfig& scenario, const Budget& budget, int workers,
                              std::vector<BlockFailure>& failures) {
    ScenarioResult result;
    result.scenario = scenario;

    std::vector<std::optional<BlockSolution>> slots(prepared.size());
    std::vector<std::optional<BlockFailure>> errors(prepared.size());
    parallel_for(prepared.size(), workers, [&](std::size_t i) {
        const auto& pb = prepared[i];
        try {
            const BlockProblem problem = make_block_problem(pb.block_id, pb.lines, scenario);
            const MilpInstance inst = build_milp(problem);
            BlockSolution sol = solve_milp(inst, budget);
            const auto violations = audit_solution(sol, problem);
            if (!violations.empty())
                throw Error("audit failed: " + to_string(violations.front()));
            slots[i] = std::move(sol);
        } catch (const Error& e) {
            errors[i] = BlockFailure{pb.block_id, "solve", e.what()};
        }
    });

    for (std::size_t i = 0; i < prepared.size(); ++i) {
        if (slots[i]) result.solutions.push_back(std::move(*slots[i]));
        if (errors[i]) failures.push_back(std::move(*errors[i]));
    }
    result.report = aggregate_report(scenario, prepared, result.solutions);
    return result;
}

}  // namespace

ScenarioResult run_scenario(const std::vector<BlockGeometry>& blocks,
                            const GroundwaterAccessor& field, const ScenarioConfig& scenario,
                            const PrepConfig& prep, const Budget& budget, int workers,
                            std::vector<BlockFailure>& failures) {
    const auto prepared = prepare_blocks(blocks, field, prep, workers, failures);
    return solve_scenario(prepared, scenario, budget, workers, failures);
}

RunResult run_matrix(const std::vector<BlockGeometry>& blocks, const GroundwaterAccessor& field,
                     const std::vector<ScenarioConfig>& scenarios, const PrepConfig& prep,
                     const Budget& budget, int workers) {
    RunResult run;
    run.prepared = prepare_blocks(blocks, field, prep, workers, run.failures);
    for (const auto& scenario : scenarios)
        run.scenarios.push_back(
            solve_scenario(run.prepared, scenario, budget, workers, run.failures));
    return run;
}

}  // namespace doubletopt
