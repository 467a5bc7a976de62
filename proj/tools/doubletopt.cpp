// Command-line front end: prep (candidates only), solve (full pipeline),
// audit (re-check a results file), report (recompute aggregates).

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "doubletopt/errors.hpp"
#include "doubletopt/io.hpp"

namespace dopt = doubletopt;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string geometry_path;
    std::string field_path;
    std::string out;
    std::vector<std::string> scenario_specs;
    int workers = 0;
    long budget_nodes = 0;
    double budget_time = 0.0;
    double delta_min = 0.0;
    bool timings = false;
};

void add_input_options(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "config file (key = value with sections)");
    cmd->add_option("--geometry", opts.geometry_path, "blocks and buildings (GeoJSON)");
    cmd->add_option("--field", opts.field_path, "groundwater samples (CSV)");
}

dopt::RunConfig resolve_config(const CommonOpts& opts, bool need_scenarios) {
    dopt::RunConfig cfg;
    if (!opts.config_path.empty()) cfg = dopt::read_config(opts.config_path);
    if (!opts.geometry_path.empty()) cfg.geometry_path = opts.geometry_path;
    if (!opts.field_path.empty()) cfg.field_path = opts.field_path;
    if (!opts.out.empty()) cfg.out_dir = opts.out;
    if (opts.workers > 0) cfg.workers = opts.workers;
    if (opts.budget_nodes > 0) cfg.budget.max_nodes = opts.budget_nodes;
    if (opts.budget_time > 0.0) cfg.budget.max_time_s = opts.budget_time;
    if (opts.delta_min > 0.0) cfg.delta_min = opts.delta_min;
    if (opts.timings) cfg.timings = true;

    if (!opts.scenario_specs.empty()) cfg.scenarios.clear();
    for (const auto& spec : opts.scenario_specs) {
        const auto comma = spec.find(',');
        if (comma == std::string::npos)
            throw dopt::ParseError("--scenario expects 'q_min_lps,r_delta', got '" + spec + "'");
        dopt::ScenarioConfig sc;
        sc.q_min = dopt::lps_to_si(std::stod(spec.substr(0, comma)));
        sc.r_delta = std::stod(spec.substr(comma + 1));
        cfg.scenarios.push_back(sc);
    }
    if (cfg.scenarios.empty() && need_scenarios) {
        // Default matrix: q_min 1 and 5 l/s crossed with r_delta 1.5, 2, 3.
        for (double q_min_lps : {1.0, 5.0})
            for (double r_delta : {1.5, 2.0, 3.0})
                cfg.scenarios.push_back(dopt::ScenarioConfig{dopt::lps_to_si(q_min_lps), r_delta});
    }
    for (auto& sc : cfg.scenarios) {
        sc.delta_min = cfg.delta_min;
        sc.min_well_rate = cfg.prep.min_well_rate;
    }
    dopt::apply_env_overrides(cfg);
    if (cfg.geometry_path.empty()) throw dopt::ParseError("no geometry input (--geometry)");
    if (cfg.field_path.empty()) throw dopt::ParseError("no field input (--field)");
    return cfg;
}

void print_failures(const std::vector<dopt::BlockFailure>& failures) {
    for (const auto& f : failures)
        std::cerr << "block " << f.block_id << " failed at " << f.stage << ": " << f.message
                  << "\n";
    if (!failures.empty())
        std::cerr << failures.size() << " block(s) failed; see failures.csv\n";
}

int cmd_prep(const CommonOpts& opts) {
    dopt::RunConfig cfg = resolve_config(opts, false);
    const auto blocks = dopt::read_geometry(cfg.geometry_path);
    const auto field = dopt::read_field(cfg.field_path);
    std::vector<dopt::BlockFailure> failures;
    const auto prepared =
        dopt::prepare_blocks(blocks, field, cfg.prep, cfg.workers, failures);
    const std::string path =
        opts.out.empty() ? std::string("candidates.geojson") : opts.out;
    dopt::write_candidates(prepared, path);
    std::size_t wells = 0, lines = 0;
    for (const auto& pb : prepared) {
        lines += pb.lines.size();
        for (const auto& l : pb.lines) wells += l.wells.size();
    }
    std::cout << "prepared " << prepared.size() << " blocks, " << lines << " doublet lines, "
              << wells << " candidate wells -> " << path << "\n";
    print_failures(failures);
    return 0;
}

int cmd_solve(const CommonOpts& opts) {
    dopt::RunConfig cfg = resolve_config(opts, true);
    const auto blocks = dopt::read_geometry(cfg.geometry_path);
    const auto field = dopt::read_field(cfg.field_path);
    const dopt::RunResult run =
        dopt::run_matrix(blocks, field, cfg.scenarios, cfg.prep, cfg.budget, cfg.workers);
    dopt::write_results(run, cfg.out_dir, cfg.timings);

    for (const auto& sc : run.scenarios) {
        const auto& r = sc.report;
        std::printf("scenario %-14s doublets=%-6ld blocks_with=%-5ld total=%.3f l/s\n",
                    dopt::scenario_tag(sc.scenario).c_str(), r.total_doublets, r.blocks_with,
                    r.total_rate_lps);
    }
    std::cout << "results written to " << cfg.out_dir << "\n";
    print_failures(run.failures);
    return 0;
}

int cmd_audit(const CommonOpts& opts, const std::string& results_path) {
    dopt::RunConfig cfg = resolve_config(opts, false);
    const auto blocks = dopt::read_geometry(cfg.geometry_path);
    const auto field = dopt::read_field(cfg.field_path);
    const dopt::ParsedResults results = dopt::read_results(results_path);

    dopt::ScenarioConfig scenario;
    scenario.q_min = dopt::lps_to_si(results.q_min_lps);
    scenario.r_delta = results.r_delta;
    scenario.delta_min = results.delta_min_m;
    scenario.min_well_rate = cfg.prep.min_well_rate;

    std::vector<dopt::BlockFailure> failures;
    const auto prepared =
        dopt::prepare_blocks(blocks, field, cfg.prep, cfg.workers, failures);
    std::map<std::string, const dopt::PreparedBlock*> prepared_of;
    for (const auto& pb : prepared) prepared_of[pb.block_id] = &pb;

    std::map<std::string, dopt::BlockSolution> parsed_solutions;
    for (const auto& d : results.doublets) {
        auto& sol = parsed_solutions[d.block_id];
        sol.block_id = d.block_id;
        sol.installed.push_back(dopt::InstalledDoublet{d.line_id, d.ext_well_id, d.inj_well_id,
                                                       dopt::lps_to_si(d.q_lps)});
        sol.q_block += dopt::lps_to_si(d.q_lps);
        sol.n_doublet += 1;
    }

    long violations = 0;
    for (const auto& [block_id, sol] : parsed_solutions) {
        const auto it = prepared_of.find(block_id);
        if (it == prepared_of.end()) {
            std::cout << "block " << block_id << ": not found in prepared inputs\n";
            ++violations;
            continue;
        }
        const auto problem = dopt::make_block_problem(block_id, it->second->lines, scenario);
        for (const auto& v : dopt::audit_solution(sol, problem)) {
            std::cout << "block " << block_id << ": " << dopt::to_string(v) << "\n";
            ++violations;
        }
    }
    std::cout << "audit: " << parsed_solutions.size() << " blocks checked, " << violations
              << " violation(s)\n";
    print_failures(failures);
    return violations == 0 ? 0 : 1;
}

// Recomputes one scenario's aggregates from its per-block files and compares
// them against the stored report row. Rates in the files are quantized to
// 0.001 l/s, so sums over N entries may differ by up to N/2 quanta.
bool verify_scenario(const std::string& out_dir, const dopt::ScenarioReport& stored) {
    char tag[64];
    std::snprintf(tag, sizeof tag, "qmin%g_rd%g", stored.q_min_lps, stored.r_delta);
    const auto rows = dopt::read_block_summary(out_dir + "/blocks_" + tag + ".csv");
    const auto results = dopt::read_results(out_dir + "/results_" + std::string(tag) + ".geojson");

    dopt::ScenarioReport rec;
    rec.q_min_lps = stored.q_min_lps;
    rec.r_delta = stored.r_delta;
    long blocks_with_candidates = 0;
    std::map<std::string, double> block_max;
    for (const auto& d : results.doublets) {
        auto [it, inserted] = block_max.try_emplace(d.block_id, d.q_lps);
        if (!inserted) it->second = std::max(it->second, d.q_lps);
    }
    for (const auto& r : rows) {
        rec.total_doublets += r.n_doublet;
        rec.max_doublets_per_block = std::max(rec.max_doublets_per_block, r.n_doublet);
        if (r.n_lines > 0) ++blocks_with_candidates;
        if (r.n_doublet > 0) {
            ++rec.blocks_with;
            rec.total_rate_lps += r.q_block_lps;
            rec.max_block_rate_lps = std::max(rec.max_block_rate_lps, r.q_block_lps);
        } else {
            ++rec.blocks_without;
        }
    }
    if (blocks_with_candidates > 0)
        rec.mean_doublets_per_block =
            static_cast<double>(rec.total_doublets) / static_cast<double>(blocks_with_candidates);
    if (rec.blocks_with > 0) {
        double sum_max = 0.0;
        for (const auto& [id, q] : block_max) sum_max += q;
        rec.avg_max_doublet_rate_lps = sum_max / static_cast<double>(rec.blocks_with);
        rec.mean_block_rate_lps = rec.total_rate_lps / static_cast<double>(rec.blocks_with);
    }
    if (rec.total_doublets > 0)
        rec.mean_doublet_rate_lps =
            rec.total_rate_lps / static_cast<double>(rec.total_doublets);

    // Independent arithmetic invariants on the recomputed aggregates.
    bool ok = true;
    auto check = [&](bool cond, const std::string& what) {
        if (!cond) {
            std::cout << "scenario " << tag << ": " << what << "\n";
            ok = false;
        }
    };
    check(rec.blocks_with + rec.blocks_without == static_cast<long>(rows.size()),
          "blocks_with + blocks_without != blocks");
    check(std::abs(rec.mean_doublet_rate_lps * static_cast<double>(rec.total_doublets) -
                   rec.total_rate_lps) <= 1e-6 * std::max(1.0, rec.total_rate_lps),
          "mean_doublet_rate * total_doublets != total_rate");
    double doublet_sum = 0.0;
    for (const auto& d : results.doublets) doublet_sum += d.q_lps;
    check(std::abs(doublet_sum - rec.total_rate_lps) <=
              5e-4 * static_cast<double>(results.doublets.size() + rows.size() + 2),
          "sum of doublet rates != sum of block rates");

    // Stored vs recomputed, allowing for the 0.001 l/s quantization.
    const double n = static_cast<double>(rows.size() + 2);
    auto close = [&](double a, double b, double tol, const std::string& what) {
        check(std::abs(a - b) <= tol, what + " mismatch (stored vs recomputed)");
    };
    check(stored.total_doublets == rec.total_doublets, "total_doublets");
    check(stored.max_doublets_per_block == rec.max_doublets_per_block, "max_doublets_per_block");
    check(stored.blocks_with == rec.blocks_with, "blocks_with");
    check(stored.blocks_without == rec.blocks_without, "blocks_without");
    close(stored.mean_doublets_per_block, rec.mean_doublets_per_block, 5e-4 * 2, "mean_doublets");
    close(stored.total_rate_lps, rec.total_rate_lps, 5e-4 * n, "total_rate");
    close(stored.max_block_rate_lps, rec.max_block_rate_lps, 1e-3, "max_block_rate");
    close(stored.mean_block_rate_lps, rec.mean_block_rate_lps,
          5e-4 * (n / std::max(1.0, static_cast<double>(rec.blocks_with)) + 2.0),
          "mean_block_rate");
    close(stored.mean_doublet_rate_lps, rec.mean_doublet_rate_lps,
          5e-4 * (n / std::max(1.0, static_cast<double>(rec.total_doublets)) + 2.0),
          "mean_doublet_rate");
    close(stored.avg_max_doublet_rate_lps, rec.avg_max_doublet_rate_lps, 1e-3 * 2,
          "avg_max_doublet_rate");
    return ok;
}

int cmd_report(const std::string& out_dir) {
    const auto reports = dopt::read_reports(out_dir + "/scenario_reports.csv");
    bool all_ok = true;
    for (const auto& stored : reports) {
        const bool ok = verify_scenario(out_dir, stored);
        char tag[64];
        std::snprintf(tag, sizeof tag, "qmin%g_rd%g", stored.q_min_lps, stored.r_delta);
        std::cout << "scenario " << tag << ": " << (ok ? "OK" : "FAILED") << "\n";
        all_ok = all_ok && ok;
    }
    std::cout << "report: " << reports.size() << " scenario(s) "
              << (all_ok ? "verified" : "FAILED") << "\n";
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal sizing and placement of groundwater well doublets per city block"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string results_path;
    std::string report_dir;

    CLI::App* prep = app.add_subcommand("prep", "generate candidate wells only");
    add_input_options(prep, opts);
    prep->add_option("--out", opts.out, "output GeoJSON path (default candidates.geojson)");
    prep->add_option("--workers", opts.workers, "worker threads");

    CLI::App* solve = app.add_subcommand("solve", "full pipeline: prep, optimize, write results");
    add_input_options(solve, opts);
    solve->add_option("--out", opts.out, "output directory");
    solve->add_option("--scenario", opts.scenario_specs,
                      "scenario as 'q_min_lps,r_delta' (repeatable)");
    solve->add_option("--workers", opts.workers, "worker threads");
    solve->add_option("--budget-nodes", opts.budget_nodes, "branch-and-bound node budget");
    solve->add_option("--budget-time", opts.budget_time, "per-block time budget [s]");
    solve->add_option("--delta-min", opts.delta_min, "regulatory internal distance [m]");
    solve->add_flag("--timings", opts.timings, "write measured solve times (breaks reproducibility)");

    CLI::App* audit = app.add_subcommand("audit", "re-check a results file against the inputs");
    add_input_options(audit, opts);
    audit->add_option("results", results_path, "results_<tag>.geojson to audit")->required();
    audit->add_option("--workers", opts.workers, "worker threads");

    CLI::App* report = app.add_subcommand("report", "recompute aggregates from per-block files");
    report->add_option("out_dir", report_dir, "directory written by solve")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (prep->parsed()) return cmd_prep(opts);
        if (solve->parsed()) return cmd_solve(opts);
        if (audit->parsed()) return cmd_audit(opts, results_path);
        if (report->parsed()) return cmd_report(report_dir);
    } catch (const dopt::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
