#pragma once

#include <string>
#include <vector>

#include "doubletopt/field.hpp"
#include "doubletopt/pipeline.hpp"

namespace doubletopt {

/// Everything a run needs, with the documented defaults. File formats are
/// described in docs/formats.md.
struct RunConfig {
    PrepConfig prep;
    std::vector<ScenarioConfig> scenarios;
    double delta_min = 10.0;  ///< regulatory internal distance [m]
    Budget budget;
    int workers = 1;
    bool timings = false;  ///< emit measured solve times instead of 0.000
    std::string geometry_path;
    std::string field_path;
    std::string out_dir = "out";
};

/// GeoJSON FeatureCollection of blocks and buildings. Features need a
/// `role` property ("block" or "building"); blocks also need `block_id`.
/// Buildings attach to every block they intersect. Throws CrsError when
/// every vertex fits in lon/lat ranges, ParseError on malformed input.
std::vector<BlockGeometry> read_geometry(const std::string& path);

/// Delimited text with header columns
/// x,y,K,B,h_n,h_max,grad_h[,v_D],flow_azimuth_deg. Azimuth is degrees
/// clockwise from north (grid north = +y).
GroundwaterField read_field(const std::string& path);

/// Key-value config with [section] headers; see docs/formats.md.
RunConfig read_config(const std::string& path);

/// DOUBLETOPT_WORKERS takes precedence over config and CLI.
void apply_env_overrides(RunConfig& cfg);

/// Filename fragment identifying a scenario, e.g. "qmin1_rd1.5".
std::string scenario_tag(const ScenarioConfig& sc);

/// Writes, per scenario, results_<tag>.geojson and blocks_<tag>.csv, plus
/// scenario_reports.csv and failures.csv. Output bytes depend only on the
/// run content (and the timings switch), so identical runs produce
/// identical files.
void write_results(const RunResult& run, const std::string& out_dir, bool timings = false);

/// Candidate wells per block as a GeoJSON FeatureCollection (prep verb).
void write_candidates(const std::vector<PreparedBlock>& prepared, const std::string& path);

struct ParsedWell {
    std::string block_id, line_id, well_id, role;
    double x = 0.0, y = 0.0, q_lps = 0.0;
};

struct ParsedDoublet {
    std::string block_id, line_id, ext_well_id, inj_well_id;
    double q_lps = 0.0;
};

struct ParsedResults {
    int format_version = 0;
    double q_min_lps = 0.0, r_delta = 0.0, delta_min_m = 0.0;
    std::vector<ParsedWell> wells;
    std::vector<ParsedDoublet> doublets;
};

ParsedResults read_results(const std::string& path);

struct BlockSummaryRow {
    std::string block_id;
    int n_lines = 0;
    int n_doublet = 0;
    double q_block_lps = 0.0;
    bool proven_optimal = false;
    double gap = 0.0;
    long node_count = 0;
    double solve_time_s = 0.0;
};

std::vector<BlockSummaryRow> read_block_summary(const std::string& path);

std::vector<ScenarioReport> read_reports(const std::string& path);

}  // namespace doubletopt
