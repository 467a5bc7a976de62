#include "doubletopt/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "doubletopt/errors.hpp"

namespace doubletopt {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fmt3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string fmtg(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

double parse_double(const std::string& token, const std::string& where) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0')
        throw ParseError(where + ": not a number: '" + token + "'");
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

Polygon polygon_from_geojson(const json& coords, const std::string& where) {
    if (!coords.is_array() || coords.empty())
        throw ParseError(where + ": Polygon coordinates must be a non-empty array of rings");
    std::vector<std::vector<std::pair<double, double>>> rings;
    for (const auto& ring : coords) {
        if (!ring.is_array() || ring.size() < 4)
            throw ParseError(where + ": ring must have at least 4 positions");
        std::vector<std::pair<double, double>> pts;
        for (const auto& pos : ring) {
            if (!pos.is_array() || pos.size() < 2)
                throw ParseError(where + ": position must be [x, y]");
            pts.emplace_back(pos[0].get<double>(), pos[1].get<double>());
        }
        rings.push_back(std::move(pts));
    }
    std::vector<std::vector<std::pair<double, double>>> holes(rings.begin() + 1, rings.end());
    return make_polygon(rings.front(), holes);
}

std::string id_to_string(const json& v, const std::string& where) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw ParseError(where + ": block_id must be a string or integer");
}

}  // namespace

std::vector<BlockGeometry> read_geometry(const std::string& path) {
    json doc;
    try {
        doc = json::parse(slurp(path));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    if (!doc.contains("features") || !doc["features"].is_array())
        throw ParseError(path + ": expected a FeatureCollection with features");

    std::vector<BlockGeometry> blocks;
    std::map<std::string, std::size_t> index_of;
    std::vector<Polygon> buildings;

    bool any_vertex = false;
    bool all_geographic = true;

    const auto& features = doc["features"];
    for (std::size_t i = 0; i < features.size(); ++i) {
        const std::string where = path + ": feature " + std::to_string(i);
        const auto& f = features[i];
        if (!f.contains("geometry") || !f["geometry"].is_object())
            throw ParseError(where + ": missing geometry");
        const auto& geom = f["geometry"];
        if (geom.value("type", "") != "Polygon")
            throw ParseError(where + ": only Polygon geometries are supported");
        const Polygon poly = polygon_from_geojson(geom["coordinates"], where);

        for (const auto& p : poly.outer()) {
            any_vertex = true;
            if (std::abs(p.x()) > 180.0 || std::abs(p.y()) > 90.0) all_geographic = false;
        }

        if (!f.contains("properties") || !f["properties"].is_object())
            throw ParseError(where + ": missing properties");
        const auto& props = f["properties"];
        const std::string role = props.value("role", "");
        if (role == "block") {
            if (!props.contains("block_id")) throw ParseError(where + ": block missing block_id");
            const std::string id = id_to_string(props["block_id"], where);
            if (index_of.count(id)) throw ParseError(where + ": duplicate block_id " + id);
            index_of[id] = blocks.size();
            blocks.push_back(BlockGeometry{id, poly, {}});
        } else if (role == "building") {
            buildings.push_back(poly);
        } else {
            throw ParseError(where + ": role must be 'block' or 'building'");
        }
    }

    if (any_vertex && all_geographic)
        throw CrsError(path + ": coordinates look geographic (lon/lat); " +
                       "a projected metric CRS is required");

    // Buildings attach to every block they intersect.
    for (const auto& b : buildings)
        for (auto& block : blocks)
            if (bg::intersects(b, block.boundary)) block.buildings.push_back(b);

    std::sort(blocks.begin(), blocks.end(),
              [](const BlockGeometry& a, const BlockGeometry& b) { return a.block_id < b.block_id; });
    return blocks;
}

GroundwaterField read_field(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);

    std::string line;
    std::vector<std::string> header;
    std::vector<FieldSample> samples;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::string where = path + ":" + std::to_string(line_no);
        auto tokens = split_csv(line);
        if (header.empty()) {
            header = tokens;
            continue;
        }
        if (tokens.size() != header.size())
            throw ParseError(where + ": expected " + std::to_string(header.size()) + " columns");
        std::map<std::string, double> row;
        for (std::size_t c = 0; c < header.size(); ++c)
            row[header[c]] = parse_double(tokens[c], where + " column " + header[c]);

        auto need = [&](const char* name) {
            auto it = row.find(name);
            if (it == row.end()) throw ParseError(path + ": missing column " + name);
            return it->second;
        };
        FieldSample s;
        s.x = need("x");
        s.y = need("y");
        s.data.conductivity = need("K");
        s.data.thickness = need("B");
        s.data.level_natural = need("h_n");
        s.data.level_max = need("h_max");
        s.data.gradient = need("grad_h");
        if (row.count("v_D")) s.data.darcy_velocity = row["v_D"];
        const double az = need("flow_azimuth_deg") * M_PI / 180.0;
        s.data.flow_dir = Vec2{std::sin(az), std::cos(az)};
        try {
            validate(s.data, where.c_str());
        } catch (const ValidationError&) {
            throw;
        }
        samples.push_back(std::move(s));
    }
    if (samples.empty()) throw ParseError(path + ": field has no samples");
    return GroundwaterField(std::move(samples));
}

namespace {

bool parse_bool(const std::string& v, const std::string& where) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ParseError(where + ": expected a boolean, got '" + v + "'");
}

}  // namespace

RunConfig read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);

    RunConfig cfg;
    std::vector<std::pair<double, double>> scenario_rows;  // q_min_lps, r_delta
    std::string section;
    std::string line;
    long line_no = 0;
    double min_well_rate_lps = 1.0;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t");
        line = line.substr(first, last - first + 1);
        if (line.empty() || line[0] == '#') continue;
        const std::string where = path + ":" + std::to_string(line_no);

        if (line.front() == '[' && line.back() == ']') {
            section = line.substr(1, line.size() - 2);
            if (section == "scenario") scenario_rows.emplace_back(1.0, 2.0);
            else if (section != "prep" && section != "solve" && section != "paths")
                throw ParseError(where + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(where + ": expected key = value");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t");
            return s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (section.empty()) {
            if (key == "format_version") {
                if (value != "1") throw ParseError(where + ": unsupported format_version " + value);
            } else {
                throw ParseError(where + ": unknown key " + key);
            }
        } else if (section == "prep") {
            if (key == "buffer_m") cfg.prep.buffer_m = parse_double(value, where);
            else if (key == "initial_spacing_m") cfg.prep.initial_spacing = parse_double(value, where);
            else if (key == "spacing_step_m") cfg.prep.spacing_step = parse_double(value, where);
            else if (key == "max_wells") cfg.prep.max_wells = static_cast<int>(parse_double(value, where));
            else if (key == "min_well_rate_lps") min_well_rate_lps = parse_double(value, where);
            else throw ParseError(where + ": unknown key " + key);
        } else if (section == "solve") {
            if (key == "delta_min_m") cfg.delta_min = parse_double(value, where);
            else if (key == "budget_nodes") cfg.budget.max_nodes = static_cast<long>(parse_double(value, where));
            else if (key == "budget_time_s") cfg.budget.max_time_s = parse_double(value, where);
            else if (key == "workers") cfg.workers = static_cast<int>(parse_double(value, where));
            else if (key == "timings") cfg.timings = parse_bool(value, where);
            else throw ParseError(where + ": unknown key " + key);
        } else if (section == "paths") {
            if (key == "geometry") cfg.geometry_path = value;
            else if (key == "field") cfg.field_path = value;
            else if (key == "out_dir") cfg.out_dir = value;
            else throw ParseError(where + ": unknown key " + key);
        } else {  // scenario
            if (scenario_rows.empty()) throw ParseError(where + ": key outside [scenario]");
            if (key == "q_min_lps") scenario_rows.back().first = parse_double(value, where);
            else if (key == "r_delta") scenario_rows.back().second = parse_double(value, where);
            else throw ParseError(where + ": unknown key " + key);
        }
    }

    cfg.prep.min_well_rate = lps_to_si(min_well_rate_lps);
    for (const auto& [q_min_lps, r_delta] : scenario_rows) {
        ScenarioConfig sc;
        sc.q_min = lps_to_si(q_min_lps);
        sc.r_delta = r_delta;
        sc.delta_min = cfg.delta_min;
        sc.min_well_rate = cfg.prep.min_well_rate;
        cfg.scenarios.push_back(sc);
    }

    auto positive = [&](double v, const char* name) {
        if (!(v > 0.0)) throw ValidationError(path + ": " + name + " must be positive");
    };
    positive(cfg.prep.initial_spacing, "initial_spacing_m");
    positive(cfg.prep.spacing_step, "spacing_step_m");
    positive(cfg.delta_min, "delta_min_m");
    if (cfg.prep.buffer_m < 0.0) throw ValidationError(path + ": buffer_m must be >= 0");
    if (cfg.prep.max_wells < 1) throw ValidationError(path + ": max_wells must be >= 1");
    for (const auto& sc : cfg.scenarios) {
        positive(sc.q_min, "q_min_lps");
        if (sc.r_delta < 1.0) throw ValidationError(path + ": r_delta must be >= 1");
    }
    return cfg;
}

void apply_env_overrides(RunConfig& cfg) {
    if (const char* w = std::getenv("DOUBLETOPT_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(w, &end, 10);
        if (end != w && *end == '\0' && v >= 1) cfg.workers = static_cast<int>(v);
    }
}

std::string scenario_tag(const ScenarioConfig& sc) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "qmin%g_rd%g", si_to_lps(sc.q_min), sc.r_delta);
    return buf;
}

namespace {

json well_feature(const std::string& block_id, const std::string& line_id,
                  const std::string& well_id, const char* role, double x, double y,
                  double q_lps) {
    json f;
    f["type"] = "Feature";
    f["geometry"] = {{"type", "Point"}, {"coordinates", {x, y}}};
    f["properties"] = {{"block_id", block_id}, {"line_id", line_id}, {"well_id", well_id},
                       {"role", role},         {"q_lps", round3(q_lps)}};
    return f;
}

struct WellPos {
    double x, y;
};

}  // namespace

void write_results(const RunResult& run, const std::string& out_dir, bool timings) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());

    // Coordinates and line counts per block.
    std::map<std::string, std::map<std::string, WellPos>> pos_of;
    std::map<std::string, int> lines_of;
    for (const auto& pb : run.prepared) {
        lines_of[pb.block_id] = static_cast<int>(pb.lines.size());
        auto& m = pos_of[pb.block_id];
        for (const auto& line : pb.lines)
            for (const auto& w : line.wells) m[w.well_id] = WellPos{w.x, w.y};
    }

    // Scenario report table.
    {
        std::ostringstream os;
        os << "# doubletopt scenario_reports format_version=1\n";
        os << "q_min_lps,r_delta,total_doublets,max_doublets_per_block,mean_doublets_per_block,"
              "avg_max_doublet_rate_lps,mean_doublet_rate_lps,blocks_with_doublets,"
              "blocks_without_doublets,total_rate_lps,max_block_rate_lps,mean_block_rate_lps\n";
        for (const auto& sc : run.scenarios) {
            const auto& r = sc.report;
            os << fmt3(r.q_min_lps) << "," << fmtg(r.r_delta) << "," << r.total_doublets << ","
               << r.max_doublets_per_block << "," << fmt3(r.mean_doublets_per_block) << ","
               << fmt3(r.avg_max_doublet_rate_lps) << "," << fmt3(r.mean_doublet_rate_lps) << ","
               << r.blocks_with << "," << r.blocks_without << "," << fmt3(r.total_rate_lps) << ","
               << fmt3(r.max_block_rate_lps) << "," << fmt3(r.mean_block_rate_lps) << "\n";
        }
        write_file(out_dir + "/scenario_reports.csv", os.str());
    }

    // Failure records.
    {
        std::ostringstream os;
        os << "# doubletopt failures format_version=1\n";
        os << "block_id,stage,message\n";
        for (const auto& f : run.failures)
            os << csv_escape(f.block_id) << "," << f.stage << "," << csv_escape(f.message) << "\n";
        write_file(out_dir + "/failures.csv", os.str());
    }

    for (const auto& sc : run.scenarios) {
        const std::string tag = scenario_tag(sc.scenario);

        // Per-block summary.
        std::ostringstream os;
        os << "# doubletopt block_summary format_version=1 scenario=" << tag << "\n";
        os << "block_id,n_lines,n_doublet,q_block_lps,proven_optimal,gap,node_count,solve_time_s\n";
        for (const auto& sol : sc.solutions) {
            os << csv_escape(sol.block_id) << "," << lines_of[sol.block_id] << ","
               << sol.n_doublet << "," << fmt3(si_to_lps(sol.q_block)) << ","
               << (sol.certificate.proven_optimal ? 1 : 0) << "," << fmtg(sol.certificate.gap)
               << "," << sol.node_count << "," << fmt3(timings ? sol.solve_time : 0.0) << "\n";
        }
        write_file(out_dir + "/blocks_" + tag + ".csv", os.str());

        // Installed wells and doublets.
        json doc;
        doc["type"] = "FeatureCollection";
        doc["format_version"] = 1;
        doc["doubletopt"] = {{"kind", "results"},
                             {"q_min_lps", si_to_lps(sc.scenario.q_min)},
                             {"r_delta", sc.scenario.r_delta},
                             {"delta_min_m", sc.scenario.delta_min}};
        doc["features"] = json::array();
        for (const auto& sol : sc.solutions) {
            const auto& wells = pos_of[sol.block_id];
            for (const auto& d : sol.installed) {
                const auto ext = wells.find(d.ext_well_id);
                const auto inj = wells.find(d.inj_well_id);
                if (ext == wells.end() || inj == wells.end())
                    throw IoError("block " + sol.block_id + ": well ids missing coordinates");
                const double q_lps = si_to_lps(d.q);
                json line;
                line["type"] = "Feature";
                line["geometry"] = {{"type", "LineString"},
                                    {"coordinates",
                                     {{ext->second.x, ext->second.y},
                                      {inj->second.x, inj->second.y}}}};
                line["properties"] = {{"block_id", sol.block_id},
                                      {"line_id", d.line_id},
                                      {"ext_well_id", d.ext_well_id},
                                      {"inj_well_id", d.inj_well_id},
                                      {"q_lps", round3(q_lps)}};
                doc["features"].push_back(std::move(line));
                doc["features"].push_back(well_feature(sol.block_id, d.line_id, d.ext_well_id,
                                                       "ext", ext->second.x, ext->second.y,
                                                       q_lps));
                doc["features"].push_back(well_feature(sol.block_id, d.line_id, d.inj_well_id,
                                                       "inj", inj->second.x, inj->second.y,
                                                       q_lps));
            }
        }
        write_file(out_dir + "/results_" + tag + ".geojson", doc.dump(1) + "\n");
    }
}

void write_candidates(const std::vector<PreparedBlock>& prepared, const std::string& path) {
    json doc;
    doc["type"] = "FeatureCollection";
    doc["format_version"] = 1;
    doc["doubletopt"] = {{"kind", "candidates"}};
    doc["features"] = json::array();
    for (const auto& pb : prepared) {
        for (const auto& line : pb.lines) {
            for (const auto& w : line.wells) {
                json f;
                f["type"] = "Feature";
                f["geometry"] = {{"type", "Point"}, {"coordinates", {w.x, w.y}}};
                f["properties"] = {{"block_id", pb.block_id},
                                   {"line_id", line.line_id},
                                   {"well_id", w.well_id},
                                   {"s", w.s},
                                   {"t", w.t},
                                   {"q_d_lps", round3(si_to_lps(w.limits.q_drawdown))},
                                   {"q_f_lps", round3(si_to_lps(w.limits.q_upconing))},
                                   {"alpha_m2s", w.limits.alpha}};
                doc["features"].push_back(std::move(f));
            }
        }
    }
    write_file(path, doc.dump(1) + "\n");
}

ParsedResults read_results(const std::string& path) {
    json doc;
    try {
        doc = json::parse(slurp(path));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    ParsedResults out;
    out.format_version = doc.value("format_version", 0);
    if (doc.contains("doubletopt")) {
        const auto& meta = doc["doubletopt"];
        out.q_min_lps = meta.value("q_min_lps", 0.0);
        out.r_delta = meta.value("r_delta", 0.0);
        out.delta_min_m = meta.value("delta_min_m", 0.0);
    }
    if (!doc.contains("features") || !doc["features"].is_array())
        throw ParseError(path + ": expected a FeatureCollection");
    const auto& features = doc["features"];
    for (std::size_t i = 0; i < features.size(); ++i) {
        const std::string where = path + ": feature " + std::to_string(i);
        const auto& f = features[i];
        const auto& geom = f.at("geometry");
        const auto& props = f.at("properties");
        const std::string type = geom.value("type", "");
        if (type == "Point") {
            ParsedWell w;
            w.block_id = props.value("block_id", "");
            w.line_id = props.value("line_id", "");
            w.well_id = props.value("well_id", "");
            w.role = props.value("role", "");
            w.x = geom.at("coordinates").at(0).get<double>();
            w.y = geom.at("coordinates").at(1).get<double>();
            w.q_lps = props.value("q_lps", 0.0);
            out.wells.push_back(std::move(w));
        } else if (type == "LineString") {
            ParsedDoublet d;
            d.block_id = props.value("block_id", "");
            d.line_id = props.value("line_id", "");
            d.ext_well_id = props.value("ext_well_id", "");
            d.inj_well_id = props.value("inj_well_id", "");
            d.q_lps = props.value("q_lps", 0.0);
            out.doublets.push_back(std::move(d));
        } else {
            throw ParseError(where + ": unsupported geometry type " + type);
        }
    }
    return out;
}

std::vector<BlockSummaryRow> read_block_summary(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<BlockSummaryRow> out;
    std::string line;
    bool saw_header = false;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            saw_header = true;
            continue;
        }
        const std::string where = path + ":" + std::to_string(line_no);
        const auto t = split_csv(line);
        if (t.size() != 8) throw ParseError(where + ": expected 8 columns");
        BlockSummaryRow r;
        r.block_id = t[0];
        r.n_lines = static_cast<int>(parse_double(t[1], where));
        r.n_doublet = static_cast<int>(parse_double(t[2], where));
        r.q_block_lps = parse_double(t[3], where);
        r.proven_optimal = parse_double(t[4], where) != 0.0;
        r.gap = parse_double(t[5], where);
        r.node_count = static_cast<long>(parse_double(t[6], where));
        r.solve_time_s = parse_double(t[7], where);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<ScenarioReport> read_reports(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<ScenarioReport> out;
    std::string line;
    bool saw_header = false;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            saw_header = true;
            continue;
        }
        const std::string where = path + ":" + std::to_string(line_no);
        const auto t = split_csv(line);
        if (t.size() != 12) throw ParseError(where + ": expected 12 columns");
        ScenarioReport r;
        r.q_min_lps = parse_double(t[0], where);
        r.r_delta = parse_double(t[1], where);
        r.total_doublets = static_cast<long>(parse_double(t[2], where));
        r.max_doublets_per_block = static_cast<int>(parse_double(t[3], where));
        r.mean_doublets_per_block = parse_double(t[4], where);
        r.avg_max_doublet_rate_lps = parse_double(t[5], where);
        r.mean_doublet_rate_lps = parse_double(t[6], where);
        r.blocks_with = static_cast<long>(parse_double(t[7], where));
        r.blocks_without = static_cast<long>(parse_double(t[8], where));
        r.total_rate_lps = parse_double(t[9], where);
        r.max_block_rate_lps = parse_double(t[10], where);
        r.mean_block_rate_lps = parse_double(t[11], where);
        out.push_back(r);
    }
    return out;
}

}  // namespace doubletopt
