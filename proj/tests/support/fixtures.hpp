#pragma once

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "doubletopt/field.hpp"
#include "doubletopt/model.hpp"

namespace doubletopt::testsupport {

// Flow along +x unless stated otherwise: azimuth 90 deg maps to (1, 0).
inline HydroSample make_sample(double conductivity, double thickness, double headroom,
                               double gradient, double az_deg = 90.0) {
    HydroSample s;
    s.conductivity = conductivity;
    s.thickness = thickness;
    s.level_natural = 100.0;
    s.level_max = 100.0 + headroom;
    s.gradient = gradient;
    const double az = az_deg * M_PI / 180.0;
    s.flow_dir = Vec2{std::sin(az), std::cos(az)};
    return s;
}

struct WellSpec {
    double s = 0.0;
    double q_d_lps = 0.0;
    double q_f_lps = 0.0;
    double alpha = 0.0;  // m2/s
};

// Line aligned with flow (1, 0): x = s, y = t.
inline DoubletLine make_line(const std::string& line_id, double t,
                             const std::vector<WellSpec>& specs) {
    DoubletLine line;
    line.line_id = line_id;
    line.t = t;
    std::vector<double> alphas;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        WellCandidate w;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%s.W%02zu", line_id.c_str(), i);
        w.well_id = buf;
        w.x = specs[i].s;
        w.y = t;
        w.s = specs[i].s;
        w.t = t;
        w.limits.q_drawdown = lps_to_si(specs[i].q_d_lps);
        w.limits.q_upconing = lps_to_si(specs[i].q_f_lps);
        w.limits.alpha = specs[i].alpha;
        alphas.push_back(specs[i].alpha);
        line.wells.push_back(std::move(w));
    }
    line.chi = line.wells.back().s - line.wells.front().s;
    line.alpha_med = median(alphas);
    return line;
}

inline ScenarioConfig scenario_lps(double q_min_lps, double r_delta, double delta_min = 10.0) {
    ScenarioConfig sc;
    sc.q_min = lps_to_si(q_min_lps);
    sc.r_delta = r_delta;
    sc.delta_min = delta_min;
    return sc;
}

// The worked single-line example: two admissible wells 20 m apart, both
// q_d = 10 l/s and q_f = 6 l/s, alpha = 5e-4 m2/s. Optimum installs the
// upstream well as extraction at q = 6 l/s.
inline BlockProblem single_line_problem(double well_gap_m = 20.0) {
    auto line = make_line("L000", 0.0,
                          {WellSpec{0.0, 10.0, 6.0, 5e-4}, WellSpec{well_gap_m, 10.0, 6.0, 5e-4}});
    return make_block_problem("B0", {line}, scenario_lps(1.0, 2.0));
}

// The worked two-line example: parallel lines 30 m apart, chi = 20 m each,
// alpha 5e-4 everywhere, q_max 20 l/s. The interference row caps the joint
// rate at 15 l/s.
inline BlockProblem coupled_pair_problem() {
    auto l0 = make_line("L000", 0.0,
                        {WellSpec{0.0, 20.0, 20.0, 5e-4}, WellSpec{20.0, 20.0, 20.0, 5e-4}});
    auto l1 = make_line("L001", 30.0,
                        {WellSpec{0.0, 20.0, 20.0, 5e-4}, WellSpec{20.0, 20.0, 20.0, 5e-4}});
    return make_block_problem("B0", {l0, l1}, scenario_lps(1.0, 2.0));
}

// Random instance in the documented parameter ranges: up to 3 lines of up
// to 4 wells, K in [1e-4, 5e-3] m/s, B in [2, 20] m, headroom in [0, 3] m,
// grad_h in [1e-4, 5e-3].
inline BlockProblem random_instance(std::mt19937& rng) {
    std::uniform_int_distribution<int> n_lines_d(1, 3);
    std::uniform_int_distribution<int> n_wells_d(2, 4);
    std::uniform_real_distribution<double> k_d(1e-4, 5e-3);
    std::uniform_real_distribution<double> b_d(2.0, 20.0);
    std::uniform_real_distribution<double> head_d(0.0, 3.0);
    std::uniform_real_distribution<double> grad_d(1e-4, 5e-3);
    std::uniform_real_distribution<double> line_gap_d(8.0, 40.0);
    std::uniform_real_distribution<double> well_gap_d(6.0, 30.0);
    std::uniform_int_distribution<int> q_min_pick(0, 1);
    std::uniform_int_distribution<int> r_delta_pick(0, 2);

    const int n_lines = n_lines_d(rng);
    std::vector<DoubletLine> lines;
    double t = 0.0;
    for (int k = 0; k < n_lines; ++k) {
        if (k > 0) t += line_gap_d(rng);
        const int n_wells = n_wells_d(rng);
        DoubletLine line;
        char buf[16];
        std::snprintf(buf, sizeof buf, "L%03d", k);
        line.line_id = buf;
        line.t = t;
        std::vector<double> alphas;
        double s = 0.0;
        for (int w = 0; w < n_wells; ++w) {
            if (w > 0) s += well_gap_d(rng);
            const HydroSample hs = make_sample(k_d(rng), b_d(rng), head_d(rng), grad_d(rng));
            WellCandidate cand;
            std::snprintf(buf, sizeof buf, "L%03d.W%02d", k, w);
            cand.well_id = buf;
            cand.x = s;
            cand.y = t;
            cand.s = s;
            cand.t = t;
            cand.limits = tap_limits(hs);
            alphas.push_back(cand.limits.alpha);
            line.wells.push_back(std::move(cand));
        }
        line.chi = line.wells.back().s - line.wells.front().s;
        line.alpha_med = median(alphas);
        lines.push_back(std::move(line));
    }
    const double q_min_lps = q_min_pick(rng) == 0 ? 1.0 : 5.0;
    const double r_delta = std::vector<double>{1.5, 2.0, 3.0}[r_delta_pick(rng)];
    return make_block_problem("R0", std::move(lines), scenario_lps(q_min_lps, r_delta));
}

struct City {
    std::vector<BlockGeometry> blocks;
    GroundwaterField field;
};

// Deterministic synthetic city: rectangular blocks of varied size and
// orientation, a few buildings each, over a smoothly varying groundwater
// field. Coordinates keep clear of the lon/lat range check.
inline City make_city(int n_blocks, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> size_d(35.0, 90.0);
    std::uniform_real_distribution<double> jitter_d(0.0, 30.0);
    std::uniform_real_distribution<double> angle_d(0.0, M_PI / 2.0);
    std::uniform_int_distribution<int> n_buildings_d(0, 3);
    std::uniform_real_distribution<double> bsize_d(6.0, 22.0);
    std::uniform_real_distribution<double> unit_d(0.0, 1.0);

    City city;
    const int per_row = 10;
    const double cell = 200.0;
    const double origin = 1000.0;

    for (int i = 0; i < n_blocks; ++i) {
        const double cx = origin + cell * (i % per_row) + jitter_d(rng);
        const double cy = origin + cell * (i / per_row) + jitter_d(rng);
        const double w = size_d(rng), h = size_d(rng);
        Polygon boundary = make_rect(cx, cy, cx + w, cy + h);
        const double angle = unit_d(rng) < 0.5 ? 0.0 : angle_d(rng);
        if (angle != 0.0)
            boundary = rotate_polygon(boundary, angle, cx + w / 2.0, cy + h / 2.0);

        BlockGeometry g;
        char buf[16];
        std::snprintf(buf, sizeof buf, "B%04d", i);
        g.block_id = buf;
        g.boundary = boundary;

        const int n_buildings = n_buildings_d(rng);
        for (int b = 0; b < n_buildings; ++b) {
            const double bw = bsize_d(rng), bh = bsize_d(rng);
            const double bx = cx + unit_d(rng) * (w - bw);
            const double by = cy + unit_d(rng) * (h - bh);
            Polygon building = make_rect(bx, by, bx + bw, by + bh);
            if (angle != 0.0)
                building = rotate_polygon(building, angle, cx + w / 2.0, cy + h / 2.0);
            g.buildings.push_back(building);
        }
        city.blocks.push_back(std::move(g));
    }

    // Field samples every 150 m with smooth parameter variation. Some areas
    // fall below the 1 l/s filter by design.
    std::vector<FieldSample> samples;
    const double extent = origin + cell * per_row + 200.0;
    for (double x = origin - 200.0; x <= extent; x += 150.0) {
        for (double y = origin - 200.0; y <= extent; y += 150.0) {
            FieldSample fs;
            fs.x = x;
            fs.y = y;
            const double u = 0.5 + 0.5 * std::sin(x / 310.0) * std::cos(y / 430.0);
            const double v = 0.5 + 0.5 * std::cos(x / 270.0 + 1.0) * std::sin(y / 390.0 + 2.0);
            fs.data.conductivity = 1e-4 + (5e-3 - 1e-4) * u;
            fs.data.thickness = 2.0 + 18.0 * v;
            fs.data.level_natural = 100.0;
            fs.data.level_max = 100.0 + 3.0 * (0.5 + 0.5 * std::sin(x / 500.0 + y / 700.0));
            fs.data.gradient = 1e-4 + (5e-3 - 1e-4) * (0.5 + 0.5 * std::cos(y / 350.0));
            const double az = 90.0 + 40.0 * std::sin(x / 600.0) * std::cos(y / 800.0);
            const double az_rad = az * M_PI / 180.0;
            fs.data.flow_dir = Vec2{std::sin(az_rad), std::cos(az_rad)};
            samples.push_back(std::move(fs));
        }
    }
    city.field = GroundwaterField(std::move(samples));
    return city;
}

}  // namespace doubletopt::testsupport
