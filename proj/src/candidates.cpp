#include "doubletopt/candidates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "doubletopt/errors.hpp"

namespace doubletopt {

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n == 0) return 0.0;
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<DoubletLine> group_into_lines(std::vector<WellCandidate> wells,
                                          const std::vector<long>& t_index) {
    std::map<long, std::vector<std::size_t>> by_row;
    for (std::size_t i = 0; i < wells.size(); ++i) by_row[t_index[i]].push_back(i);

    std::vector<DoubletLine> lines;
    int line_no = 0;
    for (auto& [row, idxs] : by_row) {
        if (idxs.size() < 2) continue;  // a doublet needs two wells
        DoubletLine line;
        char buf[16];
        std::snprintf(buf, sizeof buf, "L%03d", line_no++);
        line.line_id = buf;
        line.t = wells[idxs.front()].t;
        std::vector<double> alphas;
        int well_no = 0;
        for (std::size_t i : idxs) {
            WellCandidate w = wells[i];
            std::snprintf(buf, sizeof buf, "%s.W%02d", line.line_id.c_str(), well_no++);
            w.well_id = buf;
            alphas.push_back(w.limits.alpha);
            line.wells.push_back(std::move(w));
        }
        line.chi = line.wells.back().s - line.wells.front().s;
        line.alpha_med = median(std::move(alphas));
        lines.push_back(std::move(line));
    }
    return lines;
}

std::vector<DoubletLine> adaptive_candidates(const BlockGeometry& g,
                                             const GroundwaterAccessor& field,
                                             const PrepConfig& cfg) {
    Point centroid;
    bg::centroid(g.boundary, centroid);
    const auto at_centroid = field.sample(centroid.x(), centroid.y());
    if (!at_centroid)
        throw FieldUnavailable("block " + g.block_id + ": no groundwater data at centroid");
    const Vec2 flow = at_centroid->flow_dir;

    const MultiPolygon area = feasible_area(g, cfg.buffer_m);
    if (area.empty()) return {};

    // Anchor: min corner of the feasible area's bounding box in the flow frame.
    FlowFrame frame{flow};
    double s_min = std::numeric_limits<double>::infinity();
    double t_min = s_min;
    for (const auto& poly : area)
        for (const auto& p : poly.outer()) {
            s_min = std::min(s_min, frame.s_of(p.x(), p.y()));
            t_min = std::min(t_min, frame.t_of(p.x(), p.y()));
        }
    const Point anchor = frame.xy_of(s_min, t_min);

    bg::model::box<Point> box;
    bg::envelope(g.boundary, box);
    const double diameter = std::hypot(box.max_corner().x() - box.min_corner().x(),
                                       box.max_corner().y() - box.min_corner().y());

    for (double spacing = cfg.initial_spacing; spacing <= diameter; spacing += cfg.spacing_step) {
        std::vector<WellCandidate> survivors;
        std::vector<long> t_index;
        for (const GridNode& node : generate_grid(area, flow, spacing, anchor)) {
            const auto s = field.sample(node.x, node.y);
            if (!s) continue;
            const TapLimits limits = tap_limits(*s);
            if (limits.q_drawdown < cfg.min_well_rate || limits.q_upconing < cfg.min_well_rate)
                continue;
            survivors.push_back(WellCandidate{"", node.x, node.y, node.s, node.t, limits});
            t_index.push_back(node.it);
        }
        auto lines = group_into_lines(std::move(survivors), t_index);
        std::size_t count = 0;
        for (const auto& line : lines) count += line.wells.size();
        if (count <= static_cast<std::size_t>(cfg.max_wells)) return lines;
    }
    return {};  // spacing exceeded the block diameter
}

}  // namespace doubletopt
