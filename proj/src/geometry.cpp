#include "doubletopt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/geometry/algorithms/buffer.hpp>
#include <boost/geometry/algorithms/difference.hpp>
#include <boost/geometry/algorithms/remove_spikes.hpp>
#include <boost/geometry/algorithms/unique.hpp>

#include "doubletopt/errors.hpp"

namespace doubletopt {

Polygon make_polygon(const std::vector<std::pair<double, double>>& outer,
                     const std::vector<std::vector<std::pair<double, double>>>& holes) {
    Polygon poly;
    for (const auto& [x, y] : outer) bg::append(poly.outer(), Point(x, y));
    poly.inners().resize(holes.size());
    for (std::size_t h = 0; h < holes.size(); ++h)
        for (const auto& [x, y] : holes[h]) bg::append(poly.inners()[h], Point(x, y));
    bg::correct(poly);
    return poly;
}

Polygon make_rect(double x0, double y0, double x1, double y1) {
    return make_polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

Polygon rotate_polygon(const Polygon& poly, double angle_rad, double cx, double cy) {
    const double c = std::cos(angle_rad), s = std::sin(angle_rad);
    auto rot = [&](const Point& p) {
        const double dx = p.x() - cx, dy = p.y() - cy;
        return Point(cx + c * dx - s * dy, cy + s * dx + c * dy);
    };
    Polygon out;
    for (const auto& p : poly.outer()) bg::append(out.outer(), rot(p));
    out.inners().resize(poly.inners().size());
    for (std::size_t h = 0; h < poly.inners().size(); ++h)
        for (const auto& p : poly.inners()[h]) bg::append(out.inners()[h], rot(p));
    bg::correct(out);
    return out;
}

namespace {

MultiPolygon buffer_polygon(const Polygon& poly, double dist) {
    // Miter joins keep rectangular footprints rectangular and always contain
    // the disc dilation, so every kept point is at distance >= dist.
    bg::strategy::buffer::distance_symmetric<double> distance(dist);
    bg::strategy::buffer::side_straight side;
    bg::strategy::buffer::join_miter join(100.0);
    bg::strategy::buffer::end_flat end;
    bg::strategy::buffer::point_square point;
    MultiPolygon out;
    bg::buffer(poly, out, distance, side, join, end, point);
    return out;
}

// Repair attempt for boolean-op output: drop duplicate points and spikes,
// drop degenerate zero-area parts.
MultiPolygon repaired(MultiPolygon mp) {
    bg::unique(mp);
    bg::remove_spikes(mp);
    MultiPolygon out;
    for (auto& poly : mp) {
        if (poly.outer().size() >= 4 && std::abs(bg::area(poly)) > 1e-12) out.push_back(poly);
    }
    bg::correct(out);
    return out;
}

}  // namespace

MultiPolygon feasible_area(const BlockGeometry& g, double buffer_m) {
    Polygon boundary = g.boundary;
    bg::correct(boundary);
    if (!bg::is_valid(boundary)) {
        bg::unique(boundary);
        bg::remove_spikes(boundary);
        bg::correct(boundary);
        if (!bg::is_valid(boundary))
            throw InvalidGeometry("block " + g.block_id + ": boundary polygon is not simple");
    }

    MultiPolygon result{boundary};
    for (const auto& building : g.buildings) {
        Polygon b = building;
        bg::correct(b);
        MultiPolygon dilated = buffer_m > 0.0 ? buffer_polygon(b, buffer_m) : MultiPolygon{b};
        MultiPolygon next;
        bg::difference(result, dilated, next);
        result = std::move(next);
        if (result.empty()) return result;
    }

    if (!bg::is_valid(result)) {
        result = repaired(std::move(result));
        if (!bg::is_valid(result))
            throw InvalidGeometry("block " + g.block_id + ": degenerate feasible area");
    }
    return result;
}

double distance_to(const Point& p, const Polygon& poly) {
    return bg::distance(p, poly);
}

bool contains(const MultiPolygon& area, const Point& p, double tol) {
    if (bg::covered_by(p, area)) return true;
    return bg::distance(p, area) <= tol;
}

std::vector<GridNode> generate_grid(const MultiPolygon& area, Vec2 flow_dir,
                                    double spacing, Point anchor) {
    std::vector<GridNode> nodes;
    if (area.empty() || spacing <= 0.0) return nodes;

    FlowFrame frame{flow_dir};
    const double s0 = frame.s_of(anchor.x(), anchor.y());
    const double t0 = frame.t_of(anchor.x(), anchor.y());

    // Lattice extent from the area's bounding box in the flow frame.
    double s_min = std::numeric_limits<double>::infinity(), s_max = -s_min;
    double t_min = s_min, t_max = -s_min;
    for (const auto& poly : area) {
        auto scan = [&](const auto& ring) {
            for (const auto& p : ring) {
                const double s = frame.s_of(p.x(), p.y());
                const double t = frame.t_of(p.x(), p.y());
                s_min = std::min(s_min, s);
                s_max = std::max(s_max, s);
                t_min = std::min(t_min, t);
                t_max = std::max(t_max, t);
            }
        };
        scan(poly.outer());
        for (const auto& ring : poly.inners()) scan(ring);
    }

    // 1e-9 slack keeps index ranges stable when rotation perturbs the box.
    const double tol = 1e-9;
    const long i_lo = static_cast<long>(std::ceil((s_min - s0) / spacing - tol));
    const long i_hi = static_cast<long>(std::floor((s_max - s0) / spacing + tol));
    const long j_lo = static_cast<long>(std::ceil((t_min - t0) / spacing - tol));
    const long j_hi = static_cast<long>(std::floor((t_max - t0) / spacing + tol));

    for (long j = j_lo; j <= j_hi; ++j) {
        for (long i = i_lo; i <= i_hi; ++i) {
            const double s = s0 + static_cast<double>(i) * spacing;
            const double t = t0 + static_cast<double>(j) * spacing;
            const Point p = frame.xy_of(s, t);
            if (contains(area, p)) nodes.push_back(GridNode{p.x(), p.y(), s, t, i, j});
        }
    }
    return nodes;
}

}  // namespace doubletopt
