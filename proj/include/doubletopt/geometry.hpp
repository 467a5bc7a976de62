#pragma once

#include <string>
#include <vector>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>

#include "doubletopt/hydro.hpp"

namespace doubletopt {

namespace bg = boost::geometry;

using Point = bg::model::d2::point_xy<double>;
using Polygon = bg::model::polygon<Point>;          // clockwise, closed
using MultiPolygon = bg::model::multi_polygon<Polygon>;

/// One city block: outer boundary (possibly with holes) plus building
/// footprints. Coordinates in meters, projected CRS.
struct BlockGeometry {
    std::string block_id;
    Polygon boundary;
    std::vector<Polygon> buildings;
};

/// Rotation between map coordinates (x, y) and the flow-aligned frame
/// (s along flow, t across flow).
struct FlowFrame {
    Vec2 flow{1.0, 0.0};  // unit vector

    double s_of(double x, double y) const { return x * flow.x + y * flow.y; }
    double t_of(double x, double y) const { return -x * flow.y + y * flow.x; }
    Point xy_of(double s, double t) const {
        return Point(s * flow.x - t * flow.y, s * flow.y + t * flow.x);
    }
};

/// Convenience constructor from polygon ring coordinates; applies
/// bg::correct so winding and closure match the Polygon model.
Polygon make_polygon(const std::vector<std::pair<double, double>>& outer,
                     const std::vector<std::vector<std::pair<double, double>>>& holes = {});

/// Axis-aligned rectangle [x0,x1] x [y0,y1].
Polygon make_rect(double x0, double y0, double x1, double y1);

/// Rotate a polygon by `angle_rad` about (cx, cy).
Polygon rotate_polygon(const Polygon& poly, double angle_rad, double cx, double cy);

/// Area where wells may be placed: the block boundary minus every building
/// dilated by `buffer_m`. Dilation uses straight sides with miter joins, so
/// the result excludes everything closer than `buffer_m` to a building
/// (exact on rectangular footprints). May be empty or multi-part.
///
/// Throws InvalidGeometry when the boolean operations produce a degenerate
/// result that vertex deduplication cannot repair.
MultiPolygon feasible_area(const BlockGeometry& g, double buffer_m);

/// All nodes of the square lattice with step `spacing` in the flow-aligned
/// frame anchored at `anchor`, restricted to points of `area` (boundary
/// included, with a 1e-9 m tolerance so rotation cannot flip membership of
/// boundary nodes). Ordered by (t, s) lattice index.
struct GridNode {
    double x, y;   // map frame
    double s, t;   // flow frame
    long is, it;   // lattice indices relative to the anchor
};
std::vector<GridNode> generate_grid(const MultiPolygon& area, Vec2 flow_dir,
                                    double spacing, Point anchor);

/// Euclidean point helpers.
double distance_to(const Point& p, const Polygon& poly);
bool contains(const MultiPolygon& area, const Point& p, double tol = 1e-9);

}  // namespace doubletopt
