#include <doctest.h>

#include <cmath>

#include "doubletopt/errors.hpp"
#include "doubletopt/geometry.hpp"

using namespace doubletopt;

namespace {

BlockGeometry square_block(double side = 50.0) {
    BlockGeometry g;
    g.block_id = "B0";
    g.boundary = make_rect(0.0, 0.0, side, side);
    return g;
}

}  // namespace

TEST_CASE("feasible area with no buildings is the block itself") {
    const auto area = feasible_area(square_block(), 3.0);
    REQUIRE(area.size() == 1);
    CHECK(bg::area(area) == doctest::Approx(2500.0).epsilon(1e-12));
}

TEST_CASE("centered building carves a buffered hole") {
    BlockGeometry g = square_block();
    g.buildings.push_back(make_rect(20.0, 20.0, 30.0, 30.0));
    const auto area = feasible_area(g, 3.0);
    // 10x10 building dilated by 3 m with square corners: 16x16 hole.
    CHECK(bg::area(area) == doctest::Approx(2500.0 - 256.0).epsilon(1e-9));
    CHECK_FALSE(contains(area, Point(25.0, 25.0)));
    CHECK_FALSE(contains(area, Point(17.5, 17.5)));  // corner region, 3.5 m diagonal
    CHECK(contains(area, Point(25.0, 16.9)));        // 3.1 m below the wall
    CHECK(contains(area, Point(1.0, 1.0)));
}

TEST_CASE("building dilated over the whole block leaves nothing") {
    BlockGeometry g = square_block(10.0);
    g.buildings.push_back(make_rect(-1.0, -1.0, 11.0, 11.0));
    const auto area = feasible_area(g, 3.0);
    CHECK(area.empty());
}

TEST_CASE("grid covers an axis-aligned block boundary-inclusive") {
    const auto area = feasible_area(square_block(), 3.0);
    const auto nodes = generate_grid(area, Vec2{1.0, 0.0}, 7.5, Point(0.0, 0.0));
    CHECK(nodes.size() == 49);  // {0, 7.5, ..., 45}^2
    // ordered by (t, s)
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        const bool ordered = nodes[i - 1].it < nodes[i].it ||
                             (nodes[i - 1].it == nodes[i].it && nodes[i - 1].is < nodes[i].is);
        CHECK(ordered);
    }
    const auto at5 = generate_grid(area, Vec2{1.0, 0.0}, 5.0, Point(0.0, 0.0));
    CHECK(at5.size() == 121);  // {0, 5, ..., 50}^2
}

TEST_CASE("empty area yields no nodes") {
    CHECK(generate_grid(MultiPolygon{}, Vec2{1.0, 0.0}, 5.0, Point(0.0, 0.0)).empty());
}

TEST_CASE("grid rotates with block and flow direction") {
    const double angle = 30.0 * M_PI / 180.0;
    const double cx = 25.0, cy = 25.0;

    const auto base_area = feasible_area(square_block(), 3.0);
    const auto base = generate_grid(base_area, Vec2{1.0, 0.0}, 7.5, Point(0.0, 0.0));

    BlockGeometry rotated = square_block();
    rotated.boundary = rotate_polygon(rotated.boundary, angle, cx, cy);
    const auto rot_area = feasible_area(rotated, 3.0);
    const Vec2 rot_flow{std::cos(angle), std::sin(angle)};
    // anchor = rotation of the unrotated anchor
    const double ax = cx + std::cos(angle) * (0.0 - cx) - std::sin(angle) * (0.0 - cy);
    const double ay = cy + std::sin(angle) * (0.0 - cx) + std::cos(angle) * (0.0 - cy);
    const auto rot = generate_grid(rot_area, rot_flow, 7.5, Point(ax, ay));

    REQUIRE(rot.size() == base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        const double ex = cx + std::cos(angle) * (base[i].x - cx) - std::sin(angle) * (base[i].y - cy);
        const double ey = cy + std::sin(angle) * (base[i].x - cx) + std::cos(angle) * (base[i].y - cy);
        CHECK(std::abs(rot[i].x - ex) < 1e-9);
        CHECK(std::abs(rot[i].y - ey) < 1e-9);
    }
}

TEST_CASE("degenerate boundary polygon is rejected") {
    BlockGeometry g;
    g.block_id = "bad";
    // bow-tie: self-intersecting
    g.boundary = make_polygon({{0, 0}, {10, 10}, {10, 0}, {0, 10}});
    CHECK_THROWS_AS(feasible_area(g, 3.0), InvalidGeometry);
}
