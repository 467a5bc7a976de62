#include <doctest.h>

#include <cmath>
#include <set>

#include "doubletopt/candidates.hpp"
#include "doubletopt/errors.hpp"
#include "doubletopt/field.hpp"

#include "support/fixtures.hpp"

using namespace doubletopt;
using testsupport::make_sample;

namespace {

BlockGeometry square_block(double side = 50.0) {
    BlockGeometry g;
    g.block_id = "B0";
    g.boundary = make_rect(0.0, 0.0, side, side);
    return g;
}

struct NoDataField final : GroundwaterAccessor {
    std::optional<HydroSample> sample(double, double) const override { return std::nullopt; }
};

std::size_t well_count(const std::vector<DoubletLine>& lines) {
    std::size_t n = 0;
    for (const auto& l : lines) n += l.wells.size();
    return n;
}

}  // namespace

TEST_CASE("median convention") {
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
    CHECK(median({5.0}) == 5.0);
}

TEST_CASE("adaptive loop lands at 7.5 m on a 50x50 uniform block") {
    // 5 m spacing gives 121 boundary-inclusive nodes > 100, one step later
    // 49 nodes remain.
    const auto field = uniform_field(make_sample(2e-3, 10.0, 2.0, 1e-3));
    const auto lines = adaptive_candidates(square_block(), field, PrepConfig{});
    CHECK(lines.size() == 7);
    for (const auto& line : lines) CHECK(line.wells.size() == 7);
    CHECK(well_count(lines) == 49);

    // spacing 7.5 in the flow frame
    for (const auto& line : lines)
        for (std::size_t i = 1; i < line.wells.size(); ++i)
            CHECK(line.wells[i].s - line.wells[i - 1].s == doctest::Approx(7.5).epsilon(1e-12));
}

TEST_CASE("wells below the rate filter disappear") {
    // q_d = 0.195 * 1e-4 * 25 = 0.49 l/s < 1 l/s
    const auto weak = uniform_field(make_sample(1e-4, 5.0, 2.0, 1e-3));
    CHECK(adaptive_candidates(square_block(), weak, PrepConfig{}).empty());
}

TEST_CASE("single-well lines are dropped") {
    // A thin block: one line along flow at 5 m spacing; crossflow width
    // admits a single line with several wells, but a single well per line
    // cannot happen on a rectangle, so use a tailored polygon: an L of two
    // cells where one line keeps one well only.
    BlockGeometry g;
    g.block_id = "B0";
    // 12 m wide strip: rows at t = 0, 5, 10 all inside; length 4 m means a
    // single column of wells per row.
    g.boundary = make_rect(0.0, 0.0, 4.0, 12.0);
    const auto field = uniform_field(make_sample(2e-3, 10.0, 2.0, 1e-3));
    const auto lines = adaptive_candidates(g, field, PrepConfig{});
    CHECK(lines.empty());  // every line has a single well
}

TEST_CASE("candidates respect the building buffer") {
    BlockGeometry g = square_block();
    g.buildings.push_back(make_rect(20.0, 20.0, 30.0, 30.0));
    const auto field = uniform_field(make_sample(2e-3, 10.0, 2.0, 1e-3));
    const auto lines = adaptive_candidates(g, field, PrepConfig{});
    CHECK(!lines.empty());
    const auto area = feasible_area(g, 3.0);
    for (const auto& line : lines) {
        for (const auto& w : line.wells) {
            CHECK(contains(area, Point(w.x, w.y)));
            CHECK(distance_to(Point(w.x, w.y), g.buildings.front()) >= 3.0 - 1e-9);
        }
    }
}

TEST_CASE("line grouping invariants") {
    const auto field = uniform_field(make_sample(2e-3, 10.0, 2.0, 1e-3));
    const auto lines = adaptive_candidates(square_block(), field, PrepConfig{});
    for (const auto& line : lines) {
        REQUIRE(line.wells.size() >= 2);
        for (std::size_t i = 0; i < line.wells.size(); ++i) {
            CHECK(std::abs(line.wells[i].t - line.t) < 1e-9);
            if (i > 0) CHECK(line.wells[i].s > line.wells[i - 1].s);
        }
        CHECK(line.chi == doctest::Approx(line.wells.back().s - line.wells.front().s));
        double lo = line.wells.front().limits.alpha, hi = lo;
        for (const auto& w : line.wells) {
            lo = std::min(lo, w.limits.alpha);
            hi = std::max(hi, w.limits.alpha);
        }
        CHECK(line.alpha_med >= lo);
        CHECK(line.alpha_med <= hi);
    }
}

TEST_CASE("flow frame round-trips map coordinates") {
    const auto field = uniform_field(make_sample(2e-3, 10.0, 2.0, 1e-3, 127.0));
    const auto lines = adaptive_candidates(square_block(), field, PrepConfig{});
    const auto fs = field.sample(25.0, 25.0);
    FlowFrame frame{fs->flow_dir};
    for (const auto& line : lines) {
        for (const auto& w : line.wells) {
            CHECK(std::abs(frame.s_of(w.x, w.y) - w.s) < 1e-9);
            CHECK(std::abs(frame.t_of(w.x, w.y) - w.t) < 1e-9);
            const Point back = frame.xy_of(w.s, w.t);
            CHECK(std::abs(back.x() - w.x) < 1e-9);
            CHECK(std::abs(back.y() - w.y) < 1e-9);
        }
    }
}

TEST_CASE("rotation equivariance of candidate sets") {
    const double angle = 30.0 * M_PI / 180.0;
    BlockGeometry g = square_block();
    g.buildings.push_back(make_rect(10.0, 15.0, 22.0, 27.0));
    const auto field = uniform_field(make_sample(2e-3, 10.0, 2.0, 1e-3));

    BlockGeometry r = g;
    r.boundary = rotate_polygon(g.boundary, angle, 25.0, 25.0);
    r.buildings[0] = rotate_polygon(g.buildings[0], angle, 25.0, 25.0);
    const auto rot_field = uniform_field(make_sample(2e-3, 10.0, 2.0, 1e-3, 60.0));

    const auto base = adaptive_candidates(g, field, PrepConfig{});
    const auto rot = adaptive_candidates(r, rot_field, PrepConfig{});
    REQUIRE(base.size() == rot.size());

    std::vector<const WellCandidate*> base_wells, rot_wells;
    for (const auto& l : base)
        for (const auto& w : l.wells) base_wells.push_back(&w);
    for (const auto& l : rot)
        for (const auto& w : l.wells) rot_wells.push_back(&w);
    REQUIRE(base_wells.size() == rot_wells.size());
    for (std::size_t i = 0; i < base_wells.size(); ++i) {
        for (std::size_t j = i + 1; j < base_wells.size(); ++j) {
            const double d0 = std::hypot(base_wells[i]->x - base_wells[j]->x,
                                         base_wells[i]->y - base_wells[j]->y);
            const double d1 = std::hypot(rot_wells[i]->x - rot_wells[j]->x,
                                         rot_wells[i]->y - rot_wells[j]->y);
            CHECK(std::abs(d0 - d1) < 1e-6);
        }
    }
}

TEST_CASE("missing field data raises FieldUnavailable") {
    CHECK_THROWS_AS(adaptive_candidates(square_block(), NoDataField{}, PrepConfig{}),
                    FieldUnavailable);
}
