#include <cmath>

#include <catch2/catch_amalgamated.hpp>
#include <nlohmann/json.hpp>

#include "gridres/hazard.hpp"

using namespace gridres;

namespace {

HurricaneTrack straight_track() {
    return {"west-east", {{{0, 0}, 80}, {{10, 0}, 120}}};
}

GridCase laid_out_case() {
    GridCase g;
    g.buses = {{1, 0.0, 1000.0, Point{0, 0}}, {2, 50.0, 1000.0, Point{10, 0}}};
    g.generators = {{1, 1, 0.0, 100.0, -1.0, {}}};
    g.lines = {{1, 1, 2, 0.1, 50.0, {}}};
    g.horizon = 1;
    return g;
}

Point rotate(Point p, double angle, Point shift) {
    return {p.x * std::cos(angle) - p.y * std::sin(angle) + shift.x,
            p.x * std::sin(angle) + p.y * std::cos(angle) + shift.y};
}

}  // namespace

TEST_CASE("single waypoint track: wind carried, euclidean distance") {
    const HurricaneTrack t{"point", {{{0, 0}, 100}}};
    const TrackFeatures f = track_features(t, {3, 4});
    CHECK(f.x1 == 100.0);
    CHECK(f.x2 == Catch::Approx(5.0));
}

TEST_CASE("wind interpolates along the minimizing segment") {
    const TrackFeatures mid = track_features(straight_track(), {5, 2});
    CHECK(mid.x1 == Catch::Approx(100.0));
    CHECK(mid.x2 == Catch::Approx(2.0));
}

TEST_CASE("projection before the first waypoint clamps to its wind") {
    const TrackFeatures f = track_features(straight_track(), {-5, 0});
    CHECK(f.x1 == Catch::Approx(80.0));
    CHECK(f.x2 == Catch::Approx(5.0));
}

TEST_CASE("component features: generator at bus, line at closest sample") {
    const GridCase g = laid_out_case();
    const HurricaneTrack t{"point", {{{5, 1}, 110}}};
    const auto feats = component_features(g, t);
    REQUIRE(feats.size() == 2);
    CHECK(feats[0].kind == ComponentKind::Generator);
    CHECK(feats[0].x1 == Catch::Approx(110.0));
    CHECK(feats[0].x2 == Catch::Approx(std::sqrt(26.0)));
    CHECK(feats[1].kind == ComponentKind::Line);
    CHECK(feats[1].x1 == Catch::Approx(110.0));
    CHECK(feats[1].x2 == Catch::Approx(1.0));
}

TEST_CASE("track coincident with a line gives zero distance") {
    const GridCase g = laid_out_case();
    const HurricaneTrack t{"overlap", {{{0, 0}, 90}, {{10, 0}, 90}}};
    const auto feats = component_features(g, t);
    CHECK(feats[1].x2 == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("missing layout is reported") {
    GridCase g = laid_out_case();
    g.buses[1].location.reset();
    CHECK_THROWS_AS(component_features(g, straight_track()), ValidationError);
}

TEST_CASE("x2 is invariant under rigid motion of track and layout") {
    const GridCase g = laid_out_case();
    const HurricaneTrack t{"diag", {{{-3, 7}, 95}, {{12, -2}, 140}, {{20, 8}, 70}}};
    const auto before = component_features(g, t);

    const double angle = 0.7;
    const Point shift{13.5, -4.25};
    GridCase g2 = g;
    for (Bus& b : g2.buses) b.location = rotate(*b.location, angle, shift);
    HurricaneTrack t2 = t;
    for (TrackWaypoint& w : t2.waypoints) w.position = rotate(w.position, angle, shift);
    const auto after = component_features(g2, t2);

    REQUIRE(before.size() == after.size());
    for (std::size_t i = 0; i < before.size(); ++i) {
        CHECK(after[i].x2 == Catch::Approx(before[i].x2).margin(1e-9));
        CHECK(after[i].x1 == Catch::Approx(before[i].x1).margin(1e-9));
    }
}

TEST_CASE("densifying line sampling never increases line x2") {
    GridCase g = laid_out_case();
    g.lines[0].geometry = {{0, 0}, {3, 4}, {7, -1}, {10, 0}};
    const HurricaneTrack t{"diag", {{{-1, 6}, 95}, {{11, -3}, 140}}};
    double prev = component_features(g, t, 4.0)[1].x2;
    for (double step : {2.0, 1.0, 0.5}) {
        const double cur = component_features(g, t, step)[1].x2;
        CHECK(cur <= prev + 1e-12);
        prev = cur;
    }
}

TEST_CASE("x2 never exceeds the distance to any waypoint") {
    const HurricaneTrack t{"tri", {{{0, 0}, 80}, {{10, 0}, 120}, {{10, 10}, 100}}};
    for (const Point loc : {Point{3, 3}, Point{-2, 8}, Point{15, 5}, Point{5, -10}}) {
        const TrackFeatures f = track_features(t, loc);
        for (const TrackWaypoint& w : t.waypoints)
            CHECK(f.x2 <= distance(loc, w.position) + 1e-12);
    }
}

TEST_CASE("track JSON round-trip") {
    const HurricaneTrack t = straight_track();
    const nlohmann::json j = t;
    CHECK(j.get<HurricaneTrack>() == t);
}
