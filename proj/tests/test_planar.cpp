#include <catch2/catch_amalgamated.hpp>

#include "gridres/planar.hpp"

using namespace gridres;

TEST_CASE("point-segment distance: perpendicular foot inside the segment") {
    CHECK(point_segment_distance({0, 1}, {-1, 0}, {1, 0}) == Catch::Approx(1.0));
}

TEST_CASE("point-segment distance: projection clamps to the near endpoint") {
    CHECK(point_segment_distance({5, 0}, {0, 0}, {1, 0}) == Catch::Approx(4.0));
}

TEST_CASE("point-segment distance: degenerate segment is point distance") {
    CHECK(point_segment_distance({3, 3}, {3, 3}, {3, 3}) == 0.0);
    CHECK(point_segment_distance({0, 0}, {3, 4}, {3, 4}) == Catch::Approx(5.0));
}

TEST_CASE("polyline sampling hits every grid multiple plus the endpoint") {
    const std::vector<Point> poly{{0, 0}, {10, 0}};
    const auto samples = sample_polyline(poly, 3.0);
    REQUIRE(samples.size() == 5);  // 0, 3, 6, 9 and the endpoint
    CHECK(samples[1].x == Catch::Approx(3.0));
    CHECK(samples.back().x == Catch::Approx(10.0));
}

TEST_CASE("halving the sample step yields a superset of sample positions") {
    const std::vector<Point> poly{{0, 0}, {4, 3}, {9, 3}, {9, -2}};
    const auto coarse = sample_polyline(poly, 1.7);
    const auto fine = sample_polyline(poly, 0.85);
    for (const Point& p : coarse) {
        bool found = false;
        for (const Point& q : fine)
            if (p.x == q.x && p.y == q.y) {
                found = true;
                break;
            }
        CHECK(found);
    }
}
