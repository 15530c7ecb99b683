// Planar geometry on a km-scaled plane: points, segment distance, and
// polyline sampling. All coordinates are kilometers.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace gridres {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
    friend bool operator==(Point a, Point b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

// Distance from p to the closed segment [a, b]; the degenerate segment
// a == b reduces to point distance. Also reports the projection parameter
// t in [0, 1] of the closest point a + t(b - a).
inline double point_segment_distance(Point p, Point a, Point b, double* t_out = nullptr) {
    const Point ab = b - a;
    const double len2 = dot(ab, ab);
    double t = 0.0;
    if (len2 > 0.0) {
        t = dot(p - a, ab) / len2;
        t = std::clamp(t, 0.0, 1.0);
    }
    if (t_out) *t_out = t;
    return distance(p, a + t * ab);
}

inline double polyline_length(const std::vector<Point>& pts) {
    double len = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) len += distance(pts[i - 1], pts[i]);
    return len;
}

// Point at arclength s along the polyline, clamped to its ends.
inline Point polyline_at(const std::vector<Point>& pts, double s) {
    if (pts.empty()) return {};
    if (s <= 0.0) return pts.front();
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double seg = distance(pts[i - 1], pts[i]);
        if (s <= seg) {
            if (seg == 0.0) return pts[i];
            const double t = s / seg;
            return pts[i - 1] + t * (pts[i] - pts[i - 1]);
        }
        s -= seg;
    }
    return pts.back();
}

// Samples at arclengths 0, step, 2*step, ... plus the final endpoint.
// Halving the step yields a superset of the coarser sample set, so any
// min-over-samples statistic is monotone under refinement.
inline std::vector<Point> sample_polyline(const std::vector<Point>& pts, double step) {
    std::vector<Point> out;
    if (pts.empty()) return out;
    const double len = polyline_length(pts);
    // k * step (not accumulation) so sample positions at step h are bit-exact
    // members of the step h/2 positions.
    for (std::size_t k = 0; static_cast<double>(k) * step < len; ++k)
        out.push_back(polyline_at(pts, static_cast<double>(k) * step));
    out.push_back(pts.back());
    return out;
}

}  // namespace gridres
