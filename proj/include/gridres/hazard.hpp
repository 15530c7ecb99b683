// Hurricane track representation and per-component feature extraction:
// x1 = sustained wind (mph) at the closest approach of the track,
// x2 = distance (km) from the component to the track polyline.
#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gridres/errors.hpp"
#include "gridres/grid.hpp"
#include "gridres/planar.hpp"

namespace gridres {

struct TrackWaypoint {
    Point position;   // km
    double wind = 0;  // mph sustained

    friend bool operator==(const TrackWaypoint&, const TrackWaypoint&) = default;
};

struct HurricaneTrack {
    std::string name;
    std::vector<TrackWaypoint> waypoints;

    void validate() const {
        if (waypoints.empty()) throw ValidationError("track '" + name + "' has no waypoints");
        for (const TrackWaypoint& w : waypoints) {
            if (!std::isfinite(w.position.x) || !std::isfinite(w.position.y))
                throw ValidationError("track '" + name + "' has a non-finite waypoint position");
            if (!(w.wind >= 0.0))
                throw ValidationError("track '" + name + "' has a negative wind speed");
        }
    }

    friend bool operator==(const HurricaneTrack&, const HurricaneTrack&) = default;
};

enum class ComponentKind { Bus, Generator, Line };

struct ComponentFeatures {
    ComponentKind kind = ComponentKind::Line;
    int id = 0;
    double x1 = 0.0;  // mph
    double x2 = 0.0;  // km
};

struct TrackFeatures {
    double x1 = 0.0;
    double x2 = 0.0;
};

// Closest approach of a location to the track polyline. x2 is the minimum
// over track segments; x1 interpolates the endpoint winds of the minimizing
// segment at the projection parameter. A single-waypoint track contributes
// its own wind.
inline TrackFeatures track_features(const HurricaneTrack& track, Point location) {
    track.validate();
    const auto& wp = track.waypoints;
    if (wp.size() == 1)
        return {wp[0].wind, distance(location, wp[0].position)};

    double best_d = std::numeric_limits<double>::infinity();
    double best_wind = wp[0].wind;
    for (std::size_t i = 1; i < wp.size(); ++i) {
        double t = 0.0;
        const double d = point_segment_distance(location, wp[i - 1].position, wp[i].position, &t);
        if (d < best_d) {
            best_d = d;
            best_wind = wp[i - 1].wind + t * (wp[i].wind - wp[i - 1].wind);
        }
    }
    return {best_wind, best_d};
}

// Per-component features: generators at their bus location, lines at the
// closest point of their sampled polyline (step in km). Buses carry no
// failure state and are not emitted.
inline std::vector<ComponentFeatures> component_features(const GridCase& grid,
                                                         const HurricaneTrack& track,
                                                         double line_sample_step_km = 1.0) {
    track.validate();
    std::vector<ComponentFeatures> out;
    out.reserve(grid.generators.size() + grid.lines.size());
    for (const Generator& g : grid.generators) {
        const int bi = grid.bus_index(g.bus);
        const auto& loc = grid.buses[static_cast<std::size_t>(bi)].location;
        if (!loc)
            throw ValidationError("bus " + std::to_string(g.bus) + " lacks layout coordinates");
        const TrackFeatures f = track_features(track, *loc);
        out.push_back({ComponentKind::Generator, g.id, f.x1, f.x2});
    }
    for (const Line& l : grid.lines) {
        const std::vector<Point> poly = grid.line_polyline(l);
        const std::vector<Point> samples = sample_polyline(poly, line_sample_step_km);
        double best_d = std::numeric_limits<double>::infinity();
        double best_wind = 0.0;
        for (const Point& p : samples) {
            const TrackFeatures f = track_features(track, p);
            if (f.x2 < best_d) {
                best_d = f.x2;
                best_wind = f.x1;
            }
        }
        out.push_back({ComponentKind::Line, l.id, best_wind, best_d});
    }
    return out;
}

// --- track file I/O ----------------------------------------------------------
// {"name": "...", "waypoints": [{"x": km, "y": km, "wind_mph": mph}, ...]}

inline void to_json(nlohmann::json& j, const HurricaneTrack& t) {
    j = nlohmann::json{{"name", t.name}, {"waypoints", nlohmann::json::array()}};
    for (const TrackWaypoint& w : t.waypoints)
        j["waypoints"].push_back({{"x", w.position.x}, {"y", w.position.y}, {"wind_mph", w.wind}});
}

inline void from_json(const nlohmann::json& j, HurricaneTrack& t) {
    t.name = j.value("name", "");
    t.waypoints.clear();
    for (const auto& w : j.at("waypoints"))
        t.waypoints.push_back(
            {Point{w.at("x").get<double>(), w.at("y").get<double>()}, w.at("wind_mph").get<double>()});
    t.validate();
}

}  // namespace gridres
