// Resilience extension file: JSON carrying the data the case format lacks.
// Schema (all keys optional):
//   {
//     "voll":          {"<bus id>": dollars_per_mwh, ...},
//     "layout":        {"<bus id>": [x_km, y_km], ...},
//     "delta":         {"<generator id>": mw, ...},
//     "profile":       [m_1, ..., m_T],
//     "line_geometry": {"<line id>": [[x, y], ...], ...}
//   }
// Unspecified voll stays at the uniform default; unspecified delta leaves
// the dispatch deviation unconstrained (p_max).
#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gridres/errors.hpp"
#include "gridres/grid.hpp"

namespace gridres {

struct GridExtensions {
    std::map<int, double> voll;
    std::map<int, Point> layout;
    std::map<int, double> delta;
    std::vector<double> profile;
    std::map<int, std::vector<Point>> line_geometry;
};

namespace detail {

inline int parse_id_key(const std::string& key, const std::string& context) {
    try {
        std::size_t used = 0;
        const int id = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
        return id;
    } catch (const std::exception&) {
        throw ValidationError("extensions: non-integer " + context + " id '" + key + "'");
    }
}

}  // namespace detail

inline GridExtensions parse_extensions(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("extensions", static_cast<int>(e.byte), e.what());
    }
    if (!j.is_object()) throw ValidationError("extensions: top level must be a JSON object");

    GridExtensions ext;
    if (j.contains("voll"))
        for (const auto& [key, value] : j.at("voll").items()) {
            const double v = value.get<double>();
            if (v < 0.0) throw ValidationError("extensions: voll must be >= 0 (bus " + key + ")");
            ext.voll[detail::parse_id_key(key, "bus")] = v;
        }
    if (j.contains("layout"))
        for (const auto& [key, value] : j.at("layout").items())
            ext.layout[detail::parse_id_key(key, "bus")] =
                Point{value.at(0).get<double>(), value.at(1).get<double>()};
    if (j.contains("delta"))
        for (const auto& [key, value] : j.at("delta").items()) {
            const double v = value.get<double>();
            if (v < 0.0) throw ValidationError("delta must be >= 0 (generator " + key + ")");
            ext.delta[detail::parse_id_key(key, "generator")] = v;
        }
    if (j.contains("profile")) {
        ext.profile = j.at("profile").get<std::vector<double>>();
        for (double m : ext.profile)
            if (m < 0.0) throw ValidationError("extensions: profile multipliers must be >= 0");
    }
    if (j.contains("line_geometry"))
        for (const auto& [key, value] : j.at("line_geometry").items()) {
            std::vector<Point> poly;
            for (const auto& p : value) poly.push_back(Point{p.at(0).get<double>(), p.at(1).get<double>()});
            if (poly.size() < 2)
                throw ValidationError("extensions: line geometry needs at least 2 points (line " + key + ")");
            ext.line_geometry[detail::parse_id_key(key, "line")] = poly;
        }
    return ext;
}

// Merges an extension record into a parsed case. The profile, when present,
// redefines the horizon.
inline void apply_extensions(GridCase& grid, const GridExtensions& ext) {
    for (const auto& [bus_id, v] : ext.voll) {
        const int i = grid.bus_index(bus_id);
        if (i < 0) throw ValidationError("extensions: voll references unknown bus " + std::to_string(bus_id));
        grid.buses[static_cast<std::size_t>(i)].voll = v;
    }
    for (const auto& [bus_id, p] : ext.layout) {
        const int i = grid.bus_index(bus_id);
        if (i < 0) throw ValidationError("extensions: layout references unknown bus " + std::to_string(bus_id));
        grid.buses[static_cast<std::size_t>(i)].location = p;
    }
    for (const auto& [gen_id, d] : ext.delta) {
        const int i = grid.generator_index(gen_id);
        if (i < 0)
            throw ValidationError("extensions: delta references unknown generator " + std::to_string(gen_id));
        grid.generators[static_cast<std::size_t>(i)].delta = d;
    }
    if (!ext.profile.empty()) {
        grid.load_profile = ext.profile;
        grid.horizon = static_cast<int>(ext.profile.size());
    }
    for (const auto& [line_id, poly] : ext.line_geometry) {
        const int i = grid.line_index(line_id);
        if (i < 0)
            throw ValidationError("extensions: geometry references unknown line " + std::to_string(line_id));
        grid.lines[static_cast<std::size_t>(i)].geometry = poly;
    }
    grid.validate();
}

}  // namespace gridres
