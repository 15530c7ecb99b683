// Power-grid domain model: buses, generators, lines, the assembled case,
// and per-scenario outage states. A GridCase is immutable in spirit once
// validated; nothing here mutates shared state.
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gridres/errors.hpp"
#include "gridres/planar.hpp"

namespace gridres {

struct Bus {
    int id = 0;
    double base_load = 0.0;          // MW at profile multiplier 1
    double voll = 1000.0;            // $/MWh
    std::optional<Point> location;   // km; required only for hazard features

    friend bool operator==(const Bus&, const Bus&) = default;
};

struct Generator {
    int id = 0;
    int bus = 0;
    double p_min = 0.0;              // MW
    double p_max = 0.0;              // MW
    double delta = -1.0;             // MW; max |base - contingency| dispatch shift, <0 = unset (defaults to p_max)
    std::vector<std::uint8_t> committed;  // per-time flag; empty = committed at all times

    bool is_committed(int t) const {
        return committed.empty() || committed[static_cast<std::size_t>(t)] != 0;
    }
    double effective_delta() const { return delta < 0.0 ? p_max : delta; }

    friend bool operator==(const Generator&, const Generator&) = default;
};

struct Line {
    int id = 0;
    int from_bus = 0;
    int to_bus = 0;
    double reactance = 0.0;          // per-unit, > 0
    double pl_max = 0.0;             // MW, > 0
    std::vector<Point> geometry;     // polyline; empty = straight segment between endpoint buses

    friend bool operator==(const Line&, const Line&) = default;
};

// Line-bus incidence: +1 at the from-bus, -1 at the to-bus, 0 elsewhere.
// Indexed by (line position, bus position) within the owning GridCase.
struct IncidenceMatrix {
    int n_lines = 0;
    int n_buses = 0;
    std::vector<std::int8_t> a;  // row-major

    std::int8_t at(int line_idx, int bus_idx) const {
        return a[static_cast<std::size_t>(line_idx) * n_buses + bus_idx];
    }
};

struct GridCase {
    std::vector<Bus> buses;
    std::vector<Generator> generators;
    std::vector<Line> lines;
    double base_mva = 100.0;
    int horizon = 24;                  // number of hourly periods T
    std::vector<double> load_profile;  // length T, multiplier >= 0; empty = flat 1.0

    int bus_index(int bus_id) const {
        for (std::size_t i = 0; i < buses.size(); ++i)
            if (buses[i].id == bus_id) return static_cast<int>(i);
        return -1;
    }
    int line_index(int line_id) const {
        for (std::size_t i = 0; i < lines.size(); ++i)
            if (lines[i].id == line_id) return static_cast<int>(i);
        return -1;
    }
    int generator_index(int gen_id) const {
        for (std::size_t i = 0; i < generators.size(); ++i)
            if (generators[i].id == gen_id) return static_cast<int>(i);
        return -1;
    }

    double profile_at(int t) const {
        return load_profile.empty() ? 1.0 : load_profile[static_cast<std::size_t>(t)];
    }
    // D_bt
    double demand(int bus_idx, int t) const {
        return buses[static_cast<std::size_t>(bus_idx)].base_load * profile_at(t);
    }
    double total_base_load() const {
        double s = 0.0;
        for (const Bus& b : buses) s += b.base_load;
        return s;
    }

    // The polyline a line occupies: explicit geometry if present, otherwise
    // the straight segment between its endpoint bus locations.
    std::vector<Point> line_polyline(const Line& line) const;

    void validate() const;

    friend bool operator==(const GridCase&, const GridCase&) = default;
};

inline std::vector<Point> GridCase::line_polyline(const Line& line) const {
    if (!line.geometry.empty()) return line.geometry;
    const int fi = bus_index(line.from_bus);
    const int ti = bus_index(line.to_bus);
    if (fi < 0 || ti < 0) throw ValidationError("line " + std::to_string(line.id) + " references unknown bus");
    const auto& from = buses[static_cast<std::size_t>(fi)].location;
    const auto& to = buses[static_cast<std::size_t>(ti)].location;
    if (!from || !to)
        throw ValidationError("line " + std::to_string(line.id) + " endpoints lack layout coordinates");
    return {*from, *to};
}

inline void GridCase::validate() const {
    std::map<int, int> seen;
    for (const Bus& b : buses) {
        if (++seen[b.id] > 1) throw ValidationError("duplicate bus id " + std::to_string(b.id));
        if (!std::isfinite(b.base_load) || b.base_load < 0.0)
            throw ValidationError("bus " + std::to_string(b.id) + ": base load must be finite and >= 0");
        if (!std::isfinite(b.voll) || b.voll < 0.0)
            throw ValidationError("bus " + std::to_string(b.id) + ": voll must be finite and >= 0");
    }
    std::map<int, int> gen_seen;
    for (const Generator& g : generators) {
        if (++gen_seen[g.id] > 1) throw ValidationError("duplicate generator id " + std::to_string(g.id));
        if (bus_index(g.bus) < 0)
            throw ValidationError("generator " + std::to_string(g.id) + " references unknown bus " +
                                  std::to_string(g.bus));
        if (g.p_min < 0.0 || g.p_min > g.p_max)
            throw ValidationError("generator " + std::to_string(g.id) + ": require 0 <= p_min <= p_max");
        if (!g.committed.empty() && static_cast<int>(g.committed.size()) != horizon)
            throw ValidationError("generator " + std::to_string(g.id) + ": commitment length != horizon");
    }
    std::map<int, int> line_seen;
    for (const Line& l : lines) {
        if (++line_seen[l.id] > 1) throw ValidationError("duplicate line id " + std::to_string(l.id));
        if (l.from_bus == l.to_bus)
            throw ValidationError("line " + std::to_string(l.id) + ": from and to bus coincide");
        if (bus_index(l.from_bus) < 0)
            throw ValidationError("line " + std::to_string(l.id) + " references unknown bus " +
                                  std::to_string(l.from_bus));
        if (bus_index(l.to_bus) < 0)
            throw ValidationError("line " + std::to_string(l.id) + " references unknown bus " +
                                  std::to_string(l.to_bus));
        if (!(l.reactance > 0.0))
            throw ValidationError("line " + std::to_string(l.id) + ": reactance must be > 0");
        if (!(l.pl_max > 0.0))
            throw ValidationError("line " + std::to_string(l.id) + ": flow limit must be > 0");
    }
    if (horizon < 1) throw ValidationError("horizon must be >= 1");
    if (!load_profile.empty() && static_cast<int>(load_profile.size()) != horizon)
        throw ValidationError("load profile length != horizon");
    for (double m : load_profile)
        if (!std::isfinite(m) || m < 0.0) throw ValidationError("load profile multipliers must be >= 0");
}

inline IncidenceMatrix incidence(const GridCase& grid) {
    IncidenceMatrix inc;
    inc.n_lines = static_cast<int>(grid.lines.size());
    inc.n_buses = static_cast<int>(grid.buses.size());
    inc.a.assign(static_cast<std::size_t>(inc.n_lines) * inc.n_buses, 0);
    for (int l = 0; l < inc.n_lines; ++l) {
        const Line& line = grid.lines[static_cast<std::size_t>(l)];
        inc.a[static_cast<std::size_t>(l) * inc.n_buses + grid.bus_index(line.from_bus)] = 1;
        inc.a[static_cast<std::size_t>(l) * inc.n_buses + grid.bus_index(line.to_bus)] = -1;
    }
    return inc;
}

// Outage states for one contingency scenario: UX per (generator, period),
// UY per (line, period); 1 = in service. Scenario 0 is the all-operational
// base case. Indexed by component position within the owning GridCase.
struct OutageScenario {
    int id = 0;
    std::string name;
    int n_generators = 0;
    int n_lines = 0;
    int horizon = 0;
    std::vector<std::uint8_t> ux_;  // [gen_idx * horizon + t]
    std::vector<std::uint8_t> uy_;  // [line_idx * horizon + t]

    OutageScenario() = default;
    OutageScenario(int scenario_id, const GridCase& grid)
        : id(scenario_id),
          n_generators(static_cast<int>(grid.generators.size())),
          n_lines(static_cast<int>(grid.lines.size())),
          horizon(grid.horizon),
          ux_(static_cast<std::size_t>(n_generators) * horizon, 1),
          uy_(static_cast<std::size_t>(n_lines) * horizon, 1) {}

    int ux(int gen_idx, int t) const { return ux_[static_cast<std::size_t>(gen_idx) * horizon + t]; }
    int uy(int line_idx, int t) const { return uy_[static_cast<std::size_t>(line_idx) * horizon + t]; }
    void set_ux(int gen_idx, int t, int v) { ux_[static_cast<std::size_t>(gen_idx) * horizon + t] = static_cast<std::uint8_t>(v); }
    void set_uy(int line_idx, int t, int v) { uy_[static_cast<std::size_t>(line_idx) * horizon + t] = static_cast<std::uint8_t>(v); }

    void fail_generator_all_t(int gen_idx) {
        for (int t = 0; t < horizon; ++t) set_ux(gen_idx, t, 0);
    }
    void fail_line_all_t(int line_idx) {
        for (int t = 0; t < horizon; ++t) set_uy(line_idx, t, 0);
    }

    friend bool operator==(const OutageScenario&, const OutageScenario&) = default;
};

// --- JSON round-trip (internal representation) ------------------------------

inline void to_json(nlohmann::json& j, const Bus& b) {
    j = {{"id", b.id}, {"load", b.base_load}, {"voll", b.voll}};
    if (b.location) {
        j["x"] = b.location->x;
        j["y"] = b.location->y;
    }
}

inline void from_json(const nlohmann::json& j, Bus& b) {
    b.id = j.at("id").get<int>();
    b.base_load = j.at("load").get<double>();
    b.voll = j.at("voll").get<double>();
    if (j.contains("x")) b.location = Point{j.at("x").get<double>(), j.at("y").get<double>()};
}

inline void to_json(nlohmann::json& j, const Generator& g) {
    j = {{"id", g.id}, {"bus", g.bus}, {"p_min", g.p_min}, {"p_max", g.p_max}, {"delta", g.delta}};
    if (!g.committed.empty()) j["committed"] = g.committed;
}

inline void from_json(const nlohmann::json& j, Generator& g) {
    g.id = j.at("id").get<int>();
    g.bus = j.at("bus").get<int>();
    g.p_min = j.at("p_min").get<double>();
    g.p_max = j.at("p_max").get<double>();
    g.delta = j.at("delta").get<double>();
    if (j.contains("committed")) g.committed = j.at("committed").get<std::vector<std::uint8_t>>();
}

inline void to_json(nlohmann::json& j, const Line& l) {
    j = {{"id", l.id}, {"from", l.from_bus}, {"to", l.to_bus},
         {"reactance", l.reactance}, {"pl_max", l.pl_max}};
    if (!l.geometry.empty()) {
        nlohmann::json geo = nlohmann::json::array();
        for (const Point& p : l.geometry) geo.push_back({p.x, p.y});
        j["geometry"] = geo;
    }
}

inline void from_json(const nlohmann::json& j, Line& l) {
    l.id = j.at("id").get<int>();
    l.from_bus = j.at("from").get<int>();
    l.to_bus = j.at("to").get<int>();
    l.reactance = j.at("reactance").get<double>();
    l.pl_max = j.at("pl_max").get<double>();
    if (j.contains("geometry"))
        for (const auto& p : j.at("geometry"))
            l.geometry.push_back(Point{p.at(0).get<double>(), p.at(1).get<double>()});
}

inline void to_json(nlohmann::json& j, const GridCase& g) {
    j = {{"base_mva", g.base_mva},
         {"horizon", g.horizon},
         {"load_profile", g.load_profile},
         {"buses", g.buses},
         {"generators", g.generators},
         {"lines", g.lines}};
}

inline void from_json(const nlohmann::json& j, GridCase& g) {
    g.base_mva = j.at("base_mva").get<double>();
    g.horizon = j.at("horizon").get<int>();
    g.load_profile = j.at("load_profile").get<std::vector<double>>();
    g.buses = j.at("buses").get<std::vector<Bus>>();
    g.generators = j.at("generators").get<std::vector<Generator>>();
    g.lines = j.at("lines").get<std::vector<Line>>();
}

}  // namespace gridres
