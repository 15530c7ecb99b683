// Minimum-load-curtailment model: a joint LP over all periods and scenarios
// with VOLL-weighted curtailment cost, nodal balance, dispatch and
// deviation limits, flow caps, and big-M flow/angle coupling that outaged
// lines escape. Periods never couple, so the solver decomposes the joint
// problem by period (identical optimum, orders of magnitude less work) and
// reuses solutions of identical period slices.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gridres/errors.hpp"
#include "gridres/grid.hpp"
#include "gridres/lp.hpp"

namespace gridres {

struct CurtailmentOptions {
    std::vector<double> scenario_weights;  // parallel to the scenario list; empty = all 1
    SimplexOptions simplex;

    double weight(std::size_t scenario_pos) const {
        return scenario_weights.empty() ? 1.0 : scenario_weights.at(scenario_pos);
    }
};

// Assembled LP plus the variable layout needed to unpack a solution.
// Index accessors return -1 where no variable exists (curtailment at a
// zero-demand bus).
struct CurtailmentLp {
    LpProblem lp;
    std::vector<int> periods;  // global period index per slot
    int n_gens = 0, n_lines = 0, n_buses = 0, n_scenarios = 0;
    std::vector<int> p_idx, pl_idx, theta_idx, lc_idx;

    int slot_count() const { return static_cast<int>(periods.size()); }
    int p_index(int i, int slot, int s) const {
        return p_idx[(static_cast<std::size_t>(i) * periods.size() + slot) * n_scenarios + s];
    }
    int pl_index(int l, int slot, int s) const {
        return pl_idx[(static_cast<std::size_t>(l) * periods.size() + slot) * n_scenarios + s];
    }
    int theta_index(int b, int slot, int s) const {
        return theta_idx[(static_cast<std::size_t>(b) * periods.size() + slot) * n_scenarios + s];
    }
    int lc_index(int b, int slot, int s) const {
        return lc_idx[(static_cast<std::size_t>(b) * periods.size() + slot) * n_scenarios + s];
    }
};

namespace detail {

inline std::string idx_tag(const char* family, const char* k1, int v1, int t, int s) {
    std::ostringstream os;
    os << family << "[" << k1 << "=" << v1 << ",t=" << t << ",s=" << s << "]";
    return os.str();
}

inline int find_base_scenario(const std::vector<OutageScenario>& scenarios) {
    int base = -1;
    for (std::size_t k = 0; k < scenarios.size(); ++k)
        if (scenarios[k].id == 0) {
            if (base >= 0) throw ValidationError("multiple scenarios carry id 0");
            base = static_cast<int>(k);
        }
    if (base < 0) throw ValidationError("the all-operational base scenario (id 0) is required");
    return base;
}

inline void check_scenarios(const GridCase& grid, const std::vector<OutageScenario>& scenarios) {
    for (const OutageScenario& s : scenarios) {
        if (s.n_generators != static_cast<int>(grid.generators.size()) ||
            s.n_lines != static_cast<int>(grid.lines.size()) || s.horizon != grid.horizon)
            throw ValidationError("scenario " + std::to_string(s.id) +
                                  " does not cover every component and period of the case");
    }
}

inline int reference_bus_index(const GridCase& grid) {
    int best = -1;
    for (const Generator& g : grid.generators) {
        bool committed = false;
        for (int t = 0; t < grid.horizon; ++t) committed = committed || g.is_committed(t);
        if (!committed) continue;
        const int bi = grid.bus_index(g.bus);
        if (best < 0 || grid.buses[static_cast<std::size_t>(bi)].id <
                            grid.buses[static_cast<std::size_t>(best)].id)
            best = bi;
    }
    if (best < 0) throw ValidationError("no committed generator to anchor the reference bus");
    return best;
}

// Core builder over an arbitrary subset of periods.
inline CurtailmentLp build_lp_periods(const GridCase& grid,
                                      const std::vector<OutageScenario>& scenarios,
                                      const std::vector<int>& periods,
                                      const CurtailmentOptions& opts) {
    grid.validate();
    check_scenarios(grid, scenarios);
    const int base = find_base_scenario(scenarios);
    const int ref_bus = reference_bus_index(grid);
    const IncidenceMatrix inc = incidence(grid);
    constexpr double pi = std::numbers::pi;

    CurtailmentLp out;
    out.periods = periods;
    out.n_gens = static_cast<int>(grid.generators.size());
    out.n_lines = static_cast<int>(grid.lines.size());
    out.n_buses = static_cast<int>(grid.buses.size());
    out.n_scenarios = static_cast<int>(scenarios.size());
    const std::size_t nt = periods.size();
    const std::size_t ns = scenarios.size();
    out.p_idx.assign(static_cast<std::size_t>(out.n_gens) * nt * ns, -1);
    out.pl_idx.assign(static_cast<std::size_t>(out.n_lines) * nt * ns, -1);
    out.theta_idx.assign(static_cast<std::size_t>(out.n_buses) * nt * ns, -1);
    out.lc_idx.assign(static_cast<std::size_t>(out.n_buses) * nt * ns, -1);
    LpProblem& lp = out.lp;

    auto flat = [&](int comp, int slot, int s) {
        return (static_cast<std::size_t>(comp) * nt + static_cast<std::size_t>(slot)) * ns +
               static_cast<std::size_t>(s);
    };

    for (std::size_t slot = 0; slot < nt; ++slot) {
        const int t = periods[slot];
        for (std::size_t s = 0; s < ns; ++s) {
            const OutageScenario& sc = scenarios[s];
            for (int i = 0; i < out.n_gens; ++i) {
                const Generator& g = grid.generators[static_cast<std::size_t>(i)];
                const double on = g.is_committed(t) && sc.ux(i, t) ? 1.0 : 0.0;
                out.p_idx[flat(i, static_cast<int>(slot), static_cast<int>(s))] =
                    lp.add_variable(idx_tag("P", "i", g.id, t, sc.id), g.p_min * on, g.p_max * on);
            }
            for (int l = 0; l < out.n_lines; ++l) {
                const Line& line = grid.lines[static_cast<std::size_t>(l)];
                const double cap = sc.uy(l, t) ? line.pl_max : 0.0;
                out.pl_idx[flat(l, static_cast<int>(slot), static_cast<int>(s))] =
                    lp.add_variable(idx_tag("PL", "l", line.id, t, sc.id), -cap, cap);
            }
            for (int b = 0; b < out.n_buses; ++b) {
                const Bus& bus = grid.buses[static_cast<std::size_t>(b)];
                const bool is_ref = b == ref_bus;
                out.theta_idx[flat(b, static_cast<int>(slot), static_cast<int>(s))] =
                    lp.add_variable(idx_tag("theta", "b", bus.id, t, sc.id), is_ref ? 0.0 : -pi,
                                    is_ref ? 0.0 : pi);
                const double demand = grid.demand(b, t);
                if (demand > 0.0)
                    out.lc_idx[flat(b, static_cast<int>(slot), static_cast<int>(s))] =
                        lp.add_variable(idx_tag("LC", "b", bus.id, t, sc.id), 0.0, demand,
                                        bus.voll * opts.weight(s));
            }
        }
    }

    for (std::size_t slot = 0; slot < nt; ++slot) {
        const int t = periods[slot];
        for (std::size_t s = 0; s < ns; ++s) {
            const OutageScenario& sc = scenarios[s];
            // nodal balance: generation + net line injection + curtailment = demand
            for (int b = 0; b < out.n_buses; ++b) {
                std::vector<std::pair<int, double>> coeffs;
                for (int i = 0; i < out.n_gens; ++i)
                    if (grid.bus_index(grid.generators[static_cast<std::size_t>(i)].bus) == b)
                        coeffs.push_back({out.p_index(i, static_cast<int>(slot), static_cast<int>(s)), 1.0});
                for (int l = 0; l < out.n_lines; ++l) {
                    const int a = inc.at(l, b);
                    if (a != 0)
                        coeffs.push_back({out.pl_index(l, static_cast<int>(slot), static_cast<int>(s)),
                                          -static_cast<double>(a)});
                }
                const int lc = out.lc_index(b, static_cast<int>(slot), static_cast<int>(s));
                if (lc >= 0) coeffs.push_back({lc, 1.0});
                lp.add_row(idx_tag("balance", "b", grid.buses[static_cast<std::size_t>(b)].id, t, sc.id),
                           std::move(coeffs), Relation::Equal, grid.demand(b, t));
            }
            // flow/angle coupling with big-M relief for outaged lines
            for (int l = 0; l < out.n_lines; ++l) {
                const Line& line = grid.lines[static_cast<std::size_t>(l)];
                const double k = grid.base_mva / line.reactance;
                const double big_m = line.pl_max + 2.0 * pi * k;
                const double relief = big_m * (1.0 - sc.uy(l, t));
                const int pl = out.pl_index(l, static_cast<int>(slot), static_cast<int>(s));
                const int th_from =
                    out.theta_index(grid.bus_index(line.from_bus), static_cast<int>(slot), static_cast<int>(s));
                const int th_to =
                    out.theta_index(grid.bus_index(line.to_bus), static_cast<int>(slot), static_cast<int>(s));
                lp.add_row(idx_tag("flow_couple_ub", "l", line.id, t, sc.id),
                           {{pl, 1.0}, {th_from, -k}, {th_to, k}}, Relation::LessEqual, relief);
                lp.add_row(idx_tag("flow_couple_lb", "l", line.id, t, sc.id),
                           {{pl, -1.0}, {th_from, k}, {th_to, -k}}, Relation::LessEqual, relief);
            }
            // dispatch deviation from the base scenario
            if (static_cast<int>(s) != base) {
                for (int i = 0; i < out.n_gens; ++i) {
                    const Generator& g = grid.generators[static_cast<std::size_t>(i)];
                    const double delta = g.effective_delta();
                    const int p0 = out.p_index(i, static_cast<int>(slot), base);
                    const int ps = out.p_index(i, static_cast<int>(slot), static_cast<int>(s));
                    lp.add_row(idx_tag("ramp_up", "i", g.id, t, sc.id), {{p0, 1.0}, {ps, -1.0}},
                               Relation::LessEqual, delta);
                    lp.add_row(idx_tag("ramp_dn", "i", g.id, t, sc.id), {{ps, 1.0}, {p0, -1.0}},
                               Relation::LessEqual, delta);
                }
            }
        }
    }
    return out;
}

}  // namespace detail

// The full joint LP over every period and scenario.
inline CurtailmentLp build_lp(const GridCase& grid, const std::vector<OutageScenario>& scenarios,
                              const CurtailmentOptions& opts = {}) {
    std::vector<int> periods(static_cast<std::size_t>(grid.horizon));
    for (int t = 0; t < grid.horizon; ++t) periods[static_cast<std::size_t>(t)] = t;
    return detail::build_lp_periods(grid, scenarios, periods, opts);
}

struct CurtailmentSolution {
    int n_buses = 0, n_gens = 0, n_lines = 0, horizon = 0, n_scenarios = 0;
    std::vector<int> scenario_ids;
    std::vector<double> lc, p, pl, theta;  // [component][t][scenario position]
    double objective = 0.0;
    std::uint64_t lp_iterations = 0;

    double lc_at(int b, int t, int s) const { return lc[at(b, t, s)]; }
    double p_at(int i, int t, int s) const { return p[at(i, t, s)]; }
    double pl_at(int l, int t, int s) const { return pl[at(l, t, s)]; }
    double theta_at(int b, int t, int s) const { return theta[at(b, t, s)]; }

    // MWh aggregate over the horizon (one period = one hour)
    double lc_bus_scenario_mwh(int b, int s) const {
        double sum = 0.0;
        for (int t = 0; t < horizon; ++t) sum += lc_at(b, t, s);
        return sum;
    }
    double total_curtailment_mwh() const {
        double sum = 0.0;
        for (double v : lc) sum += v;
        return sum;
    }

private:
    std::size_t at(int comp, int t, int s) const {
        return (static_cast<std::size_t>(comp) * horizon + static_cast<std::size_t>(t)) *
                   n_scenarios +
               static_cast<std::size_t>(s);
    }
};

namespace detail {

inline CurtailmentSolution make_empty_solution(const GridCase& grid,
                                               const std::vector<OutageScenario>& scenarios) {
    CurtailmentSolution sol;
    sol.n_buses = static_cast<int>(grid.buses.size());
    sol.n_gens = static_cast<int>(grid.generators.size());
    sol.n_lines = static_cast<int>(grid.lines.size());
    sol.horizon = grid.horizon;
    sol.n_scenarios = static_cast<int>(scenarios.size());
    for (const OutageScenario& s : scenarios) sol.scenario_ids.push_back(s.id);
    const std::size_t nbts = static_cast<std::size_t>(sol.n_buses) * sol.horizon * sol.n_scenarios;
    sol.lc.assign(nbts, 0.0);
    sol.theta.assign(nbts, 0.0);
    sol.p.assign(static_cast<std::size_t>(sol.n_gens) * sol.horizon * sol.n_scenarios, 0.0);
    sol.pl.assign(static_cast<std::size_t>(sol.n_lines) * sol.horizon * sol.n_scenarios, 0.0);
    return sol;
}

inline void scatter_slice(const CurtailmentLp& clp, const LpSolution& lps, int slot,
                          CurtailmentSolution& sol) {
    const int t = clp.periods[static_cast<std::size_t>(slot)];
    auto at = [&](int comp, int s) {
        return (static_cast<std::size_t>(comp) * sol.horizon + static_cast<std::size_t>(t)) *
                   sol.n_scenarios +
               static_cast<std::size_t>(s);
    };
    for (int s = 0; s < clp.n_scenarios; ++s) {
        for (int i = 0; i < clp.n_gens; ++i)
            sol.p[at(i, s)] = lps.x[static_cast<std::size_t>(clp.p_index(i, slot, s))];
        for (int l = 0; l < clp.n_lines; ++l)
            sol.pl[at(l, s)] = lps.x[static_cast<std::size_t>(clp.pl_index(l, slot, s))];
        for (int b = 0; b < clp.n_buses; ++b) {
            sol.theta[at(b, s)] = lps.x[static_cast<std::size_t>(clp.theta_index(b, slot, s))];
            const int lc = clp.lc_index(b, slot, s);
            sol.lc[at(b, s)] = lc >= 0 ? lps.x[static_cast<std::size_t>(lc)] : 0.0;
        }
    }
}

// Bytes identifying everything a period slice depends on; equal keys give
// identical sub-LPs.
inline std::string period_cache_key(const GridCase& grid,
                                    const std::vector<OutageScenario>& scenarios, int t) {
    std::string key;
    auto push = [&key](double v) {
        key.append(reinterpret_cast<const char*>(&v), sizeof v);
    };
    push(grid.profile_at(t));
    for (const Generator& g : grid.generators) push(g.is_committed(t) ? 1.0 : 0.0);
    for (const OutageScenario& sc : scenarios) {
        for (int i = 0; i < sc.n_generators; ++i) push(static_cast<double>(sc.ux(i, t)));
        for (int l = 0; l < sc.n_lines; ++l) push(static_cast<double>(sc.uy(l, t)));
    }
    return key;
}

}  // namespace detail

// Unpacks a solved joint LP (used by tests to cross-check the decomposed path).
inline CurtailmentSolution extract_solution(const CurtailmentLp& clp, const LpSolution& lps,
                                            const GridCase& grid,
                                            const std::vector<OutageScenario>& scenarios) {
    if (lps.status != LpStatus::Optimal)
        throw NumericalError("cannot extract a non-optimal LP solution");
    CurtailmentSolution sol = detail::make_empty_solution(grid, scenarios);
    for (int slot = 0; slot < clp.slot_count(); ++slot) detail::scatter_slice(clp, lps, slot, sol);
    sol.objective = lps.objective;
    sol.lp_iterations = lps.iterations;
    return sol;
}

// Builds and solves the joint problem period by period. The model is always
// feasible (full curtailment with zero dispatch and flows satisfies every
// constraint), so a non-optimal status is an internal solver failure.
inline CurtailmentSolution min_load_curtailment(const GridCase& grid,
                                                const std::vector<OutageScenario>& scenarios,
                                                const CurtailmentOptions& opts = {}) {
    grid.validate();
    detail::check_scenarios(grid, scenarios);
    (void)detail::find_base_scenario(scenarios);

    CurtailmentSolution sol = detail::make_empty_solution(grid, scenarios);
    struct CachedSlice {
        CurtailmentLp clp;
        LpSolution lps;
    };
    std::map<std::string, const CachedSlice*> cache;
    std::vector<std::unique_ptr<CachedSlice>> storage;

    for (int t = 0; t < grid.horizon; ++t) {
        const std::string key = detail::period_cache_key(grid, scenarios, t);
        const CachedSlice* hit = nullptr;
        if (auto it = cache.find(key); it != cache.end()) {
            hit = it->second;
        } else {
            auto slice = std::make_unique<CachedSlice>();
            slice->clp = detail::build_lp_periods(grid, scenarios, {t}, opts);
            slice->lps = simplex_solve(slice->clp.lp, opts.simplex);
            if (slice->lps.status != LpStatus::Optimal)
                throw NumericalError(
                    "curtailment LP reported " +
                    std::string(slice->lps.status == LpStatus::Infeasible ? "infeasible"
                                                                          : "unbounded") +
                    " at period " + std::to_string(t) +
                    "; the model admits full curtailment, so this is an internal error");
            hit = slice.get();
            cache.emplace(key, hit);
            storage.push_back(std::move(slice));
        }
        // scatter under this period index: the cached slice was built for some
        // representative period, but slice data are identical by key
        CurtailmentLp clp_t = hit->clp;
        clp_t.periods = {t};
        detail::scatter_slice(clp_t, hit->lps, 0, sol);
        sol.objective += hit->lps.objective;
        sol.lp_iterations += hit->lps.iterations;
    }
    return sol;
}

// --- independent verification -------------------------------------------------

struct VerificationReport {
    double max_balance_residual = 0.0;
    double max_gen_bound_excess = 0.0;
    double max_ramp_excess = 0.0;
    double max_flow_bound_excess = 0.0;
    double max_live_coupling_residual = 0.0;  // |PL - k dtheta| on in-service lines
    double max_outaged_coupling_excess = 0.0; // excess over M(1-UY) on outaged lines
    double max_lc_bound_excess = 0.0;
    double max_theta_bound_excess = 0.0;
    std::vector<std::string> violations;

    bool ok(double balance_tol = 1e-7, double coupling_tol = 1e-6) const {
        return max_balance_residual <= balance_tol && max_live_coupling_residual <= coupling_tol &&
               max_gen_bound_excess <= balance_tol && max_ramp_excess <= balance_tol &&
               max_flow_bound_excess <= balance_tol && max_outaged_coupling_excess <= balance_tol &&
               max_lc_bound_excess <= balance_tol && max_theta_bound_excess <= balance_tol;
    }
};

// Recomputes every constraint family from the raw case data, independent of
// the LpProblem object the solver consumed.
inline VerificationReport verify_solution(const GridCase& grid,
                                          const std::vector<OutageScenario>& scenarios,
                                          const CurtailmentSolution& sol,
                                          double flag_balance_tol = 1e-7,
                                          double flag_coupling_tol = 1e-6) {
    VerificationReport rep;
    const int base = detail::find_base_scenario(scenarios);
    constexpr double pi = std::numbers::pi;
    auto flag = [&rep](const std::string& what, double magnitude, double tol) {
        if (magnitude > tol)
            rep.violations.push_back(what + " residual " + std::to_string(magnitude));
    };

    for (int s = 0; s < static_cast<int>(scenarios.size()); ++s) {
        const OutageScenario& sc = scenarios[static_cast<std::size_t>(s)];
        for (int t = 0; t < grid.horizon; ++t) {
            for (int b = 0; b < static_cast<int>(grid.buses.size()); ++b) {
                double injection = sol.lc_at(b, t, s) - grid.demand(b, t);
                for (int i = 0; i < static_cast<int>(grid.generators.size()); ++i)
                    if (grid.bus_index(grid.generators[static_cast<std::size_t>(i)].bus) == b)
                        injection += sol.p_at(i, t, s);
                for (int l = 0; l < static_cast<int>(grid.lines.size()); ++l) {
                    const Line& line = grid.lines[static_cast<std::size_t>(l)];
                    if (grid.bus_index(line.from_bus) == b) injection -= sol.pl_at(l, t, s);
                    if (grid.bus_index(line.to_bus) == b) injection += sol.pl_at(l, t, s);
                }
                const double r = std::abs(injection);
                rep.max_balance_residual = std::max(rep.max_balance_residual, r);
                flag("balance bus " + std::to_string(grid.buses[static_cast<std::size_t>(b)].id) +
                         " t=" + std::to_string(t) + " s=" + std::to_string(sc.id),
                     r, flag_balance_tol);

                const double lc = sol.lc_at(b, t, s);
                const double lc_excess = std::max(-lc, lc - grid.demand(b, t));
                rep.max_lc_bound_excess = std::max(rep.max_lc_bound_excess, lc_excess);
                const double th = std::abs(sol.theta_at(b, t, s));
                rep.max_theta_bound_excess = std::max(rep.max_theta_bound_excess, th - pi);
            }
            for (int i = 0; i < static_cast<int>(grid.generators.size()); ++i) {
                const Generator& g = grid.generators[static_cast<std::size_t>(i)];
                const double on = g.is_committed(t) && sc.ux(i, t) ? 1.0 : 0.0;
                const double p = sol.p_at(i, t, s);
                const double excess = std::max(g.p_min * on - p, p - g.p_max * on);
                rep.max_gen_bound_excess = std::max(rep.max_gen_bound_excess, excess);
                flag("gen bounds i=" + std::to_string(g.id) + " t=" + std::to_string(t) +
                         " s=" + std::to_string(sc.id),
                     excess, flag_balance_tol);
                if (s != base) {
                    const double dev =
                        std::abs(sol.p_at(i, t, base) - p) - g.effective_delta();
                    rep.max_ramp_excess = std::max(rep.max_ramp_excess, dev);
                    flag("ramp i=" + std::to_string(g.id) + " t=" + std::to_string(t) +
                             " s=" + std::to_string(sc.id),
                         dev, flag_balance_tol);
                }
            }
            for (int l = 0; l < static_cast<int>(grid.lines.size()); ++l) {
                const Line& line = grid.lines[static_cast<std::size_t>(l)];
                const double k = grid.base_mva / line.reactance;
                const double pl = sol.pl_at(l, t, s);
                const double cap = line.pl_max * sc.uy(l, t);
                const double cap_excess = std::abs(pl) - cap;
                rep.max_flow_bound_excess = std::max(rep.max_flow_bound_excess, cap_excess);
                flag("flow cap l=" + std::to_string(line.id) + " t=" + std::to_string(t) +
                         " s=" + std::to_string(sc.id),
                     cap_excess, flag_balance_tol);
                const double dtheta = sol.theta_at(grid.bus_index(line.from_bus), t, s) -
                                      sol.theta_at(grid.bus_index(line.to_bus), t, s);
                const double coupling = std::abs(pl - k * dtheta);
                if (sc.uy(l, t)) {
                    rep.max_live_coupling_residual =
                        std::max(rep.max_live_coupling_residual, coupling);
                    flag("flow coupling l=" + std::to_string(line.id) + " t=" + std::to_string(t) +
                             " s=" + std::to_string(sc.id),
                         coupling, flag_coupling_tol);
                } else {
                    const double big_m = line.pl_max + 2.0 * pi * k;
                    rep.max_outaged_coupling_excess =
                        std::max(rep.max_outaged_coupling_excess, coupling - big_m);
                }
            }
        }
    }
    return rep;
}

inline nlohmann::json verification_to_json(const VerificationReport& r) {
    return {{"max_balance_residual", r.max_balance_residual},
            {"max_gen_bound_excess", r.max_gen_bound_excess},
            {"max_ramp_excess", r.max_ramp_excess},
            {"max_flow_bound_excess", r.max_flow_bound_excess},
            {"max_live_coupling_residual", r.max_live_coupling_residual},
            {"max_outaged_coupling_excess", r.max_outaged_coupling_excess},
            {"max_lc_bound_excess", r.max_lc_bound_excess},
            {"max_theta_bound_excess", r.max_theta_bound_excess},
            {"ok", r.ok()},
            {"violations", r.violations}};
}

// --- scenario files -------------------------------------------------------------
// {"scenarios": [{"s": 1, "name": "...", "lines_out": [...], "gens_out": [...]}]}
// Outages are constant over the horizon. The base scenario is implicit.

inline std::vector<OutageScenario> load_scenarios(const std::string& text, const GridCase& grid,
                                                  const std::string& source = "scenarios") {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(source, static_cast<int>(e.byte), e.what());
    }
    std::vector<OutageScenario> out;
    for (const auto& js : j.at("scenarios")) {
        OutageScenario sc(js.at("s").get<int>(), grid);
        if (sc.id == 0) throw ValidationError("scenario id 0 is reserved for the base case");
        sc.name = js.value("name", "");
        if (js.contains("lines_out"))
            for (int id : js.at("lines_out").get<std::vector<int>>()) {
                const int l = grid.line_index(id);
                if (l < 0)
                    throw ValidationError("scenario " + std::to_string(sc.id) +
                                          " lists unknown line " + std::to_string(id));
                sc.fail_line_all_t(l);
            }
        if (js.contains("gens_out"))
            for (int id : js.at("gens_out").get<std::vector<int>>()) {
                const int g = grid.generator_index(id);
                if (g < 0)
                    throw ValidationError("scenario " + std::to_string(sc.id) +
                                          " lists unknown generator " + std::to_string(id));
                sc.fail_generator_all_t(g);
            }
        out.push_back(std::move(sc));
    }
    return out;
}

inline OutageScenario make_base_scenario(const GridCase& grid) { return OutageScenario(0, grid); }

// --- reports --------------------------------------------------------------------

// Per-bus, per-scenario curtailment table; rows are buses carrying load,
// columns the contingency scenarios in order.
inline std::string curtailment_table_csv(const GridCase& grid, const CurtailmentSolution& sol) {
    std::ostringstream os;
    os << "bus,total_load_mwh";
    for (int s = 0; s < sol.n_scenarios; ++s)
        if (sol.scenario_ids[static_cast<std::size_t>(s)] != 0)
            os << ",lc_s" << sol.scenario_ids[static_cast<std::size_t>(s)] << "_mwh";
    os << "\n";
    char buf[64];
    for (int b = 0; b < static_cast<int>(grid.buses.size()); ++b) {
        const Bus& bus = grid.buses[static_cast<std::size_t>(b)];
        if (bus.base_load <= 0.0) continue;
        double total_load = 0.0;
        for (int t = 0; t < grid.horizon; ++t) total_load += grid.demand(b, t);
        os << bus.id;
        std::snprintf(buf, sizeof buf, ",%.2f", total_load);
        os << buf;
        for (int s = 0; s < sol.n_scenarios; ++s) {
            if (sol.scenario_ids[static_cast<std::size_t>(s)] == 0) continue;
            std::snprintf(buf, sizeof buf, ",%.2f", sol.lc_bus_scenario_mwh(b, s));
            os << buf;
        }
        os << "\n";
    }
    return os.str();
}

struct CriticalBus {
    int bus_id = 0;
    double worst_fraction = 0.0;  // max over scenarios of LC / load
    double total_lc_mwh = 0.0;
};

inline std::vector<CriticalBus> rank_critical_buses(const GridCase& grid,
                                                    const CurtailmentSolution& sol) {
    std::vector<CriticalBus> out;
    for (int b = 0; b < static_cast<int>(grid.buses.size()); ++b) {
        const Bus& bus = grid.buses[static_cast<std::size_t>(b)];
        if (bus.base_load <= 0.0) continue;
        double total_load = 0.0;
        for (int t = 0; t < grid.horizon; ++t) total_load += grid.demand(b, t);
        CriticalBus cb;
        cb.bus_id = bus.id;
        for (int s = 0; s < sol.n_scenarios; ++s) {
            if (sol.scenario_ids[static_cast<std::size_t>(s)] == 0) continue;
            const double lc = sol.lc_bus_scenario_mwh(b, s);
            cb.total_lc_mwh += lc;
            if (total_load > 0.0) cb.worst_fraction = std::max(cb.worst_fraction, lc / total_load);
        }
        out.push_back(cb);
    }
    std::sort(out.begin(), out.end(), [](const CriticalBus& a, const CriticalBus& b) {
        if (a.worst_fraction != b.worst_fraction) return a.worst_fraction > b.worst_fraction;
        return a.bus_id < b.bus_id;
    });
    return out;
}

inline std::string critical_buses_csv(const std::vector<CriticalBus>& ranked) {
    std::string out = "bus,worst_scenario_lc_fraction,total_lc_mwh\n";
    char buf[96];
    for (const CriticalBus& cb : ranked) {
        std::snprintf(buf, sizeof buf, "%d,%.4f,%.2f\n", cb.bus_id, cb.worst_fraction,
                      cb.total_lc_mwh);
        out += buf;
    }
    return out;
}

inline nlohmann::json solution_to_json(const GridCase& grid, const CurtailmentSolution& sol) {
    nlohmann::json j;
    j["objective_dollars"] = sol.objective;
    j["scenario_ids"] = sol.scenario_ids;
    j["horizon"] = sol.horizon;
    j["lp_iterations"] = sol.lp_iterations;
    nlohmann::json buses = nlohmann::json::array();
    for (int b = 0; b < sol.n_buses; ++b) {
        nlohmann::json jb;
        jb["bus"] = grid.buses[static_cast<std::size_t>(b)].id;
        for (int s = 0; s < sol.n_scenarios; ++s) {
            const std::string key = "s" + std::to_string(sol.scenario_ids[static_cast<std::size_t>(s)]);
            std::vector<double> lc_t(static_cast<std::size_t>(sol.horizon));
            std::vector<double> theta_t(static_cast<std::size_t>(sol.horizon));
            for (int t = 0; t < sol.horizon; ++t) {
                lc_t[static_cast<std::size_t>(t)] = sol.lc_at(b, t, s);
                theta_t[static_cast<std::size_t>(t)] = sol.theta_at(b, t, s);
            }
            jb["lc"][key] = lc_t;
            jb["theta"][key] = theta_t;
        }
        buses.push_back(jb);
    }
    j["buses"] = buses;
    nlohmann::json gens = nlohmann::json::array();
    for (int i = 0; i < sol.n_gens; ++i) {
        nlohmann::json jg;
        jg["generator"] = grid.generators[static_cast<std::size_t>(i)].id;
        for (int s = 0; s < sol.n_scenarios; ++s) {
            const std::string key = "s" + std::to_string(sol.scenario_ids[static_cast<std::size_t>(s)]);
            std::vector<double> p_t(static_cast<std::size_t>(sol.horizon));
            for (int t = 0; t < sol.horizon; ++t) p_t[static_cast<std::size_t>(t)] = sol.p_at(i, t, s);
            jg["p"][key] = p_t;
        }
        gens.push_back(jg);
    }
    j["generators"] = gens;
    nlohmann::json lines = nlohmann::json::array();
    for (int l = 0; l < sol.n_lines; ++l) {
        nlohmann::json jl;
        jl["line"] = grid.lines[static_cast<std::size_t>(l)].id;
        for (int s = 0; s < sol.n_scenarios; ++s) {
            const std::string key = "s" + std::to_string(sol.scenario_ids[static_cast<std::size_t>(s)]);
            std::vector<double> pl_t(static_cast<std::size_t>(sol.horizon));
            for (int t = 0; t < sol.horizon; ++t) pl_t[static_cast<std::size_t>(t)] = sol.pl_at(l, t, s);
            jl["pl"][key] = pl_t;
        }
        lines.push_back(jl);
    }
    j["lines"] = lines;
    return j;
}

}  // namespace gridres
