// Linear programming: problem container with per-row provenance tags and a
// self-contained two-phase primal simplex for bounded variables (dense
// basis inverse, Dantzig pricing with a Bland fallback after a run of
// degenerate pivots, periodic refactorization).
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "gridres/errors.hpp"

namespace gridres {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { LessEqual, Equal, GreaterEqual };

struct LpVariable {
    std::string name;
    double lower = 0.0;
    double upper = kInf;
};

struct LpRow {
    std::string tag;  // provenance: constraint family plus instance indices
    std::vector<std::pair<int, double>> coeffs;
    Relation rel = Relation::Equal;
    double rhs = 0.0;
};

struct LpProblem {
    std::vector<LpVariable> vars;
    std::vector<double> objective;  // parallel to vars
    std::vector<LpRow> rows;

    int add_variable(std::string name, double lower, double upper, double obj = 0.0) {
        if (lower > upper)
            throw ValidationError("variable " + name + ": lower bound exceeds upper bound");
        vars.push_back({std::move(name), lower, upper});
        objective.push_back(obj);
        return static_cast<int>(vars.size()) - 1;
    }

    void add_row(std::string tag, std::vector<std::pair<int, double>> coeffs, Relation rel,
                 double rhs) {
        for (const auto& [idx, coeff] : coeffs) {
            (void)coeff;
            if (idx < 0 || idx >= static_cast<int>(vars.size()))
                throw ValidationError("row " + tag + " references unknown variable index " +
                                      std::to_string(idx));
        }
        rows.push_back({std::move(tag), std::move(coeffs), rel, rhs});
    }

    std::size_t n_vars() const { return vars.size(); }
    std::size_t n_rows() const { return rows.size(); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;
    double objective = 0.0;
    std::uint64_t iterations = 0;
    double max_row_residual = 0.0;  // primal certificate, absolute
};

struct SimplexOptions {
    double feasibility_tol = 1e-7;
    double reduced_cost_tol = 1e-9;
    double pivot_tol = 1e-9;
    double degeneracy_step = 1e-11;
    int bland_after_degenerate = 1000;
    std::uint64_t max_iterations = 2'000'000;
    int refactor_every = 128;
    std::size_t max_rows_dense = 4000;
};

namespace detail {

enum class ColState : std::uint8_t { Basic, AtLower, AtUpper, FreeAtZero };

class BoundedSimplex {
public:
    BoundedSimplex(const LpProblem& lp, const SimplexOptions& opts) : opts_(opts) {
        m_ = lp.rows.size();
        if (m_ > opts.max_rows_dense)
            throw NumericalError("LP exceeds the dense solver's row budget");
        n_struct_ = lp.vars.size();
        n_ = n_struct_ + m_;  // + one slack per row
        lower_.resize(n_);
        upper_.resize(n_);
        cost_.assign(n_, 0.0);
        cols_.resize(n_);
        rhs_.resize(m_);

        for (std::size_t j = 0; j < n_struct_; ++j) {
            lower_[j] = lp.vars[j].lower;
            upper_[j] = lp.vars[j].upper;
            cost_[j] = lp.objective[j];
        }
        for (std::size_t r = 0; r < m_; ++r) {
            const LpRow& row = lp.rows[r];
            rhs_[r] = row.rhs;
            for (const auto& [idx, coeff] : row.coeffs)
                if (coeff != 0.0) cols_[static_cast<std::size_t>(idx)].push_back({r, coeff});
            const std::size_t slack = n_struct_ + r;
            cols_[slack].push_back({r, 1.0});
            switch (row.rel) {
                case Relation::LessEqual: lower_[slack] = 0.0; upper_[slack] = kInf; break;
                case Relation::Equal: lower_[slack] = 0.0; upper_[slack] = 0.0; break;
                case Relation::GreaterEqual: lower_[slack] = -kInf; upper_[slack] = 0.0; break;
            }
        }
    }

    LpSolution solve() {
        LpSolution sol;
        init_nonbasic_states();
        add_artificials();

        // Phase 1: minimize the artificial slack mass.
        phase_cost_.assign(n_total_(), 0.0);
        for (std::size_t a = n_; a < n_total_(); ++a) phase_cost_[a] = 1.0;
        const bool p1_ok = iterate(phase_cost_, /*phase1=*/true, sol.iterations);
        if (!p1_ok) throw NumericalError("phase 1 iteration limit reached");
        compute_values();
        double infeas = 0.0;
        for (std::size_t a = n_; a < n_total_(); ++a) infeas += value_[a];
        if (infeas > opts_.feasibility_tol * std::max<double>(1.0, m_)) {
            sol.status = LpStatus::Infeasible;
            return sol;
        }
        pivot_out_artificials();
        for (std::size_t a = n_; a < n_total_(); ++a) {
            lower_[a] = upper_[a] = 0.0;  // freeze
            if (state_[a] != ColState::Basic) state_[a] = ColState::AtLower;
        }

        // Phase 2: the real objective.
        phase_cost_.assign(n_total_(), 0.0);
        for (std::size_t j = 0; j < n_struct_; ++j) phase_cost_[j] = cost_[j];
        const bool p2_ok = iterate(phase_cost_, /*phase1=*/false, sol.iterations);
        if (!p2_ok) {
            if (unbounded_) {
                sol.status = LpStatus::Unbounded;
                return sol;
            }
            throw NumericalError("phase 2 iteration limit reached");
        }
        if (unbounded_) {
            sol.status = LpStatus::Unbounded;
            return sol;
        }

        compute_values();
        sol.status = LpStatus::Optimal;
        sol.x.assign(value_.begin(), value_.begin() + static_cast<long>(n_struct_));
        sol.objective = 0.0;
        for (std::size_t j = 0; j < n_struct_; ++j) sol.objective += cost_[j] * value_[j];
        sol.max_row_residual = max_residual();
        if (sol.max_row_residual > opts_.feasibility_tol) {
            refactorize();
            compute_values();
            sol.max_row_residual = max_residual();
            if (sol.max_row_residual > opts_.feasibility_tol)
                throw NumericalError("simplex finished with an infeasible basis (residual " +
                                     std::to_string(sol.max_row_residual) + ")");
            sol.x.assign(value_.begin(), value_.begin() + static_cast<long>(n_struct_));
            sol.objective = 0.0;
            for (std::size_t j = 0; j < n_struct_; ++j) sol.objective += cost_[j] * value_[j];
        }
        return sol;
    }

private:
    std::size_t n_total_() const { return n_ + m_; }  // artificials appended after slacks

    void init_nonbasic_states() {
        state_.assign(n_total_(), ColState::AtLower);
        for (std::size_t j = 0; j < n_; ++j) {
            const bool lo_fin = std::isfinite(lower_[j]);
            const bool up_fin = std::isfinite(upper_[j]);
            if (lo_fin && up_fin)
                state_[j] = std::abs(lower_[j]) <= std::abs(upper_[j]) ? ColState::AtLower
                                                                       : ColState::AtUpper;
            else if (lo_fin)
                state_[j] = ColState::AtLower;
            else if (up_fin)
                state_[j] = ColState::AtUpper;
            else
                state_[j] = ColState::FreeAtZero;
        }
    }

    double nonbasic_value(std::size_t j) const {
        switch (state_[j]) {
            case ColState::AtLower: return lower_[j];
            case ColState::AtUpper: return upper_[j];
            case ColState::FreeAtZero: return 0.0;
            case ColState::Basic: break;
        }
        return 0.0;
    }

    void add_artificials() {
        // Residual of each row at the initial nonbasic point decides the
        // artificial's sign so the starting basis is feasible for phase 1.
        std::vector<double> residual = rhs_;
        for (std::size_t j = 0; j < n_; ++j) {
            const double v = nonbasic_value(j);
            if (v != 0.0)
                for (const auto& [r, coeff] : cols_[j]) residual[r] -= coeff * v;
        }
        basis_.resize(m_);
        lower_.resize(n_total_());
        upper_.resize(n_total_());
        cols_.resize(n_total_());
        state_.resize(n_total_());
        for (std::size_t r = 0; r < m_; ++r) {
            const std::size_t a = n_ + r;
            cols_[a] = {{r, residual[r] >= 0.0 ? 1.0 : -1.0}};
            lower_[a] = 0.0;
            upper_[a] = kInf;
            state_[a] = ColState::Basic;
            basis_[r] = static_cast<int>(a);
        }
        binv_.assign(m_ * m_, 0.0);
        for (std::size_t r = 0; r < m_; ++r) binv_[r * m_ + r] = 1.0;
    }

    void compute_values() {
        value_.assign(n_total_(), 0.0);
        std::vector<double> b_eff = rhs_;
        for (std::size_t j = 0; j < n_total_(); ++j) {
            if (state_[j] == ColState::Basic) continue;
            const double v = nonbasic_value(j);
            value_[j] = v;
            if (v != 0.0)
                for (const auto& [r, coeff] : cols_[j]) b_eff[r] -= coeff * v;
        }
        for (std::size_t r = 0; r < m_; ++r) {
            double s = 0.0;
            for (std::size_t k = 0; k < m_; ++k) s += binv_[r * m_ + k] * b_eff[k];
            value_[static_cast<std::size_t>(basis_[r])] = s;
        }
    }

    double max_residual() const {
        double worst = 0.0;
        std::vector<double> ax(m_, 0.0);
        for (std::size_t j = 0; j < n_total_(); ++j)
            if (value_[j] != 0.0)
                for (const auto& [r, coeff] : cols_[j]) ax[r] += coeff * value_[j];
        for (std::size_t r = 0; r < m_; ++r) worst = std::max(worst, std::abs(ax[r] - rhs_[r]));
        return worst;
    }

    // One simplex phase; returns false on iteration exhaustion. Sets
    // unbounded_ when phase 2 detects an unbounded ray.
    bool iterate(const std::vector<double>& cost, bool phase1, std::uint64_t& iter_total) {
        unbounded_ = false;
        int degenerate_run = 0;
        bool bland = false;
        std::vector<double> y(m_), w(m_);
        for (std::uint64_t iter = 0; iter < opts_.max_iterations; ++iter, ++iter_total) {
            compute_values();
            // y = c_B B^-1
            for (std::size_t k = 0; k < m_; ++k) {
                double s = 0.0;
                for (std::size_t r = 0; r < m_; ++r)
                    s += cost[static_cast<std::size_t>(basis_[r])] * binv_[r * m_ + k];
                y[k] = s;
            }
            // price nonbasic columns; artificials never re-enter
            (void)phase1;
            int enter = -1, dir = 0;
            double best_score = opts_.reduced_cost_tol;
            for (std::size_t j = 0; j < n_; ++j) {
                if (state_[j] == ColState::Basic) continue;
                if (lower_[j] == upper_[j]) continue;  // fixed, can never move
                double d = cost[j];
                for (const auto& [r, coeff] : cols_[j]) d -= y[r] * coeff;
                int cand_dir = 0;
                if (state_[j] == ColState::AtLower && d < -opts_.reduced_cost_tol) cand_dir = +1;
                else if (state_[j] == ColState::AtUpper && d > opts_.reduced_cost_tol) cand_dir = -1;
                else if (state_[j] == ColState::FreeAtZero && std::abs(d) > opts_.reduced_cost_tol)
                    cand_dir = d < 0.0 ? +1 : -1;
                if (cand_dir == 0) continue;
                if (bland) { enter = static_cast<int>(j); dir = cand_dir; break; }
                if (std::abs(d) > best_score) {
                    best_score = std::abs(d);
                    enter = static_cast<int>(j);
                    dir = cand_dir;
                }
            }
            if (enter < 0) return true;  // no improving column: phase optimal

            // w = B^-1 A_enter
            const auto& col = cols_[static_cast<std::size_t>(enter)];
            for (std::size_t r = 0; r < m_; ++r) {
                double s = 0.0;
                for (const auto& [rr, coeff] : col) s += binv_[r * m_ + rr] * coeff;
                w[r] = s;
            }

            // ratio test: entering moves t >= 0 in direction dir
            double t_max = kInf;
            int leave_row = -1;
            bool leave_at_upper = false;
            const double own_range = upper_[static_cast<std::size_t>(enter)] -
                                     lower_[static_cast<std::size_t>(enter)];
            if (std::isfinite(own_range)) t_max = own_range;
            for (std::size_t r = 0; r < m_; ++r) {
                const double g = dir * w[r];
                const std::size_t bcol = static_cast<std::size_t>(basis_[r]);
                if (g > opts_.pivot_tol && std::isfinite(lower_[bcol])) {
                    const double t = (value_[bcol] - lower_[bcol]) / g;
                    if (t < t_max - 1e-15 || (t < t_max + 1e-15 && leave_row < 0)) {
                        t_max = std::max(0.0, t);
                        leave_row = static_cast<int>(r);
                        leave_at_upper = false;
                    }
                } else if (g < -opts_.pivot_tol && std::isfinite(upper_[bcol])) {
                    const double t = (value_[bcol] - upper_[bcol]) / g;
                    if (t < t_max - 1e-15 || (t < t_max + 1e-15 && leave_row < 0)) {
                        t_max = std::max(0.0, t);
                        leave_row = static_cast<int>(r);
                        leave_at_upper = true;
                    }
                }
            }

            if (!std::isfinite(t_max)) {
                if (phase1) throw NumericalError("phase 1 claims an unbounded ray");
                unbounded_ = true;
                return true;
            }

            if (t_max < opts_.degeneracy_step) {
                if (++degenerate_run >= opts_.bland_after_degenerate) bland = true;
            } else {
                degenerate_run = 0;
            }

            if (leave_row < 0) {
                // entering flips to its far bound, basis unchanged
                state_[static_cast<std::size_t>(enter)] =
                    dir > 0 ? ColState::AtUpper : ColState::AtLower;
                continue;
            }

            // basis exchange; the ratio test only fires on finite bounds, so
            // the leaving variable always has a bound to sit on
            const std::size_t leave_col = static_cast<std::size_t>(basis_[leave_row]);
            state_[leave_col] = leave_at_upper ? ColState::AtUpper : ColState::AtLower;
            basis_[static_cast<std::size_t>(leave_row)] = enter;
            state_[static_cast<std::size_t>(enter)] = ColState::Basic;

            const double pivot = w[static_cast<std::size_t>(leave_row)];
            if (std::abs(pivot) < opts_.pivot_tol) {
                refactorize();
                continue;
            }
            // binv row update: E * binv with eta column from w
            const std::size_t lr = static_cast<std::size_t>(leave_row);
            for (std::size_t k = 0; k < m_; ++k) binv_[lr * m_ + k] /= pivot;
            for (std::size_t r = 0; r < m_; ++r) {
                if (r == lr) continue;
                const double f = w[r];
                if (f == 0.0) continue;
                for (std::size_t k = 0; k < m_; ++k) binv_[r * m_ + k] -= f * binv_[lr * m_ + k];
            }
            if (++pivots_since_refactor_ >= opts_.refactor_every) refactorize();
        }
        return false;
    }

    // Rebuild B^-1 from the basis columns by Gauss-Jordan elimination.
    void refactorize() {
        pivots_since_refactor_ = 0;
        std::vector<double> bmat(m_ * m_, 0.0);
        for (std::size_t r = 0; r < m_; ++r)
            for (const auto& [rr, coeff] : cols_[static_cast<std::size_t>(basis_[r])])
                bmat[rr * m_ + r] = coeff;
        std::vector<double> inv(m_ * m_, 0.0);
        for (std::size_t r = 0; r < m_; ++r) inv[r * m_ + r] = 1.0;
        for (std::size_t col = 0; col < m_; ++col) {
            std::size_t piv = col;
            double best = std::abs(bmat[col * m_ + col]);
            for (std::size_t r = col + 1; r < m_; ++r) {
                const double v = std::abs(bmat[r * m_ + col]);
                if (v > best) { best = v; piv = r; }
            }
            if (best < 1e-12) throw NumericalError("singular basis during refactorization");
            if (piv != col)
                for (std::size_t k = 0; k < m_; ++k) {
                    std::swap(bmat[piv * m_ + k], bmat[col * m_ + k]);
                    std::swap(inv[piv * m_ + k], inv[col * m_ + k]);
                }
            const double p = bmat[col * m_ + col];
            for (std::size_t k = 0; k < m_; ++k) {
                bmat[col * m_ + k] /= p;
                inv[col * m_ + k] /= p;
            }
            for (std::size_t r = 0; r < m_; ++r) {
                if (r == col) continue;
                const double f = bmat[r * m_ + col];
                if (f == 0.0) continue;
                for (std::size_t k = 0; k < m_; ++k) {
                    bmat[r * m_ + k] -= f * bmat[col * m_ + k];
                    inv[r * m_ + k] -= f * inv[col * m_ + k];
                }
            }
        }
        binv_ = std::move(inv);
    }

    // Replace basic artificials by structural/slack columns where the row
    // admits a pivot; redundant rows keep their artificial pinned at zero.
    void pivot_out_artificials() {
        std::vector<double> w(m_);
        for (std::size_t r = 0; r < m_; ++r) {
            if (static_cast<std::size_t>(basis_[r]) < n_) continue;
            for (std::size_t j = 0; j < n_; ++j) {
                if (state_[j] == ColState::Basic) continue;
                double s = 0.0;
                for (const auto& [rr, coeff] : cols_[j]) s += binv_[r * m_ + rr] * coeff;
                if (std::abs(s) > 1e-9) {
                    for (std::size_t rr = 0; rr < m_; ++rr) {
                        double acc = 0.0;
                        for (const auto& [r2, coeff] : cols_[j]) acc += binv_[rr * m_ + r2] * coeff;
                        w[rr] = acc;
                    }
                    const std::size_t art = static_cast<std::size_t>(basis_[r]);
                    state_[art] = ColState::AtLower;
                    basis_[r] = static_cast<int>(j);
                    state_[j] = ColState::Basic;
                    const double pivot = w[r];
                    for (std::size_t k = 0; k < m_; ++k) binv_[r * m_ + k] /= pivot;
                    for (std::size_t rr = 0; rr < m_; ++rr) {
                        if (rr == r) continue;
                        const double f = w[rr];
                        if (f == 0.0) continue;
                        for (std::size_t k = 0; k < m_; ++k)
                            binv_[rr * m_ + k] -= f * binv_[r * m_ + k];
                    }
                    break;
                }
            }
        }
    }

    SimplexOptions opts_;
    std::size_t m_ = 0, n_struct_ = 0, n_ = 0;
    std::vector<double> lower_, upper_, cost_, rhs_, phase_cost_;
    std::vector<std::vector<std::pair<std::size_t, double>>> cols_;
    std::vector<int> basis_;
    std::vector<ColState> state_;
    std::vector<double> binv_;
    std::vector<double> value_;
    bool unbounded_ = false;
    int pivots_since_refactor_ = 0;
};

}  // namespace detail

inline LpSolution simplex_solve(const LpProblem& lp, const SimplexOptions& opts = {}) {
    for (const LpVariable& v : lp.vars)
        if (v.lower > v.upper)
            throw ValidationError("variable " + v.name + " has crossing bounds");
    detail::BoundedSimplex solver(lp, opts);
    return solver.solve();
}

}  // namespace gridres
