// Test-only reference solver for the soft-margin dual: projected gradient
// ascent (Nesterov acceleration with restart) over the box intersected with
// the label-balance hyperplane. Deliberately independent of the SMO path:
// different algorithm, different code. Small problems only.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "gridres/kernel.hpp"

namespace gridres::testing {

struct ReferenceDual {
    std::vector<double> alpha;
    double objective = 0.0;  // dual objective (maximization form)
    double bias = 0.0;
    double kkt_violation = 0.0;
    std::uint64_t iterations = 0;
};

// Euclidean projection onto {0 <= a <= c, sum a_i y_i = 0} by bisection on
// the hyperplane multiplier.
inline std::vector<double> project_box_hyperplane(const std::vector<double>& v,
                                                  const std::vector<int>& y, double c) {
    const std::size_t m = v.size();
    auto clip = [c](double x) { return x < 0.0 ? 0.0 : (x > c ? c : x); };
    auto balance = [&](double lambda) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += y[i] * clip(v[i] - lambda * y[i]);
        return s;
    };
    double lo = -1.0, hi = 1.0;
    for (double x : v) {
        lo = std::min(lo, -std::abs(x) - c - 1.0);
        hi = std::max(hi, std::abs(x) + c + 1.0);
    }
    // balance is non-increasing in lambda
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (balance(mid) > 0.0) lo = mid;
        else hi = mid;
    }
    const double lambda = 0.5 * (lo + hi);
    std::vector<double> out(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = clip(v[i] - lambda * y[i]);
    return out;
}

inline ReferenceDual solve_reference_dual(const std::vector<std::vector<double>>& x,
                                          const std::vector<int>& y, const KernelSpec& kernel,
                                          double c, double kkt_target = 1e-10,
                                          std::uint64_t max_iters = 2'000'000) {
    const std::size_t m = x.size();
    std::vector<double> q(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            q[i * m + j] = y[i] * y[j] * kernel_eval(kernel, x[i], x[j]);

    // spectral norm estimate by power iteration for the step size
    std::vector<double> pv(m, 1.0), pw(m);
    double lmax = 1.0;
    for (int it = 0; it < 100; ++it) {
        double norm = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < m; ++j) s += q[i * m + j] * pv[j];
            pw[i] = s;
            norm += s * s;
        }
        norm = std::sqrt(norm);
        if (norm < 1e-300) break;
        lmax = norm;
        for (std::size_t i = 0; i < m; ++i) pv[i] = pw[i] / norm;
    }
    const double step = 1.0 / std::max(lmax, 1e-12);

    auto grad = [&](const std::vector<double>& a, std::vector<double>& g) {
        for (std::size_t i = 0; i < m; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < m; ++j) s += q[i * m + j] * a[j];
            g[i] = 1.0 - s;  // gradient of the maximization objective
        }
    };
    auto objective = [&](const std::vector<double>& a) {
        double lin = 0.0, quad = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            lin += a[i];
            double s = 0.0;
            for (std::size_t j = 0; j < m; ++j) s += q[i * m + j] * a[j];
            quad += a[i] * s;
        }
        return lin - 0.5 * quad;
    };
    // max KKT violation via the usual up/low sets
    auto kkt = [&](const std::vector<double>& a, const std::vector<double>& g) {
        double up = -1e300, low = 1e300;
        for (std::size_t i = 0; i < m; ++i) {
            const double v = y[i] * g[i];  // = -y_i G_i in minimization form
            const bool in_up = (y[i] == +1 && a[i] < c - 1e-14) || (y[i] == -1 && a[i] > 1e-14);
            const bool in_low = (y[i] == -1 && a[i] < c - 1e-14) || (y[i] == +1 && a[i] > 1e-14);
            if (in_up) up = std::max(up, v);
            if (in_low) low = std::min(low, v);
        }
        if (up <= -1e300 || low >= 1e300) return 0.0;
        return std::max(0.0, up - low);
    };

    ReferenceDual out;
    std::vector<double> a(m, 0.0), a_prev(m, 0.0), z(m, 0.0), g(m), trial(m);
    double t_acc = 1.0;
    double prev_obj = 0.0;
    for (std::uint64_t it = 0; it < max_iters; ++it) {
        grad(z, g);
        for (std::size_t i = 0; i < m; ++i) trial[i] = z[i] + step * g[i];
        std::vector<double> a_next = project_box_hyperplane(trial, y, c);
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_acc * t_acc));
        for (std::size_t i = 0; i < m; ++i)
            z[i] = a_next[i] + (t_acc - 1.0) / t_next * (a_next[i] - a[i]);
        a_prev = a;
        a = a_next;
        t_acc = t_next;
        out.iterations = it + 1;
        if ((it + 1) % 64 == 0) {
            const double obj = objective(a);
            if (obj < prev_obj) {  // acceleration overshoot: restart momentum
                z = a;
                t_acc = 1.0;
            }
            prev_obj = obj;
            grad(a, g);
            if (kkt(a, g) < kkt_target) break;
        }
    }

    grad(a, g);
    out.alpha = a;
    out.objective = objective(a);
    out.kkt_violation = kkt(a, g);

    // bias: mean over free vectors, else KKT interval midpoint
    double sum = 0.0;
    int free_count = 0;
    for (std::size_t i = 0; i < m; ++i)
        if (a[i] > 1e-10 * c && a[i] < c * (1.0 - 1e-10)) {
            sum += y[i] * g[i];  // y_i g_i = y_i - u_i at alpha
            ++free_count;
        }
    if (free_count > 0) {
        out.bias = sum / free_count;
    } else {
        double up = -1e300, low = 1e300;
        for (std::size_t i = 0; i < m; ++i) {
            const double v = y[i] * g[i];
            const bool in_up = (y[i] == +1 && a[i] < c - 1e-14) || (y[i] == -1 && a[i] > 1e-14);
            const bool in_low = (y[i] == -1 && a[i] < c - 1e-14) || (y[i] == +1 && a[i] > 1e-14);
            if (in_up) up = std::max(up, v);
            if (in_low) low = std::min(low, v);
        }
        out.bias = (up > -1e300 && low < 1e300) ? 0.5 * (up + low) : 0.0;
    }
    return out;
}

inline double reference_decision(const ReferenceDual& ref,
                                 const std::vector<std::vector<double>>& x,
                                 const std::vector<int>& y, const KernelSpec& kernel,
                                 const std::vector<double>& probe) {
    double f = ref.bias;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (ref.alpha[i] > 0.0) f += ref.alpha[i] * y[i] * kernel_eval(kernel, x[i], probe);
    return f;
}

}  // namespace gridres::testing
