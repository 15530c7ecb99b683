// Soft-margin kernel SVM trained in the dual by sequential minimal
// optimization with maximal-violating-pair working-set selection. The dual
//
//   max  sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K(x_i, x_j)
//   s.t. 0 <= alpha_i <= c,  sum_i alpha_i y_i = 0
//
// is solved to a KKT tolerance; the bias is averaged over free support
// vectors. Features are normalized per-feature by their spread before any
// kernel evaluation (kept positive rather than centered: the homogeneous
// polynomial kernel degrades badly on sign-mixed inputs), and the scaling
// is stored in the model.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gridres/dataset.hpp"
#include "gridres/errors.hpp"
#include "gridres/kernel.hpp"

namespace gridres {

struct FeatureScaling {
    std::vector<double> offset;  // subtracted
    std::vector<double> scale;   // then divided by

    static FeatureScaling identity(std::size_t dims) {
        return {std::vector<double>(dims, 0.0), std::vector<double>(dims, 1.0)};
    }

    std::vector<double> apply(std::span<const double> x) const {
        std::vector<double> out(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - offset[i]) / scale[i];
        return out;
    }

    friend bool operator==(const FeatureScaling&, const FeatureScaling&) = default;
};

struct SupportVector {
    std::vector<double> x;  // scaled feature vector
    int y = 1;
    double alpha = 0.0;

    friend bool operator==(const SupportVector&, const SupportVector&) = default;
};

struct SvmModel {
    KernelSpec kernel;
    double c = 1.0;
    FeatureScaling scaling;
    std::vector<SupportVector> support_vectors;
    double bias = 0.0;

    friend bool operator==(const SvmModel&, const SvmModel&) = default;
};

struct TrainingDiagnostics {
    double margin = 0.0;        // 2 / |w| in scaled feature space
    double mean_slack = 0.0;    // mean over samples with slack > 0
    std::vector<double> slacks; // per training sample, max(0, 1 - y f(x))
    std::vector<double> alphas; // per training sample dual coefficient
    std::uint64_t iterations = 0;
    bool converged = false;
};

struct TrainOptions {
    bool scale_features = true;            // divide by per-feature spread
    double tol = 1e-5;                     // max KKT violation at convergence
    std::uint64_t max_pair_updates = 1'000'000;
};

inline double decision_value(const SvmModel& model, std::span<const double> x) {
    const std::vector<double> xs = model.scaling.apply(x);
    double f = model.bias;
    for (const SupportVector& sv : model.support_vectors)
        f += sv.alpha * sv.y * kernel_eval(model.kernel, sv.x, xs);
    return f;
}

// Boundary ties resolve to outage.
inline int predict(const SvmModel& model, std::span<const double> x) {
    return decision_value(model, x) >= 0.0 ? kLabelOutage : kLabelOperational;
}

inline double decision_value(const SvmModel& model, const LabeledSample& s) {
    const double x[2] = {s.x1, s.x2};
    return decision_value(model, std::span<const double>(x, 2));
}
inline int predict(const SvmModel& model, const LabeledSample& s) {
    return decision_value(model, s) >= 0.0 ? kLabelOutage : kLabelOperational;
}

namespace detail {

// Population spread (std); unit when degenerate so scaling stays invertible.
inline double feature_spread(const std::vector<std::vector<double>>& rows, std::size_t dim) {
    double mean = 0.0;
    for (const auto& r : rows) mean += r[dim];
    mean /= static_cast<double>(rows.size());
    double var = 0.0;
    for (const auto& r : rows) {
        const double d = r[dim] - mean;
        var += d * d;
    }
    var /= static_cast<double>(rows.size());
    const double sd = std::sqrt(var);
    return sd > 0.0 ? sd : 1.0;
}

class SmoSolver {
public:
    SmoSolver(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
              const KernelSpec& kernel, double c, const TrainOptions& opts)
        : x_(x), y_(y), c_(c), opts_(opts), m_(x.size()) {
        kmat_.resize(m_ * m_);
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                const double k = kernel_eval(kernel, x_[i], x_[j]);
                kmat_[i * m_ + j] = k;
                kmat_[j * m_ + i] = k;
            }
        alpha_.assign(m_, 0.0);
        grad_.assign(m_, -1.0);  // gradient of 1/2 a'Qa - e'a at a = 0
    }

    // Returns (iterations, converged).
    std::pair<std::uint64_t, bool> solve() {
        std::uint64_t iter = 0;
        for (; iter < opts_.max_pair_updates; ++iter) {
            const auto [i, j, violation] = select_working_pair();
            if (violation < opts_.tol) return {iter, true};
            update_pair(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        }
        return {iter, false};
    }

    double bias() const {
        double sum = 0.0;
        int free_count = 0;
        const double interior = 1e-12 * c_;
        for (std::size_t i = 0; i < m_; ++i)
            if (alpha_[i] > interior && alpha_[i] < c_ - interior) {
                sum += -y_[i] * grad_[i];
                ++free_count;
            }
        if (free_count > 0) return sum / free_count;
        // No free vectors: midpoint of the KKT bias interval.
        double up = std::numeric_limits<double>::infinity();
        double lo = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m_; ++i) {
            const double v = -y_[i] * grad_[i];
            if (in_up_set(i)) lo = std::max(lo, v);
            if (in_low_set(i)) up = std::min(up, v);
        }
        if (std::isinf(lo) || std::isinf(up)) return 0.0;
        return (lo + up) / 2.0;
    }

    const std::vector<double>& alphas() const { return alpha_; }

    // u_i = sum_j alpha_j y_j K_ij, recovered from the maintained gradient.
    double margin_term(std::size_t i) const { return y_[i] * (grad_[i] + 1.0); }

    double w_norm_squared() const {
        double s = 0.0;
        for (std::size_t i = 0; i < m_; ++i) s += alpha_[i] * (grad_[i] + 1.0);
        return s;
    }

private:
    bool in_up_set(std::size_t t) const {
        return (y_[t] == +1 && alpha_[t] < c_) || (y_[t] == -1 && alpha_[t] > 0.0);
    }
    bool in_low_set(std::size_t t) const {
        return (y_[t] == -1 && alpha_[t] < c_) || (y_[t] == +1 && alpha_[t] > 0.0);
    }

    std::tuple<int, int, double> select_working_pair() const {
        double gmax = -std::numeric_limits<double>::infinity();
        double gmin = std::numeric_limits<double>::infinity();
        int i = -1, j = -1;
        for (std::size_t t = 0; t < m_; ++t) {
            const double v = -y_[t] * grad_[t];
            if (in_up_set(t) && v > gmax) {
                gmax = v;
                i = static_cast<int>(t);
            }
            if (in_low_set(t) && v < gmin) {
                gmin = v;
                j = static_cast<int>(t);
            }
        }
        if (i < 0 || j < 0) return {0, 0, 0.0};
        return {i, j, gmax - gmin};
    }

    double q(std::size_t a, std::size_t b) const { return y_[a] * y_[b] * kmat_[a * m_ + b]; }

    void update_pair(std::size_t i, std::size_t j) {
        constexpr double tau = 1e-12;
        const double old_ai = alpha_[i], old_aj = alpha_[j];
        const double kii = kmat_[i * m_ + i], kjj = kmat_[j * m_ + j], kij = kmat_[i * m_ + j];

        if (y_[i] != y_[j]) {
            double quad = kii + kjj - 2.0 * kij;  // Q_ii + Q_jj + 2 Q_ij with Q_ij = -K_ij
            if (quad <= 0.0) quad = tau;
            const double delta = (-grad_[i] - grad_[j]) / quad;
            const double diff = alpha_[i] - alpha_[j];
            alpha_[i] += delta;
            alpha_[j] += delta;
            if (diff > 0.0) {
                if (alpha_[j] < 0.0) { alpha_[j] = 0.0; alpha_[i] = diff; }
            } else {
                if (alpha_[i] < 0.0) { alpha_[i] = 0.0; alpha_[j] = -diff; }
            }
            if (diff > 0.0) {
                if (alpha_[i] > c_) { alpha_[i] = c_; alpha_[j] = c_ - diff; }
            } else {
                if (alpha_[j] > c_) { alpha_[j] = c_; alpha_[i] = c_ + diff; }
            }
        } else {
            double quad = kii + kjj - 2.0 * kij;
            if (quad <= 0.0) quad = tau;
            const double delta = (grad_[i] - grad_[j]) / quad;
            const double sum = alpha_[i] + alpha_[j];
            alpha_[i] -= delta;
            alpha_[j] += delta;
            if (sum > c_) {
                if (alpha_[i] > c_) { alpha_[i] = c_; alpha_[j] = sum - c_; }
            } else {
                if (alpha_[j] < 0.0) { alpha_[j] = 0.0; alpha_[i] = sum; }
            }
            if (sum > c_) {
                if (alpha_[j] > c_) { alpha_[j] = c_; alpha_[i] = sum - c_; }
            } else {
                if (alpha_[i] < 0.0) { alpha_[i] = 0.0; alpha_[j] = sum; }
            }
        }

        const double di = alpha_[i] - old_ai, dj = alpha_[j] - old_aj;
        for (std::size_t t = 0; t < m_; ++t)
            grad_[t] += q(t, i) * di + q(t, j) * dj;
    }

    const std::vector<std::vector<double>>& x_;
    const std::vector<int>& y_;
    double c_;
    TrainOptions opts_;
    std::size_t m_;
    std::vector<double> kmat_;
    std::vector<double> alpha_;
    std::vector<double> grad_;
};

}  // namespace detail

inline std::pair<SvmModel, TrainingDiagnostics> train(const Dataset& train_set,
                                                      const KernelSpec& kernel, double c,
                                                      const TrainOptions& opts = {}) {
    kernel.validate();
    if (!(c > 0.0)) throw ValidationError("penalty c must be > 0");
    const std::size_t m = train_set.samples.size();
    if (m < 2) throw ValidationError("training requires at least two samples");
    if (train_set.count_label(kLabelOutage) == 0 || train_set.count_label(kLabelOperational) == 0)
        throw ValidationError("training requires both classes present");
    if (m > 4000) throw ValidationError("training set too large for the dense kernel cache");

    constexpr std::size_t dims = 2;
    std::vector<std::vector<double>> rows(m, std::vector<double>(dims));
    std::vector<int> y(m);
    for (std::size_t i = 0; i < m; ++i) {
        rows[i][0] = train_set.samples[i].x1;
        rows[i][1] = train_set.samples[i].x2;
        y[i] = train_set.samples[i].label;
    }

    FeatureScaling scaling = FeatureScaling::identity(dims);
    if (opts.scale_features)
        for (std::size_t d = 0; d < dims; ++d) scaling.scale[d] = detail::feature_spread(rows, d);
    for (auto& r : rows)
        for (std::size_t d = 0; d < dims; ++d) r[d] = (r[d] - scaling.offset[d]) / scaling.scale[d];

    detail::SmoSolver solver(rows, y, kernel, c, opts);
    const auto [iterations, converged] = solver.solve();

    SvmModel model;
    model.kernel = kernel;
    model.c = c;
    model.scaling = scaling;
    model.bias = solver.bias();
    const std::vector<double>& alpha = solver.alphas();
    for (std::size_t i = 0; i < m; ++i)
        if (alpha[i] > 0.0) model.support_vectors.push_back({rows[i], y[i], alpha[i]});

    TrainingDiagnostics diag;
    diag.iterations = iterations;
    diag.converged = converged;
    diag.alphas = alpha;
    diag.slacks.resize(m);
    double slack_sum = 0.0;
    std::size_t slack_count = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double f = solver.margin_term(i) + model.bias;
        diag.slacks[i] = std::max(0.0, 1.0 - y[i] * f);
        if (diag.slacks[i] > 0.0) {
            slack_sum += diag.slacks[i];
            ++slack_count;
        }
    }
    diag.mean_slack = slack_count ? slack_sum / static_cast<double>(slack_count) : 0.0;
    const double w2 = solver.w_norm_squared();
    diag.margin = w2 > 0.0 ? 2.0 / std::sqrt(w2) : std::numeric_limits<double>::infinity();
    return {model, diag};
}

// --- KKT audit ---------------------------------------------------------------

struct KktReport {
    double max_free_violation = 0.0;    // | y f - 1 | over tolerance-interior alphas
    double max_lower_violation = 0.0;   // max(0, 1 - y f) over alpha = 0
    double max_upper_violation = 0.0;   // max(0, y f - 1) over alpha = c
    double dual_feasibility = 0.0;      // max bound excess of alpha
    double equality_residual = 0.0;     // | sum alpha y |
};

inline KktReport check_kkt(const SvmModel& model, const TrainingDiagnostics& diag,
                           const Dataset& train_set) {
    KktReport r;
    double eq = 0.0;
    const double interior = 1e-8 * model.c;
    for (std::size_t i = 0; i < train_set.samples.size(); ++i) {
        const double a = diag.alphas[i];
        const int y = train_set.samples[i].label;
        const double yf = y * decision_value(model, train_set.samples[i]);
        eq += a * y;
        r.dual_feasibility = std::max({r.dual_feasibility, -a, a - model.c});
        if (a <= interior)
            r.max_lower_violation = std::max(r.max_lower_violation, 1.0 - yf);
        else if (a >= model.c - interior)
            r.max_upper_violation = std::max(r.max_upper_violation, yf - 1.0);
        else
            r.max_free_violation = std::max(r.max_free_violation, std::abs(yf - 1.0));
    }
    r.equality_residual = std::abs(eq);
    return r;
}

// --- model file --------------------------------------------------------------

inline void to_json(nlohmann::json& j, const FeatureScaling& s) {
    j = {{"offset", s.offset}, {"scale", s.scale}};
}
inline void from_json(const nlohmann::json& j, FeatureScaling& s) {
    s.offset = j.at("offset").get<std::vector<double>>();
    s.scale = j.at("scale").get<std::vector<double>>();
}

inline void to_json(nlohmann::json& j, const SupportVector& sv) {
    j = {{"x", sv.x}, {"y", sv.y}, {"alpha", sv.alpha}};
}
inline void from_json(const nlohmann::json& j, SupportVector& sv) {
    sv.x = j.at("x").get<std::vector<double>>();
    sv.y = j.at("y").get<int>();
    sv.alpha = j.at("alpha").get<double>();
}

inline void to_json(nlohmann::json& j, const SvmModel& m) {
    j = {{"kernel", m.kernel},
         {"c", m.c},
         {"scaling", m.scaling},
         {"bias", m.bias},
         {"support_vectors", m.support_vectors}};
}
inline void from_json(const nlohmann::json& j, SvmModel& m) {
    m.kernel = j.at("kernel").get<KernelSpec>();
    m.c = j.at("c").get<double>();
    m.scaling = j.at("scaling").get<FeatureScaling>();
    m.bias = j.at("bias").get<double>();
    m.support_vectors = j.at("support_vectors").get<std::vector<SupportVector>>();
}

}  // namespace gridres
