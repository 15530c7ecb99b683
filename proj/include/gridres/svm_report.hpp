// Model selection and evaluation reports: validation-accuracy grid over
// (kernel, penalty), confusion matrix, and decision-boundary grid export.
#pragma once

#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gridres/dataset.hpp"
#include "gridres/errors.hpp"
#include "gridres/svm.hpp"

namespace gridres {

inline double accuracy(const SvmModel& model, const Dataset& eval_set) {
    if (eval_set.samples.empty()) throw ValidationError("empty evaluation set");
    std::size_t hit = 0;
    for (const LabeledSample& s : eval_set.samples) hit += predict(model, s) == s.label;
    return 100.0 * static_cast<double>(hit) / static_cast<double>(eval_set.size());
}

// Counts indexed [actual][predicted] with 0 = operational/normal, 1 = outage.
struct ConfusionMatrix {
    std::size_t counts[2][2] = {{0, 0}, {0, 0}};

    std::size_t total() const {
        return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
    }
    double percent(int actual, int predicted) const {
        const double row = static_cast<double>(counts[actual][0] + counts[actual][1]);
        return row > 0.0 ? 100.0 * static_cast<double>(counts[actual][predicted]) / row : 0.0;
    }
    double recall_operational() const { return percent(0, 0); }
    double recall_outage() const { return percent(1, 1); }
};

inline ConfusionMatrix confusion(const SvmModel& model, const Dataset& eval_set) {
    if (eval_set.samples.empty()) throw ValidationError("empty evaluation set");
    ConfusionMatrix cm;
    for (const LabeledSample& s : eval_set.samples) {
        const int actual = s.label == kLabelOutage ? 1 : 0;
        const int predicted = predict(model, s) == kLabelOutage ? 1 : 0;
        ++cm.counts[actual][predicted];
    }
    return cm;
}

inline std::string confusion_to_csv(const ConfusionMatrix& cm) {
    char buf[128];
    std::string out = "actual,predicted_normal_pct,predicted_outage_pct\n";
    std::snprintf(buf, sizeof buf, "normal,%.1f,%.1f\n", cm.percent(0, 0), cm.percent(0, 1));
    out += buf;
    std::snprintf(buf, sizeof buf, "outage,%.1f,%.1f\n", cm.percent(1, 0), cm.percent(1, 1));
    out += buf;
    return out;
}

// --- grid search --------------------------------------------------------------

struct LabeledKernel {
    std::string label;  // row name in the accuracy table
    KernelSpec spec;
};

// The four kernels of the reference sweep; "quadratic" and "polynomial" are
// the degree-2 and degree-3 homogeneous polynomial kernels.
inline std::vector<LabeledKernel> default_kernel_grid() {
    return {{"linear", linear_kernel()},
            {"quadratic", polynomial_kernel(2)},
            {"polynomial", polynomial_kernel(3)},
            {"gaussian", gaussian_kernel()}};
}
inline std::vector<double> default_penalty_grid() { return {0.1, 1.0, 10.0}; }

inline std::optional<LabeledKernel> kernel_by_name(const std::string& name) {
    for (const LabeledKernel& k : default_kernel_grid())
        if (k.label == name) return k;
    return std::nullopt;
}

struct GridSearchCell {
    std::string kernel_label;
    KernelSpec kernel;
    double c = 0.0;
    double accuracy = 0.0;
    bool failed = false;
    std::string error;
};

struct GridSearchResult {
    std::vector<GridSearchCell> cells;  // kernel-major, penalties in sweep order
    int best_index = -1;
    SvmModel best_model;
    TrainingDiagnostics best_diagnostics;

    const GridSearchCell& best_cell() const { return cells[static_cast<std::size_t>(best_index)]; }
};

// Argmax by accuracy; ties prefer the lower penalty, then earlier kernel
// order. Failed cells never win.
inline int pick_best_cell(const std::vector<GridSearchCell>& cells) {
    int best = -1;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].failed) continue;
        if (best < 0) {
            best = static_cast<int>(i);
            continue;
        }
        const GridSearchCell& b = cells[static_cast<std::size_t>(best)];
        const GridSearchCell& x = cells[i];
        if (x.accuracy > b.accuracy || (x.accuracy == b.accuracy && x.c < b.c))
            best = static_cast<int>(i);
    }
    return best;
}

inline GridSearchResult grid_search(const Dataset& train_set, const Dataset& validation_set,
                                    const std::vector<LabeledKernel>& kernels,
                                    const std::vector<double>& penalties,
                                    const TrainOptions& opts = {}) {
    if (kernels.empty() || penalties.empty()) throw ValidationError("empty search grid");
    GridSearchResult result;
    for (const LabeledKernel& k : kernels)
        for (double c : penalties) {
            GridSearchCell cell;
            cell.kernel_label = k.label;
            cell.kernel = k.spec;
            cell.c = c;
            try {
                const auto [model, diag] = train(train_set, k.spec, c, opts);
                cell.accuracy = accuracy(model, validation_set);
            } catch (const std::exception& e) {
                cell.failed = true;
                cell.error = e.what();
            }
            result.cells.push_back(cell);
        }
    result.best_index = pick_best_cell(result.cells);
    if (result.best_index < 0) throw NumericalError("every grid-search cell failed");
    const GridSearchCell& best = result.best_cell();
    auto [model, diag] = train(train_set, best.kernel, best.c, opts);
    result.best_model = std::move(model);
    result.best_diagnostics = std::move(diag);
    return result;
}

// CSV with kernel rows and penalty columns.
inline std::string accuracy_table_csv(const GridSearchResult& result,
                                      const std::vector<LabeledKernel>& kernels,
                                      const std::vector<double>& penalties) {
    std::ostringstream os;
    os << "kernel";
    char buf[64];
    for (double c : penalties) {
        std::snprintf(buf, sizeof buf, ",c=%g", c);
        os << buf;
    }
    os << "\n";
    std::size_t idx = 0;
    for (const LabeledKernel& k : kernels) {
        os << k.label;
        for (std::size_t ci = 0; ci < penalties.size(); ++ci, ++idx) {
            const GridSearchCell& cell = result.cells[idx];
            if (cell.failed) {
                os << ",failed";
            } else {
                std::snprintf(buf, sizeof buf, ",%.1f", cell.accuracy);
                os << buf;
            }
        }
        os << "\n";
    }
    return os.str();
}

// --- decision boundary ---------------------------------------------------------

struct BoundaryGrid {
    std::vector<double> x1;  // resolution values
    std::vector<double> x2;
    std::vector<double> f;   // row-major over (x1 index, x2 index)
};

// Dense decision values over the rectangle; resolution 1 samples the center.
inline BoundaryGrid export_boundary(const SvmModel& model, double x1_lo, double x1_hi,
                                    double x2_lo, double x2_hi, int resolution) {
    if (resolution < 1) throw ValidationError("boundary resolution must be >= 1");
    BoundaryGrid grid;
    auto axis = [resolution](double lo, double hi) {
        std::vector<double> v;
        if (resolution == 1) {
            v.push_back((lo + hi) / 2.0);
        } else {
            for (int i = 0; i < resolution; ++i)
                v.push_back(lo + (hi - lo) * static_cast<double>(i) / (resolution - 1));
        }
        return v;
    };
    grid.x1 = axis(x1_lo, x1_hi);
    grid.x2 = axis(x2_lo, x2_hi);
    for (double a : grid.x1)
        for (double b : grid.x2) {
            const double x[2] = {a, b};
            grid.f.push_back(decision_value(model, std::span<const double>(x, 2)));
        }
    return grid;
}

inline std::string boundary_to_csv(const BoundaryGrid& grid) {
    std::string out = "x1,x2,f\n";
    char buf[128];
    std::size_t idx = 0;
    for (double a : grid.x1)
        for (double b : grid.x2) {
            std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g\n", a, b, grid.f[idx++]);
            out += buf;
        }
    return out;
}

}  // namespace gridres
