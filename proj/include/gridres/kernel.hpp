// Kernel functions for the classifier: linear u.v, polynomial (u.v)^d
// (an optional +1 offset is available but off by default), and gaussian
// exp(-gamma * |u - v|^2).
#pragma once

#include <cmath>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "gridres/errors.hpp"

namespace gridres {

enum class KernelKind { Linear, Polynomial, Gaussian };

struct KernelSpec {
    KernelKind kind = KernelKind::Linear;
    int degree = 2;          // polynomial only, >= 1
    double gamma = 0.5;      // gaussian only, > 0
    bool poly_offset = false;  // polynomial (u.v + 1)^d instead of (u.v)^d

    void validate() const {
        if (kind == KernelKind::Polynomial && degree < 1)
            throw ValidationError("polynomial degree must be >= 1");
        if (kind == KernelKind::Gaussian && !(gamma > 0.0))
            throw ValidationError("gaussian gamma must be > 0");
    }

    friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

inline KernelSpec linear_kernel() { return {KernelKind::Linear, 0, 0.5, false}; }
inline KernelSpec polynomial_kernel(int degree, bool offset = false) {
    return {KernelKind::Polynomial, degree, 0.5, offset};
}
inline KernelSpec gaussian_kernel(double gamma = 0.5) {
    return {KernelKind::Gaussian, 0, gamma, false};
}

inline double kernel_eval(const KernelSpec& spec, std::span<const double> u,
                          std::span<const double> v) {
    if (u.size() != v.size())
        throw ValidationError("kernel arguments must have equal dimension");
    switch (spec.kind) {
        case KernelKind::Linear: {
            double s = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
            return s;
        }
        case KernelKind::Polynomial: {
            double s = spec.poly_offset ? 1.0 : 0.0;
            for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
            double acc = 1.0;
            for (int d = 0; d < spec.degree; ++d) acc *= s;
            return acc;
        }
        case KernelKind::Gaussian: {
            double d2 = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i) {
                const double diff = u[i] - v[i];
                d2 += diff * diff;
            }
            return std::exp(-spec.gamma * d2);
        }
    }
    throw ValidationError("unknown kernel kind");
}

inline std::string kernel_kind_name(KernelKind kind) {
    switch (kind) {
        case KernelKind::Linear: return "linear";
        case KernelKind::Polynomial: return "polynomial";
        case KernelKind::Gaussian: return "gaussian";
    }
    return "unknown";
}

inline void to_json(nlohmann::json& j, const KernelSpec& k) {
    j = {{"kind", kernel_kind_name(k.kind)},
         {"degree", k.degree},
         {"gamma", k.gamma},
         {"poly_offset", k.poly_offset}};
}

inline void from_json(const nlohmann::json& j, KernelSpec& k) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "linear") k.kind = KernelKind::Linear;
    else if (kind == "polynomial") k.kind = KernelKind::Polynomial;
    else if (kind == "gaussian") k.kind = KernelKind::Gaussian;
    else throw ValidationError("unknown kernel kind '" + kind + "'");
    k.degree = j.value("degree", 2);
    k.gamma = j.value("gamma", 0.5);
    k.poly_offset = j.value("poly_offset", false);
    k.validate();
}

}  // namespace gridres
