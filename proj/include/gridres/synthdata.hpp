// Synthetic training corpus: Saffir-Simpson wind sampling, a logistic
// fragility ground truth, and rejection sampling to exact per-class quotas.
//
// Draw order per candidate sample (one deviation from the Rng stream each):
//   category  = 1 + next_u64() % 5
//   wind      = uniform(category band)
//   distance  = uniform(0, 300)
//   label     = bernoulli(fragility(wind, distance))
// Candidates whose class quota is already full are discarded.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "gridres/dataset.hpp"
#include "gridres/errors.hpp"
#include "gridres/rng.hpp"

namespace gridres {

// Saffir-Simpson sustained-wind thresholds (mph) and the finite sampling cap
// closing category 5.
inline constexpr std::array<double, 5> kSaffirSimpsonThresholds = {74, 96, 111, 130, 157};
inline constexpr double kCategory5Cap = 200.0;
inline constexpr double kDistanceMaxKm = 300.0;

inline int saffir_simpson_category(double wind_mph) {
    if (wind_mph < 0.0) throw ValidationError("wind speed must be >= 0");
    int cat = 0;
    for (double threshold : kSaffirSimpsonThresholds)
        if (wind_mph >= threshold) ++cat;
    return cat;
}

// Wind band [lo, hi) of a category, category 5 capped at kCategory5Cap.
inline std::pair<double, double> category_wind_band(int category) {
    if (category < 1 || category > 5)
        throw ValidationError("hurricane category must be in 1..5");
    const double lo = kSaffirSimpsonThresholds[static_cast<std::size_t>(category - 1)];
    const double hi = category == 5 ? kCategory5Cap
                                    : kSaffirSimpsonThresholds[static_cast<std::size_t>(category)];
    return {lo, hi};
}

inline double sample_wind(int category, Rng& rng) {
    const auto [lo, hi] = category_wind_band(category);
    return rng.uniform(lo, hi);
}

// Logistic fragility: p = sigma(b0 + b1 * wind - b2 * distance). Increasing
// in wind, decreasing in distance.
struct FragilityParams {
    double b0 = -4.0;  // intercept
    double b1 = 0.08;  // per mph
    double b2 = 0.06;  // per km

    friend bool operator==(const FragilityParams&, const FragilityParams&) = default;
};

inline double ground_truth_outage_prob(double x1, double x2,
                                       const FragilityParams& params = {}) {
    const double z = params.b0 + params.b1 * x1 - params.b2 * x2;
    return 1.0 / (1.0 + std::exp(-z));
}

// One candidate draw from the generative model (no quota filtering).
inline LabeledSample draw_labeled_sample(Rng& rng, const FragilityParams& params = {}) {
    const int category = 1 + static_cast<int>(rng.next_index(5));
    const double wind = sample_wind(category, rng);
    const double dist = rng.uniform(0.0, kDistanceMaxKm);
    const bool outage = rng.bernoulli(ground_truth_outage_prob(wind, dist, params));
    return {wind, dist, outage ? kLabelOutage : kLabelOperational};
}

// Rejection sampling until both class quotas are met exactly. Terminates with
// probability 1 since the fragility stays strictly inside (0, 1).
inline Dataset generate_dataset(std::size_t n_outage, std::size_t n_operational,
                                std::uint64_t seed, const FragilityParams& params = {}) {
    if (n_outage == 0 || n_operational == 0)
        throw ValidationError("class quotas must be positive");
    Dataset ds;
    ds.seed = seed;
    ds.samples.reserve(n_outage + n_operational);
    Rng rng(seed);
    std::size_t outage_left = n_outage, operational_left = n_operational;
    while (outage_left > 0 || operational_left > 0) {
        const LabeledSample s = draw_labeled_sample(rng, params);
        if (s.label == kLabelOutage && outage_left > 0) {
            ds.samples.push_back(s);
            --outage_left;
        } else if (s.label == kLabelOperational && operational_left > 0) {
            ds.samples.push_back(s);
            --operational_left;
        }
    }
    return ds;
}

}  // namespace gridres
