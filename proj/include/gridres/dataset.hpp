// Labeled feature samples, CSV persistence, and the train/validation split.
#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "gridres/errors.hpp"
#include "gridres/rng.hpp"

namespace gridres {

inline constexpr int kLabelOutage = +1;
inline constexpr int kLabelOperational = -1;

struct LabeledSample {
    double x1 = 0.0;  // mph
    double x2 = 0.0;  // km
    int label = kLabelOperational;

    friend bool operator==(const LabeledSample&, const LabeledSample&) = default;
};

struct Dataset {
    std::vector<LabeledSample> samples;
    std::uint64_t seed = 0;

    std::size_t size() const { return samples.size(); }
    std::size_t count_label(int label) const {
        std::size_t n = 0;
        for (const LabeledSample& s : samples) n += s.label == label;
        return n;
    }

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

// Uniform shuffle by seed (Fisher-Yates, index draws = next_u64() % k), first
// floor(fraction * m) samples to train, remainder to validation.
inline std::pair<Dataset, Dataset> split(const Dataset& dataset, double train_fraction,
                                         std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw ValidationError("train fraction must lie in (0, 1)");
    const std::size_t m = dataset.samples.size();
    const std::size_t n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(m)));
    if (n_train == 0 || n_train == m)
        throw ValidationError("split would leave an empty partition");

    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    Rng rng(seed);
    for (std::size_t i = m - 1; i > 0; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_index(i + 1));
        std::swap(order[i], order[j]);
    }

    Dataset train, validation;
    train.seed = validation.seed = seed;
    for (std::size_t i = 0; i < m; ++i)
        (i < n_train ? train : validation).samples.push_back(dataset.samples[order[i]]);
    return {train, validation};
}

// --- CSV ----------------------------------------------------------------------

inline std::string dataset_to_csv(const Dataset& dataset) {
    std::ostringstream os;
    os << "x1_mph,x2_km,label\n";
    char buf[96];
    for (const LabeledSample& s : dataset.samples) {
        std::snprintf(buf, sizeof buf, "%.10g,%.10g,%d\n", s.x1, s.x2, s.label);
        os << buf;
    }
    return os.str();
}

inline Dataset dataset_from_csv(const std::string& text, const std::string& source = "dataset") {
    Dataset ds;
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        if (line_no == 1) {
            if (line.rfind("x1_mph,x2_km,label", 0) != 0)
                throw ParseError(source, 1, "expected header 'x1_mph,x2_km,label'");
            continue;
        }
        LabeledSample s;
        char* end = nullptr;
        const char* p = line.c_str();
        s.x1 = std::strtod(p, &end);
        if (end == p || *end != ',') throw ParseError(source, line_no, "malformed row");
        p = end + 1;
        s.x2 = std::strtod(p, &end);
        if (end == p || *end != ',') throw ParseError(source, line_no, "malformed row");
        s.label = static_cast<int>(std::strtol(end + 1, &end, 10));
        if (s.label != kLabelOutage && s.label != kLabelOperational)
            throw ParseError(source, line_no, "label must be -1 or 1");
        ds.samples.push_back(s);
    }
    return ds;
}

}  // namespace gridres
