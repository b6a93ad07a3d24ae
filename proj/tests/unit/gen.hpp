#pragma once

// Hand-rolled generators for property tests. Everything is driven by a
// seeded std::mt19937_64 so failures replay.

#include <cstdint>
#include <random>
#include <vector>

#include "gridsing/domain.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline std::int64_t integer(Rng& r, std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(r);
}

inline double real(Rng& r, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(r); }

/// Box with corners on the grid of spacing 1/den inside [0, span].
inline gridsing::Box box(Rng& r, std::size_t dim, std::int64_t den, std::int64_t span) {
    gridsing::Box b;
    for (std::size_t d = 0; d < dim; ++d) {
        const std::int64_t a = integer(r, 0, span * den - 1);
        const std::int64_t c = integer(r, a + 1, span * den);
        b.lower.emplace_back(a, den);
        b.upper.emplace_back(c, den);
        b.lower.back().canonicalize();
        b.upper.back().canonicalize();
    }
    return b;
}

inline gridsing::Domain domain(Rng& r, std::size_t dim, std::size_t max_boxes, std::int64_t den, std::int64_t span) {
    std::vector<gridsing::Box> boxes;
    const auto k = static_cast<std::size_t>(integer(r, 1, static_cast<std::int64_t>(max_boxes)));
    for (std::size_t i = 0; i < k; ++i) boxes.push_back(box(r, dim, den, span));
    return gridsing::Domain(dim, boxes);
}

}  // namespace gen
