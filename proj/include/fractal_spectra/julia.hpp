#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "rational.hpp"

namespace fractal_spectra {

/// Depth-k backward orbit of a point under z -> z^2 - lambda: all real values
/// +-sqrt(lambda + seed expansion), i.e. the 2^k nested-radical sign choices.
/// Complex branches (negative radicands) are dropped.
inline std::vector<double> julia_preimages(double lambda, double seed, int depth) {
    if (depth < 0) throw input_error("julia_preimages: depth must be >= 0");
    std::vector<double> cur{seed};
    for (int k = 0; k < depth; ++k) {
        std::vector<double> next;
        next.reserve(cur.size() * 2);
        for (double w : cur) {
            const double rad = lambda + w;  // z^2 - lambda = w  =>  z = +-sqrt(lambda + w)
            if (rad < 0) continue;
            const double r = std::sqrt(rad);
            next.push_back(-r);
            next.push_back(r);
        }
        cur = std::move(next);
    }
    std::sort(cur.begin(), cur.end());
    return cur;
}

inline std::vector<double> julia_preimages_of_zero(double lambda, int depth) {
    return julia_preimages(lambda, 0.0, depth);
}

}  // namespace fractal_spectra
