#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "lgsim/crosstalk.hpp"
#include "lgsim/modes.hpp"
#include "lgsim/rng.hpp"

namespace lgsim::testutil {

/// Deterministic crosstalk-like matrix: strong-ish diagonal, light off-diagonal.
inline CrosstalkMatrix make_random_matrix(int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::string> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = "m" + std::to_string(i);
    std::vector<double> values(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double u = rng.unit();
            values[static_cast<size_t>(i) * n + j] = i == j ? 0.4 + 0.6 * u : 0.15 * u * u;
        }
    return CrosstalkMatrix(std::move(labels), std::move(values));
}

/// Seeded random pure state on the given support.
inline SpatialState make_random_state(const std::vector<ModeIndex>& support, double waist,
                                      std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::complex<double>> c(support.size());
    double norm2 = 0.0;
    for (auto& v : c) {
        v = {rng.unit() - 0.5, rng.unit() - 0.5};
        norm2 += std::norm(v);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& v : c) v *= inv;
    return SpatialState(support, std::move(c), waist);
}

} // namespace lgsim::testutil
