#pragma once

#include <vector>

#include "lgsim/crosstalk.hpp"

namespace lgsim {

struct KeyRateResult {
    int dimension = 0;
    double qber = 0.0;
    double rate_bits = 0.0; // may be negative; floored at 0 only in reports
};

/// d-dimensional Shannon entropy
///   h^(d)(x) = -x log2(x/(d-1)) - (1-x) log2(1-x)
/// with the limits h(0) = 0 and h(1) = log2(d-1).
double entropy_d(double x, int d);

/// High-dimensional BB84 rate R = log2(d) - 2 h^(d)(e_b).
KeyRateResult secret_key_rate(int d, double e_b);

/// e_b = 1 - visibility of the submatrix over `subset`.
double qber_from_crosstalk(const CrosstalkMatrix& m, const std::vector<int>& subset);

KeyRateResult key_rate_for_subset(const CrosstalkMatrix& m, const std::vector<int>& subset);

} // namespace lgsim
