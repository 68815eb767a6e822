#include "lgsim/qkd.hpp"

#include <cmath>
#include <stdexcept>

namespace lgsim {

double entropy_d(double x, int d) {
    if (d < 2) throw std::invalid_argument("entropy_d: d must be >= 2");
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("entropy_d: x must be in [0, 1]");
    double h = 0.0;
    if (x > 0.0) h -= x * std::log2(x / (d - 1));
    if (x < 1.0) h -= (1.0 - x) * std::log2(1.0 - x);
    return h;
}

KeyRateResult secret_key_rate(int d, double e_b) {
    KeyRateResult out;
    out.dimension = d;
    out.qber = e_b;
    out.rate_bits = std::log2(static_cast<double>(d)) - 2.0 * entropy_d(e_b, d);
    return out;
}

double qber_from_crosstalk(const CrosstalkMatrix& m, const std::vector<int>& subset) {
    if (subset.size() < 2)
        throw std::invalid_argument("qber_from_crosstalk: subset must have >= 2 indices");
    return 1.0 - visibility_subset(m, subset);
}

KeyRateResult key_rate_for_subset(const CrosstalkMatrix& m, const std::vector<int>& subset) {
    return secret_key_rate(static_cast<int>(subset.size()), qber_from_crosstalk(m, subset));
}

} // namespace lgsim
