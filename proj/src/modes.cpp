#include "lgsim/modes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>

namespace lgsim {

int mode_order(ModeIndex m) {
    if (m.p < 0) throw std::invalid_argument("mode_order: p must be >= 0");
    return 2 * m.p + std::abs(m.ell) + 1;
}

std::vector<ModeIndex> enumerate_modes(int max_order) {
    if (max_order < 1) throw std::invalid_argument("enumerate_modes: max_order must be >= 1");
    std::vector<ModeIndex> out;
    out.reserve(static_cast<size_t>(max_order) * (max_order + 1) / 2);
    for (int n = 1; n <= max_order; ++n) {
        // N = 2p + |ell| + 1; for fixed N, ell runs over +-(N-1-2p)
        for (int ell = -(n - 1); ell <= n - 1; ++ell) {
            const int rem = n - 1 - std::abs(ell);
            if (rem % 2 != 0) continue;
            out.push_back({ell, rem / 2});
        }
    }
    return out;
}

std::string mode_token(ModeIndex m) {
    return "l" + std::to_string(m.ell) + "p" + std::to_string(m.p);
}

ModeIndex parse_mode_token(std::string_view token) {
    const auto fail = [&] {
        throw std::invalid_argument("bad mode token '" + std::string(token) +
                                    "' (expected l<ell>p<p>, e.g. l-2p1)");
    };
    if (token.size() < 4 || token[0] != 'l') fail();
    const auto ppos = token.find('p', 1);
    if (ppos == std::string_view::npos || ppos + 1 >= token.size()) fail();
    try {
        size_t used = 0;
        const std::string ell_s(token.substr(1, ppos - 1));
        const int ell = std::stoi(ell_s, &used);
        if (used != ell_s.size()) fail();
        const std::string p_s(token.substr(ppos + 1));
        const int p = std::stoi(p_s, &used);
        if (used != p_s.size() || p < 0) fail();
        return {ell, p};
    } catch (const std::invalid_argument&) {
        fail();
    } catch (const std::out_of_range&) {
        fail();
    }
    return {}; // unreachable
}

double laguerre_assoc(int p, int alpha, double x) {
    if (p < 0 || alpha < 0) throw std::invalid_argument("laguerre_assoc: p, alpha must be >= 0");
    if (p == 0) return 1.0;
    double lm1 = 1.0;
    double l = 1.0 + alpha - x;
    for (int k = 2; k <= p; ++k) {
        const double next = ((2.0 * k - 1.0 + alpha - x) * l - (k - 1.0 + alpha) * lm1) / k;
        lm1 = l;
        l = next;
    }
    return l;
}

double lg_radial(ModeIndex m, double waist, double r) {
    if (waist <= 0.0) throw std::invalid_argument("lg_field: waist must be > 0");
    if (r < 0.0) throw std::invalid_argument("lg_field: r must be >= 0");
    const int a = std::abs(m.ell);
    // sqrt(2 p! / (pi (p+a)!)) in log space
    const double lognorm = 0.5 * (std::log(2.0) + std::lgamma(m.p + 1.0) -
                                  std::log(std::numbers::pi) - std::lgamma(m.p + a + 1.0));
    const double u = 2.0 * r * r / (waist * waist);
    double radial = std::exp(lognorm) / waist * laguerre_assoc(m.p, a, u) *
                    std::exp(-r * r / (waist * waist));
    if (a > 0) radial *= std::pow(std::numbers::sqrt2 * r / waist, a);
    return radial;
}

std::complex<double> lg_field(ModeIndex m, double waist, double r, double phi) {
    const double radial = lg_radial(m, waist, r);
    if (m.ell == 0) return {radial, 0.0};
    return std::polar(radial, m.ell * phi);
}

SpatialState::SpatialState(std::vector<ModeIndex> modes_in,
                           std::vector<std::complex<double>> coeffs_in, double waist_in)
    : modes(std::move(modes_in)), coeffs(std::move(coeffs_in)), waist(waist_in) {
    if (modes.size() != coeffs.size())
        throw std::invalid_argument("SpatialState: modes/coeffs length mismatch");
    if (modes.empty()) throw std::invalid_argument("SpatialState: empty mode list");
    if (waist <= 0.0) throw std::invalid_argument("SpatialState: waist must be > 0");
    for (const auto& mi : modes)
        if (mi.p < 0) throw std::invalid_argument("SpatialState: p must be >= 0");
    std::set<ModeIndex> seen(modes.begin(), modes.end());
    if (seen.size() != modes.size())
        throw std::invalid_argument("SpatialState: duplicate modes");
    double norm2 = 0.0;
    for (const auto& c : coeffs) norm2 += std::norm(c);
    if (std::abs(norm2 - 1.0) > 1e-12)
        throw std::invalid_argument("SpatialState: coefficients not unit-norm (|1 - sum|c|^2| = " +
                                    std::to_string(std::abs(norm2 - 1.0)) + ")");
}

std::complex<double> SpatialState::field(double r, double phi) const {
    std::complex<double> acc{0.0, 0.0};
    for (size_t k = 0; k < modes.size(); ++k)
        acc += coeffs[k] * lg_field(modes[k], waist, r, phi);
    return acc;
}

bool SpatialState::single_azimuthal() const {
    for (size_t k = 1; k < modes.size(); ++k)
        if (modes[k].ell != modes[0].ell) return false;
    return true;
}

SpatialState single_mode_state(ModeIndex m, double waist) {
    return SpatialState({m}, {{1.0, 0.0}}, waist);
}

std::vector<SpatialState> radial_states(int p_min, int p_max, double waist) {
    if (p_min < 0 || p_max < p_min) throw std::invalid_argument("radial_states: bad p range");
    std::vector<SpatialState> out;
    for (int p = p_min; p <= p_max; ++p) out.push_back(single_mode_state({0, p}, waist));
    return out;
}

std::vector<SpatialState> azimuthal_states(int ell_max, double waist) {
    if (ell_max < 0) throw std::invalid_argument("azimuthal_states: ell_max must be >= 0");
    std::vector<SpatialState> out;
    for (int ell = -ell_max; ell <= ell_max; ++ell)
        out.push_back(single_mode_state({ell, 0}, waist));
    return out;
}

std::vector<SpatialState> fullfield_states(int n_max, double waist) {
    std::vector<SpatialState> out;
    for (const auto& m : enumerate_modes(n_max)) out.push_back(single_mode_state(m, waist));
    return out;
}

} // namespace lgsim
