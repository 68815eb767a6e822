#pragma once

#include <compare>
#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace lgsim {

/// Label of one Laguerre-Gauss mode: azimuthal index ell (any sign) and
/// radial index p (>= 0).
struct ModeIndex {
    int ell = 0;
    int p = 0;
    auto operator<=>(const ModeIndex&) const = default;
};

/// Mode order N = 2p + |ell| + 1.
int mode_order(ModeIndex m);

/// All modes with mode_order <= max_order, sorted by (N, ell, p) ascending.
/// For each N there are exactly N modes; the total count is N(N+1)/2.
std::vector<ModeIndex> enumerate_modes(int max_order);

/// Serialized form "l<ell>p<p>", e.g. "l-2p1".
std::string mode_token(ModeIndex m);
ModeIndex parse_mode_token(std::string_view token);

/// Associated Laguerre polynomial L_p^alpha(x) via the three-term recurrence.
double laguerre_assoc(int p, int alpha, double x);

/// Waist-plane LG field, unit L2 norm over the transverse plane:
///   sqrt(2 p! / (pi (p+|l|)!)) (1/w) (sqrt(2) r/w)^|l| L_p^|l|(2r^2/w^2)
///     * exp(-r^2/w^2) exp(i l phi)
/// The normalization factor is evaluated in log space so that orders up to
/// N ~ 30 do not overflow the factorials.
std::complex<double> lg_field(ModeIndex m, double waist, double r, double phi);

/// Radial part of lg_field (the field at phi = 0, which is real).
double lg_radial(ModeIndex m, double waist, double r);

/// Normalized pure superposition of LG modes sharing one waist.
struct SpatialState {
    std::vector<ModeIndex> modes;
    std::vector<std::complex<double>> coeffs;
    double waist = 1.0;

    SpatialState() = default;
    /// Validates: matching lengths, waist > 0, no duplicate modes, and
    /// sum |c_k|^2 = 1 within 1e-12. Throws std::invalid_argument.
    SpatialState(std::vector<ModeIndex> modes,
                 std::vector<std::complex<double>> coeffs, double waist);

    int dimension() const { return static_cast<int>(modes.size()); }
    std::complex<double> field(double r, double phi) const;

    /// True when every component shares one azimuthal index, in which case
    /// |field| is independent of phi.
    bool single_azimuthal() const;
};

SpatialState single_mode_state(ModeIndex m, double waist);

/// Radial family p = p_min..p_max at ell = 0.
std::vector<SpatialState> radial_states(int p_min, int p_max, double waist);

/// Azimuthal family ell = -ell_max..ell_max at p = 0.
std::vector<SpatialState> azimuthal_states(int ell_max, double waist);

/// Full-field family: every mode with mode_order <= n_max, canonical order.
std::vector<SpatialState> fullfield_states(int n_max, double waist);

} // namespace lgsim
