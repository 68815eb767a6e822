#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace lgsim {

/// Polar-plane quadrature request. n_azimuthal must be even (the closed
/// trapezoid ring assumes uniform samples); n_radial >= 16.
struct GridSpec {
    int n_radial = 256;
    int n_azimuthal = 64;
    double r_max = 8.0;
};

void validate(const GridSpec& spec);

/// Precomputed nodes and weights. Radial rule: Gauss-Legendre on [0, r_max]
/// applied to g(r) * r, so `wr` already contains the Jacobian. Azimuthal
/// rule: uniform samples phi_k = 2 pi k / n with common weight 2 pi / n.
struct QuadratureGrid {
    std::vector<double> r;
    std::vector<double> wr;
    std::vector<double> phi;
    double wphi = 0.0;
    double r_max = 0.0;

    int n_radial() const { return static_cast<int>(r.size()); }
    int n_azimuthal() const { return static_cast<int>(phi.size()); }
};

QuadratureGrid build_grid(const GridSpec& spec);

using FieldFn = std::function<std::complex<double>(double, double)>;
using RadialFn = std::function<double(double)>;

/// Discretized integral  iint conj(A) B weight(r) r dr dphi  over the grid.
/// Summation order is fixed (azimuthal inner, radial outer) so that
/// overlap(A,B) == conj(overlap(B,A)) exactly as computed.
std::complex<double> overlap(const FieldFn& a, const FieldFn& b,
                             const RadialFn& weight, const QuadratureGrid& grid);

/// Unit weight convenience overload (Eq-1-style pure mode overlap).
std::complex<double> overlap(const FieldFn& a, const FieldFn& b,
                             const QuadratureGrid& grid);

/// Evaluates on `spec` and on a grid with doubled n_radial and n_azimuthal;
/// returns the refined value. Throws NonConvergedError when
/// |refined - base| > rel_tol * max(1, |refined|).
std::complex<double> converged_overlap(const FieldFn& a, const FieldFn& b,
                                       const RadialFn& weight,
                                       const GridSpec& spec, double rel_tol);

/// Default azimuthal sample count: 4 (2 ell_max + 1), rounded up to even.
int default_azimuthal_samples(int ell_max);

/// Production default: n_radial = 256, r_max = 8 w, azimuthal per ell_max.
GridSpec default_grid(double waist, int ell_max);

} // namespace lgsim
