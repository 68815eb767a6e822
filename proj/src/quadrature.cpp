#include "lgsim/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lgsim/errors.hpp"

namespace lgsim {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n
// (classic gauleg). Symmetric pairs are filled from one half.
void legendre_rule(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

} // namespace

void validate(const GridSpec& spec) {
    if (spec.n_radial < 16)
        throw std::invalid_argument("GridSpec: n_radial must be >= 16");
    if (spec.n_azimuthal < 8)
        throw std::invalid_argument("GridSpec: n_azimuthal must be >= 8");
    if (spec.n_azimuthal % 2 != 0)
        throw std::invalid_argument("GridSpec: n_azimuthal must be even (closed trapezoid ring)");
    if (!(spec.r_max > 0.0))
        throw std::invalid_argument("GridSpec: r_max must be > 0");
}

QuadratureGrid build_grid(const GridSpec& spec) {
    validate(spec);
    QuadratureGrid g;
    g.r_max = spec.r_max;
    std::vector<double> x, w;
    legendre_rule(spec.n_radial, x, w);
    g.r.resize(spec.n_radial);
    g.wr.resize(spec.n_radial);
    const double half = 0.5 * spec.r_max;
    for (int i = 0; i < spec.n_radial; ++i) {
        g.r[i] = half * (x[i] + 1.0);
        g.wr[i] = half * w[i] * g.r[i]; // Jacobian r folded in
    }
    g.phi.resize(spec.n_azimuthal);
    for (int k = 0; k < spec.n_azimuthal; ++k)
        g.phi[k] = 2.0 * std::numbers::pi * k / spec.n_azimuthal;
    g.wphi = 2.0 * std::numbers::pi / spec.n_azimuthal;
    return g;
}

std::complex<double> overlap(const FieldFn& a, const FieldFn& b,
                             const RadialFn& weight, const QuadratureGrid& grid) {
    std::complex<double> total{0.0, 0.0};
    for (int i = 0; i < grid.n_radial(); ++i) {
        std::complex<double> ring{0.0, 0.0};
        for (int k = 0; k < grid.n_azimuthal(); ++k) {
            const double r = grid.r[i];
            const double phi = grid.phi[k];
            ring += std::conj(a(r, phi)) * b(r, phi);
        }
        total += ring * (grid.wphi * grid.wr[i] * weight(grid.r[i]));
    }
    return total;
}

std::complex<double> overlap(const FieldFn& a, const FieldFn& b,
                             const QuadratureGrid& grid) {
    return overlap(a, b, [](double) { return 1.0; }, grid);
}

std::complex<double> converged_overlap(const FieldFn& a, const FieldFn& b,
                                       const RadialFn& weight,
                                       const GridSpec& spec, double rel_tol) {
    if (!(rel_tol > 0.0)) throw std::invalid_argument("converged_overlap: rel_tol must be > 0");
    const auto base = overlap(a, b, weight, build_grid(spec));
    GridSpec fine = spec;
    fine.n_radial *= 2;
    fine.n_azimuthal *= 2;
    const auto refined = overlap(a, b, weight, build_grid(fine));
    const double diff = std::abs(refined - base);
    if (diff > rel_tol * std::max(1.0, std::abs(refined)))
        throw NonConvergedError(
            "overlap did not converge under grid refinement (|delta| = " +
                std::to_string(diff) + "); enlarge the grid or aperture",
            diff);
    return refined;
}

int default_azimuthal_samples(int ell_max) {
    int n = 4 * (2 * std::abs(ell_max) + 1);
    if (n % 2 != 0) ++n;
    return std::max(n, 8);
}

GridSpec default_grid(double waist, int ell_max) {
    if (waist <= 0.0) throw std::invalid_argument("default_grid: waist must be > 0");
    GridSpec spec;
    spec.n_radial = 256;
    spec.n_azimuthal = default_azimuthal_samples(ell_max);
    spec.r_max = 8.0 * waist;
    return spec;
}

} // namespace lgsim
