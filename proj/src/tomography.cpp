#include "lgsim/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lgsim/errors.hpp"
#include "lgsim/parallel.hpp"

namespace lgsim {

bool is_prime(int n) {
    if (n < 2) return false;
    for (int k = 2; static_cast<long long>(k) * k <= n; ++k)
        if (n % k == 0) return false;
    return true;
}

SpatialState MubSet::state(int alpha, int m) const {
    std::vector<std::complex<double>> c(dimension);
    for (int k = 0; k < dimension; ++k) c[k] = coeff(alpha, m, k);
    return SpatialState(support, std::move(c), waist);
}

MubSet mub_bases(int d, const std::vector<ModeIndex>& support, double waist) {
    if (!is_prime(d))
        throw NotPrimeError("mub_bases: d = " + std::to_string(d) +
                            " is not prime (prime-power construction not implemented)");
    if (static_cast<int>(support.size()) != d)
        throw std::invalid_argument("mub_bases: support must list exactly d modes");

    MubSet set;
    set.dimension = d;
    set.support = support;
    set.waist = waist;
    set.coeffs.assign(static_cast<size_t>(d + 1) * d * d, {0.0, 0.0});
    const auto put = [&](int alpha, int m, int k, std::complex<double> v) {
        set.coeffs[(static_cast<size_t>(alpha) * d + m) * static_cast<size_t>(d) + k] = v;
    };

    for (int m = 0; m < d; ++m) put(0, m, m, {1.0, 0.0}); // computational

    if (d == 2) {
        const double s = 1.0 / std::numbers::sqrt2;
        // (|0> +- |1>)/sqrt2 and (|0> +- i|1>)/sqrt2
        put(1, 0, 0, {s, 0.0}); put(1, 0, 1, {s, 0.0});
        put(1, 1, 0, {s, 0.0}); put(1, 1, 1, {-s, 0.0});
        put(2, 0, 0, {s, 0.0}); put(2, 0, 1, {0.0, s});
        put(2, 1, 0, {s, 0.0}); put(2, 1, 1, {0.0, -s});
        return set;
    }

    // odd prime: <k|psi_m^(alpha)> = omega^(alpha k^2 + m k)/sqrt(d)
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (int alpha = 1; alpha <= d; ++alpha)
        for (int m = 0; m < d; ++m)
            for (int k = 0; k < d; ++k) {
                const long long expo =
                    (static_cast<long long>(alpha) * k * k + static_cast<long long>(m) * k) % d;
                const double angle = 2.0 * std::numbers::pi * static_cast<double>(expo) / d;
                put(alpha, m, k, std::polar(s, angle));
            }
    return set;
}

namespace {

// truth coefficients re-expressed in the MUB support order
std::vector<std::complex<double>> align_to_support(const SpatialState& truth,
                                                   const std::vector<ModeIndex>& support) {
    std::vector<std::complex<double>> out(support.size(), {0.0, 0.0});
    for (size_t i = 0; i < truth.modes.size(); ++i) {
        const auto it = std::find(support.begin(), support.end(), truth.modes[i]);
        if (it == support.end())
            throw std::invalid_argument("state mode " + mode_token(truth.modes[i]) +
                                        " is outside the MUB support");
        out[static_cast<size_t>(it - support.begin())] = truth.coeffs[i];
    }
    return out;
}

} // namespace

TomographyRecord simulate_tomography(const SpatialState& truth, const MubSet& mubs,
                                     const DetectionModel& model,
                                     bool compensate_mask_loss, int workers) {
    validate(model);
    align_to_support(truth, mubs.support); // validates the support
    if (truth.waist != mubs.waist)
        throw std::invalid_argument("simulate_tomography: truth and MUB waists differ");

    const int d = mubs.dimension;
    TomographyRecord rec;
    rec.mubs = mubs;
    rec.model = model;
    rec.exact = false;
    rec.compensated = compensate_mask_loss;
    rec.probs.assign(static_cast<size_t>(d + 1) * d, 0.0);

    const auto grid = build_grid(model.grid);
    const auto f_truth = detail::sample_state(truth, grid);
    const double W = model.beta * truth.waist;
    std::vector<double> gauss_wr(grid.n_radial());
    for (int i = 0; i < grid.n_radial(); ++i)
        gauss_wr[i] = backward_gaussian(W, grid.r[i]) * grid.wr[i];
    const MaskKind kind = mask_kind_for(model.method);

    parallel_for(static_cast<size_t>(d + 1) * d, workers, [&](size_t lo, size_t hi) {
        for (size_t idx = lo; idx < hi; ++idx) {
            const int alpha = static_cast<int>(idx / d);
            const int m = static_cast<int>(idx % d);
            const MaskFunction mask(mubs.state(alpha, m), kind, model.grid.r_max);
            const auto fmask = detail::sample_mask(mask, grid);
            double p = std::norm(detail::coupling_sum(f_truth, fmask, gauss_wr, grid));
            if (compensate_mask_loss && kind == MaskKind::AmplitudeAndPhase) {
                // undo the known per-projector mask transmission 1/M^2
                p *= mask.norm_factor() * mask.norm_factor();
            }
            rec.probs[idx] = p;
        }
    });

    for (int alpha = 0; alpha <= d; ++alpha) {
        double sum = 0.0;
        for (int m = 0; m < d; ++m) sum += rec.probs[static_cast<size_t>(alpha) * d + m];
        if (sum <= 0.0)
            throw DegenerateBasisError("simulate_tomography: basis " + std::to_string(alpha) +
                                       " received no signal");
        for (int m = 0; m < d; ++m) rec.probs[static_cast<size_t>(alpha) * d + m] /= sum;
    }
    return rec;
}

TomographyRecord projector_probabilities(const SpatialState& truth, const MubSet& mubs) {
    const auto cf = align_to_support(truth, mubs.support);
    const int d = mubs.dimension;
    TomographyRecord rec;
    rec.mubs = mubs;
    rec.exact = true;
    rec.compensated = false;
    rec.probs.assign(static_cast<size_t>(d + 1) * d, 0.0);
    for (int alpha = 0; alpha <= d; ++alpha) {
        double sum = 0.0;
        for (int m = 0; m < d; ++m) {
            std::complex<double> ip{0.0, 0.0};
            for (int k = 0; k < d; ++k) ip += std::conj(mubs.coeff(alpha, m, k)) * cf[k];
            const double p = std::norm(ip);
            rec.probs[static_cast<size_t>(alpha) * d + m] = p;
            sum += p;
        }
        // exact per-basis sums are 1 for normalized truth; renormalize anyway
        // so downstream invariants never depend on rounding
        if (sum <= 0.0) throw DegenerateBasisError("projector_probabilities: empty basis");
        for (int m = 0; m < d; ++m) rec.probs[static_cast<size_t>(alpha) * d + m] /= sum;
    }
    return rec;
}

double DensityMatrix::trace_real() const {
    double tr = 0.0;
    for (int i = 0; i < dimension; ++i) tr += at(i, i).real();
    return tr;
}

DensityMatrix direct_inversion(const TomographyRecord& record) {
    const int d = record.mubs.dimension;
    DensityMatrix rho;
    rho.dimension = d;
    rho.rho.assign(static_cast<size_t>(d) * d, {0.0, 0.0});
    for (int alpha = 0; alpha <= d; ++alpha)
        for (int m = 0; m < d; ++m) {
            const double p = record.prob(alpha, m);
            for (int i = 0; i < d; ++i) {
                const auto vi = record.mubs.coeff(alpha, m, i);
                for (int j = 0; j < d; ++j)
                    rho.at(i, j) += p * vi * std::conj(record.mubs.coeff(alpha, m, j));
            }
        }
    for (int i = 0; i < d; ++i) rho.at(i, i) -= 1.0;
    return rho;
}

double fidelity(const DensityMatrix& rho, const SpatialState& truth,
                const std::vector<ModeIndex>& support) {
    if (rho.dimension != static_cast<int>(support.size()))
        throw std::invalid_argument("fidelity: dimension mismatch");
    const auto cf = align_to_support(truth, support);
    const int d = rho.dimension;
    std::complex<double> acc{0.0, 0.0};
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) acc += std::conj(cf[i]) * rho.at(i, j) * cf[j];
    return acc.real();
}

} // namespace lgsim
