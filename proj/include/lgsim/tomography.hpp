#pragma once

#include <complex>
#include <vector>

#include "lgsim/detection.hpp"
#include "lgsim/modes.hpp"

namespace lgsim {

bool is_prime(int n);

/// d+1 mutually unbiased bases over a fixed d-mode support list.
/// Basis 0 is computational; for odd prime d, basis alpha in 1..d has
///   <k|psi_m^(alpha)> = omega^(alpha k^2 + m k) / sqrt(d),  omega = e^{2 pi i / d};
/// d = 2 uses the three Pauli eigenbases.
struct MubSet {
    int dimension = 0;
    std::vector<ModeIndex> support;
    double waist = 1.0;
    std::vector<std::complex<double>> coeffs; // [(d+1) * d * d], (alpha, m, k)

    std::complex<double> coeff(int alpha, int m, int k) const {
        const auto d = static_cast<size_t>(dimension);
        return coeffs[(static_cast<size_t>(alpha) * d + m) * d + k];
    }
    SpatialState state(int alpha, int m) const;
};

/// Throws NotPrimeError for composite d (prime powers are not implemented).
MubSet mub_bases(int d, const std::vector<ModeIndex>& support, double waist);

/// Per-basis outcome probability table P^(alpha)_m, normalized to sum to 1
/// within each basis.
struct TomographyRecord {
    MubSet mubs;
    DetectionModel model{};
    bool exact = false;      // true when built from exact inner products
    bool compensated = true; // mask-transmission compensation applied
    std::vector<double> probs; // [(d+1) * d]

    double prob(int alpha, int m) const {
        return probs[static_cast<size_t>(alpha) * mubs.dimension + m];
    }
};

/// Measures `truth` through the detection model against every MUB projector.
/// Raw efficiencies p~ = detection_probability(truth, psi_m^(alpha)) are
/// multiplied by the known mask transmission normalization M^2 of each
/// projector when `compensate_mask_loss` is set (the amplitude-mask loss is
/// apparatus knowledge, not signal), then renormalized per basis. Throws
/// DegenerateBasisError when a basis receives no signal at all.
TomographyRecord simulate_tomography(const SpatialState& truth, const MubSet& mubs,
                                     const DetectionModel& model,
                                     bool compensate_mask_loss = true,
                                     int workers = 1);

/// Ideal-projector record: P^(alpha)_m = |<psi_m^(alpha)|truth>|^2.
TomographyRecord projector_probabilities(const SpatialState& truth, const MubSet& mubs);

/// Hermitian, unit trace given per-basis-normalized probabilities; not
/// necessarily positive (direct inversion).
struct DensityMatrix {
    int dimension = 0;
    std::vector<std::complex<double>> rho; // row-major d*d

    std::complex<double> at(int i, int j) const {
        return rho[static_cast<size_t>(i) * dimension + j];
    }
    std::complex<double>& at(int i, int j) {
        return rho[static_cast<size_t>(i) * dimension + j];
    }
    double trace_real() const;
};

/// rho = sum_{alpha,m} P^(alpha)_m |psi_m^(alpha)><psi_m^(alpha)| - identity.
DensityMatrix direct_inversion(const TomographyRecord& record);

/// <psi|rho|psi> for a pure target expressed over the MUB support modes
/// (any ordering of the same modes is accepted). Reported unclipped; may
/// slightly exceed [0,1] for non-positive rho.
double fidelity(const DensityMatrix& rho, const SpatialState& truth,
                const std::vector<ModeIndex>& support);

} // namespace lgsim
