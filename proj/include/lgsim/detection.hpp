#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "lgsim/modes.hpp"
#include "lgsim/quadrature.hpp"

namespace lgsim {

/// Measurement flavor of the single phase screen + SMF coupling.
///   IntensityFlattening : amplitude-and-phase mask, enlarged backward waist
///   PhaseFlattening     : phase-only mask, beta fixed to 1
///   PhaseFlatteningAM   : amplitude-and-phase mask, beta fixed to 1
enum class Method {
    IntensityFlattening,
    PhaseFlattening,
    PhaseFlatteningAM,
};

Method parse_method(std::string_view name); // "if" | "pf" | "pf-am"
std::string method_name(Method m);

struct DetectionModel {
    Method method = Method::IntensityFlattening;
    double beta = 1.0; // backward Gaussian waist W = beta * hologram waist w
    GridSpec grid{};
};

/// beta > 0; IntensityFlattening requires beta >= 1; the two phase-flattening
/// baselines require beta == 1.
void validate(const DetectionModel& model);

enum class MaskKind { AmplitudeAndPhase, PhaseOnly };

MaskKind mask_kind_for(Method m);

/// Hologram transmission for a detection state.
///   AmplitudeAndPhase: conj(psi(r,phi)) / M with M = max |psi| (peak 1)
///   PhaseOnly:         exp(-i arg psi(r,phi)), 1 where psi = 0
/// M is located by a dense radial (and, for mixed-ell states, azimuthal)
/// scan over [0, r_max] with one parabolic refinement at the scan argmax.
class MaskFunction {
public:
    MaskFunction(SpatialState target, MaskKind kind, double r_max);

    std::complex<double> value(double r, double phi) const;
    double norm_factor() const { return norm_; } // M; 1.0 for PhaseOnly
    MaskKind kind() const { return kind_; }
    const SpatialState& target() const { return target_; }

private:
    SpatialState target_;
    MaskKind kind_;
    double norm_ = 1.0;
};

/// Unit-L2-norm backward Gaussian field sqrt(2/pi) (1/W) exp(-r^2/W^2).
double backward_gaussian(double W, double r);

/// c = iint conj(G_W) mask_detector psi_input r dr dphi, with W = beta * w.
/// Input and detector must share the hologram waist. The mask kind follows
/// the model method.
std::complex<double> coupling_amplitude(const SpatialState& input,
                                        const SpatialState& detector,
                                        const DetectionModel& model);

/// |coupling_amplitude|^2, a coupling efficiency in [0, 1] that includes
/// mask loss and mode mismatch.
double detection_probability(const SpatialState& input,
                             const SpatialState& detector,
                             const DetectionModel& model);

namespace detail {

/// Field values on the quadrature grid, row-major [i_radial * n_az + i_az].
struct SampledField {
    int nr = 0;
    int na = 0;
    std::vector<std::complex<double>> v;
    std::complex<double>& at(int ir, int ia) { return v[static_cast<size_t>(ir) * na + ia]; }
    const std::complex<double>& at(int ir, int ia) const { return v[static_cast<size_t>(ir) * na + ia]; }
};

SampledField sample_state(const SpatialState& s, const QuadratureGrid& g);
SampledField sample_mask(const MaskFunction& m, const QuadratureGrid& g);

/// Fixed-order coupling sum shared by the scalar and matrix paths.
std::complex<double> coupling_sum(const SampledField& input,
                                  const SampledField& mask,
                                  const std::vector<double>& gauss_wr,
                                  const QuadratureGrid& g);

} // namespace detail

} // namespace lgsim
