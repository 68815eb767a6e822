#include "lgsim/detection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lgsim {

namespace {

constexpr int kScanRadial1D = 4096;  // +1 endpoint samples, includes r = 0
constexpr int kScanRadial2D = 512;
constexpr int kScanAzimuthal2D = 128;

// One parabolic step through three samples at uniform spacing h around x1;
// returns the vertex clamped to the bracket.
double parabolic_vertex(double x1, double h, double f0, double f1, double f2) {
    const double denom = f0 - 2.0 * f1 + f2;
    if (denom >= 0.0) return x1; // not a local max of the fit
    double delta = 0.5 * (f0 - f2) / denom;
    delta = std::clamp(delta, -1.0, 1.0);
    return x1 + delta * h;
}

// Peak |psi| over the disc r <= r_max. The scan grid always contains r = 0,
// where every pure radial-family mode attains its max.
double peak_abs(const SpatialState& s, double r_max) {
    const bool radial_only = s.single_azimuthal();
    const int nr = radial_only ? kScanRadial1D : kScanRadial2D;
    const int na = radial_only ? 1 : kScanAzimuthal2D;
    const double dr = r_max / nr;
    const double dphi = 2.0 * std::numbers::pi / na;

    double best = -1.0;
    int best_ir = 0, best_ia = 0;
    for (int ir = 0; ir <= nr; ++ir) {
        const double r = ir * dr;
        for (int ia = 0; ia < na; ++ia) {
            const double v = std::abs(s.field(r, ia * dphi));
            if (v > best) {
                best = v;
                best_ir = ir;
                best_ia = ia;
            }
        }
    }

    const double phi0 = best_ia * dphi;
    double r_star = best_ir * dr;
    if (best_ir > 0 && best_ir < nr) {
        const double f0 = std::abs(s.field((best_ir - 1) * dr, phi0));
        const double f2 = std::abs(s.field((best_ir + 1) * dr, phi0));
        r_star = parabolic_vertex(best_ir * dr, dr, f0, best, f2);
    }
    best = std::max(best, std::abs(s.field(r_star, phi0)));
    if (na > 1) {
        const double fm = std::abs(s.field(r_star, phi0 - dphi));
        const double fp = std::abs(s.field(r_star, phi0 + dphi));
        const double phi_star = parabolic_vertex(phi0, dphi, fm, std::abs(s.field(r_star, phi0)), fp);
        best = std::max(best, std::abs(s.field(r_star, phi_star)));
    }
    return best;
}

} // namespace

Method parse_method(std::string_view name) {
    if (name == "if") return Method::IntensityFlattening;
    if (name == "pf") return Method::PhaseFlattening;
    if (name == "pf-am") return Method::PhaseFlatteningAM;
    throw std::invalid_argument("unknown detection method '" + std::string(name) +
                                "' (expected if, pf, or pf-am)");
}

std::string method_name(Method m) {
    switch (m) {
        case Method::IntensityFlattening: return "if";
        case Method::PhaseFlattening: return "pf";
        case Method::PhaseFlatteningAM: return "pf-am";
    }
    return "?";
}

void validate(const DetectionModel& model) {
    validate(model.grid);
    if (!(model.beta > 0.0))
        throw std::invalid_argument("DetectionModel: beta must be > 0");
    if (model.method == Method::IntensityFlattening && model.beta < 1.0)
        throw std::invalid_argument("DetectionModel: IntensityFlattening requires beta >= 1");
    if (model.method != Method::IntensityFlattening && model.beta != 1.0)
        throw std::invalid_argument("DetectionModel: phase-flattening methods fix beta = 1");
}

MaskKind mask_kind_for(Method m) {
    return m == Method::PhaseFlattening ? MaskKind::PhaseOnly : MaskKind::AmplitudeAndPhase;
}

MaskFunction::MaskFunction(SpatialState target, MaskKind kind, double r_max)
    : target_(std::move(target)), kind_(kind) {
    if (!(r_max > 0.0)) throw std::invalid_argument("MaskFunction: r_max must be > 0");
    if (kind_ == MaskKind::AmplitudeAndPhase) {
        norm_ = peak_abs(target_, r_max);
        if (!(norm_ > 0.0)) throw std::invalid_argument("MaskFunction: target field vanishes");
    }
}

std::complex<double> MaskFunction::value(double r, double phi) const {
    const auto psi = target_.field(r, phi);
    if (kind_ == MaskKind::AmplitudeAndPhase) return std::conj(psi) / norm_;
    const double mag = std::abs(psi);
    if (mag == 0.0) return {1.0, 0.0};
    return std::conj(psi) / mag; // exp(-i arg psi)
}

double backward_gaussian(double W, double r) {
    return std::sqrt(2.0 / std::numbers::pi) / W * std::exp(-r * r / (W * W));
}

namespace detail {

SampledField sample_state(const SpatialState& s, const QuadratureGrid& g) {
    SampledField f;
    f.nr = g.n_radial();
    f.na = g.n_azimuthal();
    f.v.resize(static_cast<size_t>(f.nr) * f.na);
    // Per-mode radial profiles and azimuthal phasors; the superposition is
    // assembled per ring so each LG evaluation happens once per radius.
    const int nm = s.dimension();
    std::vector<double> radial(nm);
    std::vector<std::complex<double>> phasor(static_cast<size_t>(nm) * f.na);
    for (int m = 0; m < nm; ++m)
        for (int ia = 0; ia < f.na; ++ia)
            phasor[static_cast<size_t>(m) * f.na + ia] =
                std::polar(1.0, static_cast<double>(s.modes[m].ell) * g.phi[ia]);
    for (int ir = 0; ir < f.nr; ++ir) {
        for (int m = 0; m < nm; ++m) radial[m] = lg_radial(s.modes[m], s.waist, g.r[ir]);
        for (int ia = 0; ia < f.na; ++ia) {
            std::complex<double> acc{0.0, 0.0};
            for (int m = 0; m < nm; ++m)
                acc += s.coeffs[m] * radial[m] * phasor[static_cast<size_t>(m) * f.na + ia];
            f.at(ir, ia) = acc;
        }
    }
    return f;
}

SampledField sample_mask(const MaskFunction& m, const QuadratureGrid& g) {
    SampledField f = sample_state(m.target(), g);
    if (m.kind() == MaskKind::AmplitudeAndPhase) {
        const double inv = 1.0 / m.norm_factor();
        for (auto& v : f.v) v = std::conj(v) * inv;
    } else {
        for (auto& v : f.v) {
            const double mag = std::abs(v);
            v = mag == 0.0 ? std::complex<double>{1.0, 0.0} : std::conj(v) / mag;
        }
    }
    return f;
}

std::complex<double> coupling_sum(const SampledField& input, const SampledField& mask,
                                  const std::vector<double>& gauss_wr,
                                  const QuadratureGrid& g) {
    std::complex<double> total{0.0, 0.0};
    for (int ir = 0; ir < g.n_radial(); ++ir) {
        std::complex<double> ring{0.0, 0.0};
        for (int ia = 0; ia < g.n_azimuthal(); ++ia)
            ring += mask.at(ir, ia) * input.at(ir, ia);
        total += ring * gauss_wr[ir];
    }
    return total * g.wphi;
}

} // namespace detail

std::complex<double> coupling_amplitude(const SpatialState& input,
                                        const SpatialState& detector,
                                        const DetectionModel& model) {
    validate(model);
    if (input.waist != detector.waist)
        throw std::invalid_argument("coupling_amplitude: input and detector must share one waist");
    const auto grid = build_grid(model.grid);
    const MaskFunction mask(detector, mask_kind_for(model.method), model.grid.r_max);
    const auto fin = detail::sample_state(input, grid);
    const auto fmask = detail::sample_mask(mask, grid);
    const double W = model.beta * input.waist;
    std::vector<double> gauss_wr(grid.n_radial());
    for (int i = 0; i < grid.n_radial(); ++i)
        gauss_wr[i] = backward_gaussian(W, grid.r[i]) * grid.wr[i];
    return detail::coupling_sum(fin, fmask, gauss_wr, grid);
}

double detection_probability(const SpatialState& input, const SpatialState& detector,
                             const DetectionModel& model) {
    return std::norm(coupling_amplitude(input, detector, model));
}

} // namespace lgsim
