#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lgsim/errors.hpp"
#include "lgsim/modes.hpp"
#include "lgsim/quadrature.hpp"

using namespace lgsim;

namespace {
const FieldFn kOne = [](double, double) { return std::complex<double>{1.0, 0.0}; };
FieldFn mode_fn(ModeIndex m, double w = 1.0) {
    return [m, w](double r, double phi) { return lg_field(m, w, r, phi); };
}
} // namespace

TEST_CASE("grid spec validation") {
    CHECK_NOTHROW(build_grid({16, 8, 1.0}));
    CHECK_THROWS_AS(build_grid({15, 8, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(build_grid({16, 6, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(build_grid({16, 9, 1.0}), std::invalid_argument); // odd ring
    CHECK_THROWS_AS(build_grid({16, 8, 0.0}), std::invalid_argument);
}

TEST_CASE("radial weights integrate r dr exactly") {
    const auto g = build_grid({64, 128, 5.0});
    double sum = 0.0;
    for (const double w : g.wr) sum += w;
    CHECK(sum == doctest::Approx(12.5).epsilon(1e-13)); // r_max^2 / 2
}

TEST_CASE("constants and gaussians integrate to closed forms") {
    const auto g = build_grid({64, 128, 5.0});
    const double pi = std::numbers::pi;
    CHECK(overlap(kOne, kOne, g).real() == doctest::Approx(pi * 25.0).epsilon(1e-11));

    const FieldFn gauss = [](double r, double) {
        return std::complex<double>{std::exp(-r * r), 0.0};
    };
    // int_0^5 e^{-r^2} r dr * 2 pi = pi (1 - e^{-25})
    CHECK(overlap(kOne, gauss, g).real() ==
          doctest::Approx(pi * (1.0 - std::exp(-25.0))).epsilon(1e-11));
}

TEST_CASE("LG overlaps") {
    const auto g = build_grid({256, 32, 8.0});
    CHECK(std::abs(overlap(mode_fn({0, 0}), mode_fn({0, 0}), g) - 1.0) < 1e-8);
    CHECK(std::abs(overlap(mode_fn({1, 0}), mode_fn({2, 0}), g)) < 1e-10);
    CHECK(std::abs(overlap(mode_fn({3, 3}), mode_fn({3, 3}), g) - 1.0) < 1e-8);

    // Gaussian SMF factor breaks radial orthogonality: <01|00>_gauss = 2/9
    const RadialFn smf = [](double r) { return std::exp(-r * r); };
    const auto v = overlap(mode_fn({0, 1}), mode_fn({0, 0}), smf, g);
    CHECK(v.real() == doctest::Approx(2.0 / 9.0).epsilon(1e-9));
    CHECK(std::abs(v.imag()) < 1e-14);
}

TEST_CASE("conjugate symmetry is exact") {
    const auto g = build_grid({32, 16, 6.0});
    const auto a = mode_fn({1, 1});
    const FieldFn b = [](double r, double phi) {
        return 0.6 * lg_field({1, 0}, 1.0, r, phi) +
               std::complex<double>{0.0, 0.8} * lg_field({3, 1}, 1.0, r, phi);
    };
    const auto ab = overlap(a, b, g);
    const auto ba = overlap(b, a, g);
    CHECK(ab == std::conj(ba));
}

TEST_CASE("linearity") {
    const auto g = build_grid({64, 16, 8.0});
    const auto a = mode_fn({0, 0});
    const auto b1 = mode_fn({0, 1});
    const auto b2 = mode_fn({0, 2});
    const std::complex<double> alpha{0.3, -1.1}, beta{-0.7, 0.2};
    const FieldFn combo = [&](double r, double phi) {
        return alpha * b1(r, phi) + beta * b2(r, phi);
    };
    const auto lhs = overlap(a, combo, g);
    const auto rhs = alpha * overlap(a, b1, g) + beta * overlap(a, b2, g);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
}

TEST_CASE("converged_overlap") {
    const RadialFn unit = [](double) { return 1.0; };
    const auto v = converged_overlap(mode_fn({0, 0}), mode_fn({0, 0}), unit, {64, 16, 8.0}, 1e-8);
    CHECK(std::abs(v - 1.0) < 1e-10);

    // aperture clipping: LG(0,7) barely fits in r_max = 1.5 w, and the value
    // itself is far from the full-plane norm
    CHECK_THROWS_AS(converged_overlap(mode_fn({0, 7}), mode_fn({0, 7}), unit, {16, 8, 1.5}, 1e-8),
                    NonConvergedError);
    const auto clipped =
        overlap(mode_fn({0, 7}), mode_fn({0, 7}), build_grid({512, 8, 1.5}));
    CHECK(std::abs(clipped.real() - 1.0) > 0.01);

    const auto v33 =
        converged_overlap(mode_fn({3, 3}), mode_fn({3, 3}), unit, {128, 32, 8.0}, 1e-8);
    CHECK(std::abs(v33 - 1.0) < 1e-8);
}

TEST_CASE("small Gram identity (orders N <= 4)") {
    const auto modes = enumerate_modes(4);
    const auto g = build_grid({128, default_azimuthal_samples(3), 8.0});
    for (size_t i = 0; i < modes.size(); ++i)
        for (size_t j = 0; j < modes.size(); ++j) {
            const auto v = overlap(mode_fn(modes[i]), mode_fn(modes[j]), g);
            const double expect = i == j ? 1.0 : 0.0;
            CHECK(std::abs(v - expect) < 1e-10);
        }
}

TEST_CASE("default azimuthal samples") {
    CHECK(default_azimuthal_samples(0) == 8);
    CHECK(default_azimuthal_samples(9) == 76);
}
