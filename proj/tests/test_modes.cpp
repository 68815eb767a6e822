#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lgsim/modes.hpp"
#include "lgsim/quadrature.hpp"

using namespace lgsim;

namespace {

// independent closed form: L_p^a(x) = sum_k (-1)^k C(p+a, p-k) x^k / k!
double laguerre_closed_form(int p, int a, double x) {
    const auto binom = [](int n, int k) {
        double acc = 1.0;
        for (int i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
        return acc;
    };
    double sum = 0.0, xk = 1.0, kfact = 1.0;
    for (int k = 0; k <= p; ++k) {
        if (k > 0) {
            xk *= x;
            kfact *= k;
        }
        sum += (k % 2 ? -1.0 : 1.0) * binom(p + a, p - k) * xk / kfact;
    }
    return sum;
}

} // namespace

TEST_CASE("laguerre_assoc basics") {
    CHECK(laguerre_assoc(0, 0, 3.7) == 1.0);
    CHECK(laguerre_assoc(1, 0, 2.0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(laguerre_assoc(3, 2, 1.5) == doctest::Approx(0.0625).epsilon(1e-13)); // = 1/16
    CHECK(laguerre_assoc(3, 2, 1.5) ==
          doctest::Approx(laguerre_closed_form(3, 2, 1.5)).epsilon(1e-13));
    for (int p = 0; p <= 9; ++p)
        for (int a = 0; a <= 6; a += 2)
            for (double x : {0.0, 0.3, 1.7, 4.2, 9.5})
                CHECK(laguerre_assoc(p, a, x) ==
                      doctest::Approx(laguerre_closed_form(p, a, x)).epsilon(1e-10));
    CHECK_THROWS_AS(laguerre_assoc(-1, 0, 1.0), std::invalid_argument);
}

TEST_CASE("lg_field values") {
    // Gaussian peak forced by the unit L2 norm
    CHECK(lg_field({0, 0}, 1.0, 0.0, 0.0).real() ==
          doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-14));
    // vortex null at the origin
    CHECK(std::abs(lg_field({2, 0}, 1.0, 0.0, 0.3)) == 0.0);

    // closed-form check at (ell=1, p=1, w=1, r=0.8, phi=pi/4):
    // sqrt(2*1!/(pi*2!)) * sqrt(2)*0.8 * L_1^1(1.28) * exp(-0.64) * e^{i pi/4}
    const double radial = std::sqrt(1.0 / std::numbers::pi) * std::numbers::sqrt2 * 0.8 *
                          (2.0 - 1.28) * std::exp(-0.64);
    const auto v = lg_field({1, 1}, 1.0, 0.8, std::numbers::pi / 4);
    CHECK(v.real() == doctest::Approx(radial / std::numbers::sqrt2).epsilon(1e-13));
    CHECK(v.imag() == doctest::Approx(radial / std::numbers::sqrt2).epsilon(1e-13));
    CHECK(radial == doctest::Approx(0.2423338468832252).epsilon(1e-13));
}

TEST_CASE("lg_field conjugation symmetry") {
    for (int ell = 1; ell <= 5; ++ell)
        for (int p = 0; p <= 3; ++p)
            for (double r : {0.2, 0.9, 2.3})
                for (double phi : {0.1, 1.9, 4.4}) {
                    const auto plus = lg_field({ell, p}, 1.3, r, phi);
                    const auto minus = lg_field({-ell, p}, 1.3, r, phi);
                    CHECK(minus.real() == doctest::Approx(plus.real()).epsilon(1e-14));
                    CHECK(minus.imag() == doctest::Approx(-plus.imag()).epsilon(1e-14));
                }
}

TEST_CASE("mode_order") {
    CHECK(mode_order({0, 0}) == 1);
    CHECK(mode_order({3, 2}) == 8);
    CHECK(mode_order({-9, 0}) == 10);
}

TEST_CASE("enumerate_modes") {
    CHECK(enumerate_modes(1) == std::vector<ModeIndex>{{0, 0}});
    CHECK(enumerate_modes(10).size() == 55);
    const std::vector<ModeIndex> expect3 = {{0, 0}, {-1, 0}, {1, 0}, {-2, 0}, {0, 1}, {2, 0}};
    CHECK(enumerate_modes(3) == expect3);

    for (int n : {2, 5, 10}) {
        const auto modes = enumerate_modes(n);
        CHECK(static_cast<int>(modes.size()) == n * (n + 1) / 2);
        for (size_t i = 0; i < modes.size(); ++i) {
            CHECK(mode_order(modes[i]) <= n);
            for (size_t j = i + 1; j < modes.size(); ++j) CHECK(modes[i] != modes[j]);
        }
    }
}

TEST_CASE("mode tokens") {
    CHECK(mode_token({-2, 1}) == "l-2p1");
    CHECK(parse_mode_token("l-2p1") == ModeIndex{-2, 1});
    for (const auto& m : enumerate_modes(6)) CHECK(parse_mode_token(mode_token(m)) == m);
    CHECK_THROWS_AS(parse_mode_token("x1p2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_mode_token("l1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_mode_token("l1p-2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_mode_token("l1p2junk"), std::invalid_argument);
}

TEST_CASE("SpatialState validation") {
    CHECK_THROWS_AS(SpatialState({{0, 0}}, {{0.5, 0.0}}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(SpatialState({{0, 0}, {0, 0}},
                                 {{std::numbers::sqrt2 / 2, 0.0}, {std::numbers::sqrt2 / 2, 0.0}},
                                 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(SpatialState({{0, 0}}, {{1.0, 0.0}}, -1.0), std::invalid_argument);

    const double s = 1.0 / std::numbers::sqrt2;
    const SpatialState st({{0, 0}, {1, 0}}, {{s, 0.0}, {0.0, s}}, 1.0);
    const auto expect = s * lg_field({0, 0}, 1.0, 0.7, 0.2) +
                        std::complex<double>{0.0, s} * lg_field({1, 0}, 1.0, 0.7, 0.2);
    CHECK(std::abs(st.field(0.7, 0.2) - expect) < 1e-15);
    CHECK(st.single_azimuthal() == false);
    CHECK(single_mode_state({0, 3}, 1.0).single_azimuthal());
}

TEST_CASE("unit norm of every mode with N <= 10") {
    const GridSpec spec{256, default_azimuthal_samples(9), 8.0};
    const auto grid = build_grid(spec);
    for (const auto& m : enumerate_modes(10)) {
        const auto f = [&](double r, double phi) { return lg_field(m, 1.0, r, phi); };
        CHECK(std::abs(overlap(f, f, grid) - 1.0) < 1e-8);
    }
}
