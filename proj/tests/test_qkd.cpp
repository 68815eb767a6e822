#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lgsim/errors.hpp"
#include "lgsim/qkd.hpp"

using namespace lgsim;

TEST_CASE("entropy limits and frozen values") {
    CHECK(entropy_d(0.0, 2) == 0.0);
    CHECK(entropy_d(0.0, 30) == 0.0);
    CHECK(entropy_d(0.5, 2) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(entropy_d(1.0, 2) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(entropy_d(1.0, 5) == doctest::Approx(2.0).epsilon(1e-14)); // log2(4)
    // high-precision references
    CHECK(entropy_d(0.032, 30) == doctest::Approx(0.3597800628243619).epsilon(1e-12));
    CHECK(entropy_d(0.05, 4) == doctest::Approx(0.3656450821520139).epsilon(1e-12));
    CHECK_THROWS_AS(entropy_d(-0.1, 4), std::invalid_argument);
    CHECK_THROWS_AS(entropy_d(0.1, 1), std::invalid_argument);
}

TEST_CASE("entropy shape") {
    for (const int d : {2, 5, 30}) {
        const double xmax = (d - 1.0) / d;
        CHECK(entropy_d(xmax, d) ==
              doctest::Approx(std::log2(static_cast<double>(d))).epsilon(1e-12));
        // increasing up to the maximum
        double prev = -1.0;
        for (int k = 0; k <= 20; ++k) {
            const double h = entropy_d(xmax * k / 20.0, d);
            CHECK(h >= prev - 1e-12);
            prev = h;
        }
    }
}

TEST_CASE("secret key rate") {
    CHECK(secret_key_rate(2, 0.0).rate_bits == 1.0);
    CHECK(secret_key_rate(30, 0.032).rate_bits == doctest::Approx(4.19).epsilon(0.0024)); // +-0.01
    CHECK(secret_key_rate(30, 0.032).rate_bits ==
          doctest::Approx(4.187330469959795).epsilon(1e-12));
    CHECK(secret_key_rate(4, 0.05).rate_bits == doctest::Approx(1.2687098356959721).epsilon(1e-12));

    for (int d = 2; d <= 64; ++d)
        CHECK(secret_key_rate(d, 0.0).rate_bits == std::log2(static_cast<double>(d)));

    // strictly decreasing in e_b up to the entropy maximum
    for (const int d : {2, 8, 30}) {
        const double xmax = (d - 1.0) / d;
        double prev = 1e300;
        for (int k = 0; k <= 25; ++k) {
            const double r = secret_key_rate(d, xmax * k / 25.0).rate_bits;
            CHECK(r < prev);
            prev = r;
        }
    }

    // never exceeds log2(d)
    for (const int d : {2, 7, 30})
        for (int k = 0; k <= 10; ++k)
            CHECK(secret_key_rate(d, k / 10.0).rate_bits <=
                  std::log2(static_cast<double>(d)) + 1e-12);
}

TEST_CASE("qber from crosstalk") {
    CrosstalkMatrix ident({"a", "b", "c", "d"},
                          {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1});
    CHECK(qber_from_crosstalk(ident, {0, 1, 2}) == 0.0);

    std::vector<double> uniform(25, 0.2);
    CrosstalkMatrix uni({"0", "1", "2", "3", "4"}, std::move(uniform));
    CHECK(qber_from_crosstalk(uni, {0, 1, 2, 3, 4}) == doctest::Approx(0.8).epsilon(1e-15));

    CHECK_THROWS_AS(qber_from_crosstalk(ident, {0}), std::invalid_argument);
    CHECK_THROWS_AS(qber_from_crosstalk(ident, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(qber_from_crosstalk(ident, {0, 7}), std::invalid_argument);
}

TEST_CASE("paper anchor: a 96.8% visibility 30-subset gives 4.19 bits") {
    // 31 modes; subset {0..29} has visibility exactly 0.968
    const int n = 31;
    std::vector<std::string> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = "m" + std::to_string(i);
    std::vector<double> values(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < 30; ++i) {
        values[static_cast<size_t>(i) * n + i] = 0.968;
        values[static_cast<size_t>(i) * n + (i + 1) % 30] += 0.032;
    }
    values[static_cast<size_t>(30) * n + 30] = 1.0;
    CrosstalkMatrix m(std::move(labels), std::move(values));

    std::vector<int> subset(30);
    for (int i = 0; i < 30; ++i) subset[i] = i;
    CHECK(qber_from_crosstalk(m, subset) == doctest::Approx(0.032).epsilon(1e-12));
    const auto key = key_rate_for_subset(m, subset);
    CHECK(key.dimension == 30);
    CHECK(key.rate_bits == doctest::Approx(4.187330469959795).epsilon(1e-9));
}
