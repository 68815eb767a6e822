#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace lgsim {

/// Seedable RNG with a fully specified sequence. The engine is std::mt19937_64
/// (its output stream is pinned by the standard); bounded draws use rejection
/// sampling and unit doubles take the top 53 bits, so every draw is
/// bit-reproducible across platforms. std::uniform_int_distribution is
/// deliberately avoided: its mapping is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Unbiased draw from [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("Rng::below: bound must be > 0");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v;
        do {
            v = eng_();
        } while (v >= limit);
        return v % bound;
    }

    /// Double in [0, 1).
    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Uniform d-subset of {0..n-1}, sorted, via partial Fisher-Yates.
    std::vector<int> subset(int n, int d) {
        if (d < 0 || d > n) throw std::invalid_argument("Rng::subset: need 0 <= d <= n");
        std::vector<int> pool(n);
        for (int i = 0; i < n; ++i) pool[i] = i;
        for (int i = 0; i < d; ++i) {
            const auto j = i + static_cast<int>(below(static_cast<std::uint64_t>(n - i)));
            std::swap(pool[i], pool[j]);
        }
        std::vector<int> out(pool.begin(), pool.begin() + d);
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    std::mt19937_64 eng_;
};

/// Deterministic per-task seed derivation: splitmix64 of (seed ^ index-salt).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace lgsim
