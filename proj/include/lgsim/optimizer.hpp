#pragma once

#include <cstdint>
#include <vector>

#include "lgsim/crosstalk.hpp"
#include "lgsim/qkd.hpp"
#include "lgsim/rng.hpp"

namespace lgsim {

struct GAParams {
    int population = 50;
    int generations = 200;
    double mutation_rate = 0.3;
    int elite_count = 2;
    std::uint64_t rng_seed = 1;
};

void validate(const GAParams& p);

struct SubsetStats {
    double mean = 0.0;
    double stddev = 0.0; // sample stddev (n-1); 0 when n < 2
    double max = 0.0;
    std::vector<int> argmax;
    int duplicate_samples = 0; // how many draws repeated an earlier subset
};

/// Key-rate statistics over n_samples uniform d-subsets. Samples are drawn
/// independently (duplicates possible and counted); with `distinct` set,
/// duplicates are redrawn so all samples are different subsets.
SubsetStats random_subset_stats(const CrosstalkMatrix& m, int d, int n_samples,
                                std::uint64_t seed, bool distinct = false);

struct GaTracePoint {
    int generation = 0;
    double best = 0.0;
    double mean = 0.0;
};

struct GaResult {
    std::vector<int> best;
    double rate_bits = 0.0;
    std::vector<GaTracePoint> trace;
};

/// Generational GA over d-subsets, fitness = secret key rate of the subset.
/// Tournament of size 2, crossover = union then uniform down-sample to d,
/// swap mutation with probability mutation_rate per child, elitism keeps
/// elite_count best. Genome ops consume the RNG in one fixed sequential
/// order; fitness evaluations are pure, so worker count never changes the
/// result.
GaResult ga_optimize(const CrosstalkMatrix& m, int d, const GAParams& params,
                     int workers = 1);

struct SearchResult {
    std::vector<int> best;
    double rate_bits = 0.0;
};

/// Oracle: enumerates all C(n,d) subsets in lexicographic order; ties keep
/// the lexicographically smallest subset. Throws TooManySubsetsError when
/// C(n,d) exceeds `cap`.
SearchResult exhaustive_search(const CrosstalkMatrix& m, int d,
                               std::uint64_t cap = 1000000);

/// C(n,d) saturating at 2^64-1.
std::uint64_t binomial(int n, int d);

} // namespace lgsim
