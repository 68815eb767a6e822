#include "lgsim/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "lgsim/errors.hpp"
#include "lgsim/parallel.hpp"

namespace lgsim {

namespace {

double fitness(const CrosstalkMatrix& m, const std::vector<int>& subset) {
    return key_rate_for_subset(m, subset).rate_bits;
}

void check_subset_dims(const CrosstalkMatrix& m, int d) {
    if (d < 2 || d > m.dimension())
        throw std::invalid_argument("subset dimension must satisfy 2 <= d <= matrix dimension");
}

} // namespace

std::uint64_t binomial(int n, int d) {
    if (d < 0 || d > n) return 0;
    d = std::min(d, n - d);
    std::uint64_t acc = 1;
    for (int k = 1; k <= d; ++k) {
        const std::uint64_t num = static_cast<std::uint64_t>(n - d + k);
        if (acc > UINT64_MAX / num) return UINT64_MAX; // saturate
        acc = acc * num / k;
    }
    return acc;
}

void validate(const GAParams& p) {
    if (p.population < 1) throw std::invalid_argument("GAParams: population must be >= 1");
    if (p.generations < 1) throw std::invalid_argument("GAParams: generations must be >= 1");
    if (!(p.mutation_rate > 0.0 && p.mutation_rate < 1.0))
        throw std::invalid_argument("GAParams: mutation_rate must be in (0, 1)");
    if (p.elite_count < 0 || p.elite_count >= p.population)
        throw std::invalid_argument("GAParams: need 0 <= elite_count < population");
}

SubsetStats random_subset_stats(const CrosstalkMatrix& m, int d, int n_samples,
                                std::uint64_t seed, bool distinct) {
    check_subset_dims(m, d);
    if (n_samples < 1) throw std::invalid_argument("random_subset_stats: n_samples must be >= 1");
    if (distinct && binomial(m.dimension(), d) < static_cast<std::uint64_t>(n_samples))
        throw std::invalid_argument(
            "random_subset_stats: fewer distinct subsets than requested samples");

    Rng rng(seed);
    SubsetStats out;
    std::set<std::vector<int>> seen;
    double sum = 0.0, sum2 = 0.0;
    out.max = -1e300;
    for (int s = 0; s < n_samples; ++s) {
        auto subset = rng.subset(m.dimension(), d);
        if (distinct) {
            while (seen.count(subset)) subset = rng.subset(m.dimension(), d);
            seen.insert(subset);
        } else if (!seen.insert(subset).second) {
            ++out.duplicate_samples;
        }
        const double rate = fitness(m, subset);
        sum += rate;
        sum2 += rate * rate;
        if (rate > out.max) {
            out.max = rate;
            out.argmax = std::move(subset);
        }
    }
    out.mean = sum / n_samples;
    if (n_samples > 1) {
        const double var = (sum2 - sum * sum / n_samples) / (n_samples - 1);
        out.stddev = var > 0.0 ? std::sqrt(var) : 0.0;
    }
    return out;
}

GaResult ga_optimize(const CrosstalkMatrix& m, int d, const GAParams& params, int workers) {
    check_subset_dims(m, d);
    validate(params);
    const int n = m.dimension();
    Rng rng(params.rng_seed);

    std::vector<std::vector<int>> pop(params.population);
    for (auto& g : pop) g = rng.subset(n, d);

    std::vector<double> fit(pop.size());
    const auto evaluate = [&](const std::vector<std::vector<int>>& genomes,
                              std::vector<double>& scores) {
        scores.resize(genomes.size());
        parallel_for(genomes.size(), workers, [&](size_t lo, size_t hi) {
            for (size_t i = lo; i < hi; ++i) scores[i] = fitness(m, genomes[i]);
        });
    };
    evaluate(pop, fit);

    GaResult result;
    result.rate_bits = -1e300;
    const auto record_best = [&](int generation) {
        double best = -1e300, sum = 0.0;
        int best_i = 0;
        for (size_t i = 0; i < fit.size(); ++i) {
            sum += fit[i];
            if (fit[i] > best) {
                best = fit[i];
                best_i = static_cast<int>(i);
            }
        }
        if (best > result.rate_bits) {
            result.rate_bits = best;
            result.best = pop[best_i];
        }
        result.trace.push_back({generation, result.rate_bits, sum / static_cast<double>(fit.size())});
    };
    record_best(0);

    // index order sorted by fitness desc, genome lex asc on ties: fixes the
    // elite selection deterministically
    std::vector<int> order(pop.size());
    const auto sort_order = [&] {
        for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (fit[a] != fit[b]) return fit[a] > fit[b];
            return pop[a] < pop[b];
        });
    };

    const auto tournament = [&]() -> int {
        const auto a = static_cast<int>(rng.below(pop.size()));
        const auto b = static_cast<int>(rng.below(pop.size()));
        if (fit[a] != fit[b]) return fit[a] > fit[b] ? a : b;
        return pop[a] <= pop[b] ? a : b;
    };

    for (int gen = 1; gen <= params.generations; ++gen) {
        sort_order();
        std::vector<std::vector<int>> next;
        next.reserve(pop.size());
        for (int e = 0; e < params.elite_count; ++e) next.push_back(pop[order[e]]);

        while (next.size() < pop.size()) {
            const auto& pa = pop[tournament()];
            const auto& pb = pop[tournament()];
            // union, then uniform down-sample back to d members
            std::vector<int> u;
            std::set_union(pa.begin(), pa.end(), pb.begin(), pb.end(), std::back_inserter(u));
            std::vector<int> child;
            if (static_cast<int>(u.size()) == d) {
                child = std::move(u);
            } else {
                for (int i = 0; i < d; ++i) {
                    const auto j = i + static_cast<int>(rng.below(u.size() - i));
                    std::swap(u[i], u[j]);
                }
                child.assign(u.begin(), u.begin() + d);
                std::sort(child.begin(), child.end());
            }
            if (rng.unit() < params.mutation_rate) {
                // swap one member for a uniformly random non-member
                const auto victim = static_cast<int>(rng.below(child.size()));
                auto pick = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - d)));
                int candidate = -1;
                for (int v = 0, skipped = 0; v < n; ++v) {
                    if (std::binary_search(child.begin(), child.end(), v)) continue;
                    if (skipped++ == pick) {
                        candidate = v;
                        break;
                    }
                }
                child[victim] = candidate;
                std::sort(child.begin(), child.end());
            }
            next.push_back(std::move(child));
        }
        pop = std::move(next);
        evaluate(pop, fit);
        record_best(gen);
    }
    return result;
}

SearchResult exhaustive_search(const CrosstalkMatrix& m, int d, std::uint64_t cap) {
    check_subset_dims(m, d);
    const int n = m.dimension();
    const auto count = binomial(n, d);
    if (count > cap)
        throw TooManySubsetsError("exhaustive_search: " + std::to_string(count) +
                                  " subsets exceed the cap of " + std::to_string(cap));

    std::vector<int> subset(d);
    for (int i = 0; i < d; ++i) subset[i] = i;
    SearchResult best;
    best.rate_bits = -1e300;
    while (true) {
        const double rate = fitness(m, subset);
        if (rate > best.rate_bits) { // strict: lexicographic enumeration keeps first tie
            best.rate_bits = rate;
            best.best = subset;
        }
        // next lexicographic combination
        int i = d - 1;
        while (i >= 0 && subset[i] == n - d + i) --i;
        if (i < 0) break;
        ++subset[i];
        for (int j = i + 1; j < d; ++j) subset[j] = subset[j - 1] + 1;
    }
    return best;
}

} // namespace lgsim
