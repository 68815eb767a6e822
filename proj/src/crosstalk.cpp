#include "lgsim/crosstalk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lgsim/errors.hpp"
#include "lgsim/parallel.hpp"

namespace lgsim {

namespace {

double shared_waist(const std::vector<SpatialState>& states) {
    if (states.empty()) throw std::invalid_argument("crosstalk: empty state list");
    const double w = states.front().waist;
    for (const auto& s : states)
        if (s.waist != w)
            throw std::invalid_argument("crosstalk: states must share one waist");
    return w;
}

int max_abs_ell(const std::vector<SpatialState>& states) {
    int m = 0;
    for (const auto& s : states)
        for (const auto& mi : s.modes) m = std::max(m, std::abs(mi.ell));
    return m;
}

double visibility_of(const std::vector<double>& values, int d) {
    double diag = 0.0, total = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const double v = values[static_cast<size_t>(i) * d + j];
            total += v;
            if (i == j) diag += v;
        }
    if (total <= 0.0) throw DegenerateMatrixError("visibility: all crosstalk entries are zero");
    return diag / total;
}

} // namespace

CrosstalkMatrix::CrosstalkMatrix(std::vector<std::string> labels_in,
                                 std::vector<double> values_in)
    : labels(std::move(labels_in)), values(std::move(values_in)) {
    const auto d = labels.size();
    if (values.size() != d * d)
        throw std::invalid_argument("CrosstalkMatrix: values size must be d*d");
    for (const double v : values)
        if (!(v >= 0.0) || v > 1.0 + 1e-12)
            throw std::invalid_argument("CrosstalkMatrix: entries must lie in [0, 1]");
}

std::string state_label(const SpatialState& s, int index) {
    if (s.dimension() == 1) return mode_token(s.modes.front());
    return "psi" + std::to_string(index);
}

CrosstalkMatrix crosstalk_matrix(const std::vector<SpatialState>& states,
                                 const DetectionModel& model, int workers) {
    validate(model);
    const double waist = shared_waist(states);
    const int d = static_cast<int>(states.size());

    std::vector<std::string> labels(d);
    for (int i = 0; i < d; ++i) labels[i] = state_label(states[i], i);
    {
        auto sorted = labels;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("crosstalk: states must be pairwise distinct");
    }

    const auto grid = build_grid(model.grid);
    const MaskKind kind = mask_kind_for(model.method);

    std::vector<detail::SampledField> fields(d), masks(d);
    parallel_for(static_cast<size_t>(d), workers, [&](size_t lo, size_t hi) {
        for (size_t i = lo; i < hi; ++i) {
            fields[i] = detail::sample_state(states[i], grid);
            masks[i] = detail::sample_mask(MaskFunction(states[i], kind, model.grid.r_max), grid);
        }
    });

    const double W = model.beta * waist;
    std::vector<double> gauss_wr(grid.n_radial());
    for (int i = 0; i < grid.n_radial(); ++i)
        gauss_wr[i] = backward_gaussian(W, grid.r[i]) * grid.wr[i];

    std::vector<double> values(static_cast<size_t>(d) * d);
    parallel_for(static_cast<size_t>(d) * d, workers, [&](size_t lo, size_t hi) {
        for (size_t k = lo; k < hi; ++k) {
            const auto i = k / d; // input
            const auto j = k % d; // detector
            values[k] = std::norm(detail::coupling_sum(fields[i], masks[j], gauss_wr, grid));
        }
    });

    CrosstalkMatrix m(std::move(labels), std::move(values));
    m.model = model;
    m.waist = waist;
    return m;
}

double visibility(const CrosstalkMatrix& m) {
    return visibility_of(m.values, m.dimension());
}

double visibility_subset(const CrosstalkMatrix& m, const std::vector<int>& subset) {
    const int d = m.dimension();
    if (subset.empty()) throw std::invalid_argument("visibility_subset: empty subset");
    for (size_t a = 0; a < subset.size(); ++a) {
        if (subset[a] < 0 || subset[a] >= d)
            throw std::invalid_argument("visibility_subset: index out of range");
        for (size_t b = a + 1; b < subset.size(); ++b)
            if (subset[a] == subset[b])
                throw std::invalid_argument("visibility_subset: duplicate index");
    }
    double diag = 0.0, total = 0.0;
    for (const int i : subset)
        for (const int j : subset) {
            total += m.at(i, j);
            if (i == j) diag += m.at(i, j);
        }
    if (total <= 0.0) throw DegenerateMatrixError("visibility_subset: zero submatrix");
    return diag / total;
}

double mean_efficiency(const CrosstalkMatrix& m) {
    const int d = m.dimension();
    double acc = 0.0;
    for (int i = 0; i < d; ++i) acc += m.at(i, i);
    return acc / d;
}

BetaScanner::BetaScanner(const std::vector<SpatialState>& states, MaskKind kind,
                         const GridSpec& grid_spec, int workers)
    : d_(static_cast<int>(states.size())), waist_(shared_waist(states)),
      grid_(build_grid(grid_spec)) {
    labels_.resize(d_);
    for (int i = 0; i < d_; ++i) labels_[i] = state_label(states[i], i);

    std::vector<detail::SampledField> fields(d_), masks(d_);
    parallel_for(static_cast<size_t>(d_), workers, [&](size_t lo, size_t hi) {
        for (size_t i = lo; i < hi; ++i) {
            fields[i] = detail::sample_state(states[i], grid_);
            masks[i] = detail::sample_mask(MaskFunction(states[i], kind, grid_spec.r_max), grid_);
        }
    });

    const int nr = grid_.n_radial();
    const int na = grid_.n_azimuthal();
    radial_table_.assign(static_cast<size_t>(d_) * d_, {});
    parallel_for(static_cast<size_t>(d_) * d_, workers, [&](size_t lo, size_t hi) {
        for (size_t k = lo; k < hi; ++k) {
            const auto i = k / d_;
            const auto j = k % d_;
            auto& table = radial_table_[k];
            table.resize(nr);
            for (int ir = 0; ir < nr; ++ir) {
                std::complex<double> ring{0.0, 0.0};
                for (int ia = 0; ia < na; ++ia)
                    ring += masks[j].at(ir, ia) * fields[i].at(ir, ia);
                table[ir] = ring * grid_.wphi;
            }
        }
    });
}

CrosstalkMatrix BetaScanner::matrix_at(double beta) const {
    const double W = beta * waist_;
    const int nr = grid_.n_radial();
    std::vector<double> gauss_wr(nr);
    for (int i = 0; i < nr; ++i)
        gauss_wr[i] = backward_gaussian(W, grid_.r[i]) * grid_.wr[i];
    std::vector<double> values(radial_table_.size());
    for (size_t k = 0; k < radial_table_.size(); ++k) {
        std::complex<double> c{0.0, 0.0};
        for (int ir = 0; ir < nr; ++ir) c += radial_table_[k][ir] * gauss_wr[ir];
        values[k] = std::norm(c);
    }
    CrosstalkMatrix m(labels_, std::move(values));
    m.waist = waist_;
    m.model.beta = beta;
    return m;
}

double BetaScanner::visibility_at(double beta) const {
    const double W = beta * waist_;
    const int nr = grid_.n_radial();
    std::vector<double> gauss_wr(nr);
    for (int i = 0; i < nr; ++i)
        gauss_wr[i] = backward_gaussian(W, grid_.r[i]) * grid_.wr[i];
    double diag = 0.0, total = 0.0;
    for (size_t k = 0; k < radial_table_.size(); ++k) {
        std::complex<double> c{0.0, 0.0};
        for (int ir = 0; ir < nr; ++ir) c += radial_table_[k][ir] * gauss_wr[ir];
        const double v = std::norm(c);
        total += v;
        if (k / d_ == k % d_) diag += v;
    }
    if (total <= 0.0) throw DegenerateMatrixError("visibility: all crosstalk entries are zero");
    return diag / total;
}

namespace {

TradeoffPoint tradeoff_at(const BetaScanner& scanner, double beta, double target) {
    const auto m = scanner.matrix_at(beta);
    TradeoffPoint pt;
    pt.dimension = scanner.dimension();
    pt.target_visibility = target;
    pt.beta_min = beta;
    pt.mean_efficiency = mean_efficiency(m);
    pt.achieved_visibility = visibility(m);
    return pt;
}

TradeoffPoint min_beta_core(const BetaScanner& scanner, double target,
                            std::pair<double, double> beta_range) {
    const auto [lo, hi] = beta_range;
    if (!(target > 0.0 && target < 1.0))
        throw std::invalid_argument("min_beta_for_visibility: target must be in (0, 1)");
    if (!(lo > 0.0 && hi > lo))
        throw std::invalid_argument("min_beta_for_visibility: bad beta range");

    if (scanner.dimension() == 1) return tradeoff_at(scanner, lo, target);

    // coarse pre-pass; the bisection assumes V nondecreasing in beta
    constexpr int kPrePass = 9;
    constexpr double kSlack = 1e-9;
    double prev = -1.0;
    for (int k = 0; k < kPrePass; ++k) {
        const double beta = lo + (hi - lo) * k / (kPrePass - 1);
        const double v = scanner.visibility_at(beta);
        if (v < prev - kSlack)
            throw NonMonotoneError("visibility is not monotone in beta over the search range");
        prev = v;
    }

    if (scanner.visibility_at(hi) < target)
        throw UnachievableError("target visibility unreachable within the beta range");
    if (scanner.visibility_at(lo) >= target) return tradeoff_at(scanner, lo, target);

    double a = lo, b = hi;
    while ((b - a) > 1e-3 * b) {
        const double mid = 0.5 * (a + b);
        if (scanner.visibility_at(mid) >= target)
            b = mid;
        else
            a = mid;
    }
    return tradeoff_at(scanner, b, target);
}

} // namespace

TradeoffPoint min_beta_for_visibility(const std::vector<SpatialState>& states,
                                      double target,
                                      std::pair<double, double> beta_range,
                                      const GridSpec& grid, int workers) {
    const BetaScanner scanner(states, MaskKind::AmplitudeAndPhase, grid, workers);
    return min_beta_core(scanner, target, beta_range);
}

std::vector<TradeoffPoint> efficiency_vs_dimension_scan(
    int d_max, const std::vector<double>& targets, double waist, int n_radial,
    std::pair<double, double> beta_range, int workers) {
    if (d_max < 2) throw std::invalid_argument("efficiency_vs_dimension_scan: d_max must be >= 2");
    if (targets.empty())
        throw std::invalid_argument("efficiency_vs_dimension_scan: empty target list");
    std::vector<TradeoffPoint> out;
    for (int d = 2; d <= d_max; ++d) {
        const auto states = radial_states(0, d - 1, waist);
        GridSpec spec = default_grid(waist, 0);
        spec.n_radial = n_radial;
        const BetaScanner scanner(states, MaskKind::AmplitudeAndPhase, spec, workers);
        for (const double target : targets)
            out.push_back(min_beta_core(scanner, target, beta_range));
    }
    return out;
}

} // namespace lgsim
