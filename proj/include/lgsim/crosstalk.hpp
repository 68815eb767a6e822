#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lgsim/detection.hpp"
#include "lgsim/modes.hpp"

namespace lgsim {

/// d x d matrix of detection probabilities; C(i,j) is the probability of
/// detecting state j given input i. Stored probabilities are never
/// display-normalized.
struct CrosstalkMatrix {
    std::vector<std::string> labels;
    std::vector<double> values; // row-major d*d
    DetectionModel model{};
    double waist = 1.0;

    CrosstalkMatrix() = default;
    CrosstalkMatrix(std::vector<std::string> labels, std::vector<double> values);

    int dimension() const { return static_cast<int>(labels.size()); }
    double at(int i, int j) const { return values[static_cast<size_t>(i) * labels.size() + j]; }
    double& at(int i, int j) { return values[static_cast<size_t>(i) * labels.size() + j]; }
};

std::string state_label(const SpatialState& s, int index);

CrosstalkMatrix crosstalk_matrix(const std::vector<SpatialState>& states,
                                 const DetectionModel& model, int workers = 1);

/// V = sum_i C_ii / sum_ij C_ij. Throws DegenerateMatrixError on zero total.
double visibility(const CrosstalkMatrix& m);

/// Visibility of the submatrix restricted to `subset` rows and columns.
double visibility_subset(const CrosstalkMatrix& m, const std::vector<int>& subset);

/// Mean of the diagonal.
double mean_efficiency(const CrosstalkMatrix& m);

struct TradeoffPoint {
    int dimension = 0;
    double target_visibility = 0.0;
    double beta_min = 0.0;
    double mean_efficiency = 0.0;
    double achieved_visibility = 0.0;
};

/// Beta-parametric crosstalk evaluator. Masks and mode fields do not depend
/// on beta, so the azimuthal sums are precomputed once per (input, detector)
/// pair and each beta evaluation reduces to a radial dot product.
class BetaScanner {
public:
    BetaScanner(const std::vector<SpatialState>& states, MaskKind kind,
                const GridSpec& grid, int workers = 1);

    CrosstalkMatrix matrix_at(double beta) const;
    double visibility_at(double beta) const;
    int dimension() const { return d_; }

private:
    int d_;
    double waist_;
    QuadratureGrid grid_;
    std::vector<std::string> labels_;
    std::vector<std::vector<std::complex<double>>> radial_table_; // [d*d][n_radial]
};

/// Smallest beta in [range.first, range.second] with visibility >= target,
/// under IntensityFlattening masks. Bisection to relative width 1e-3 after a
/// coarse monotonicity pre-pass. Throws UnachievableError / NonMonotoneError.
TradeoffPoint min_beta_for_visibility(const std::vector<SpatialState>& states,
                                      double target,
                                      std::pair<double, double> beta_range,
                                      const GridSpec& grid, int workers = 1);

/// Fig-2c style scan: for each d in 2..d_max and each target visibility,
/// min_beta_for_visibility over the radial family p = 0..d-1.
std::vector<TradeoffPoint> efficiency_vs_dimension_scan(
    int d_max, const std::vector<double>& targets, double waist,
    int n_radial = 256, std::pair<double, double> beta_range = {1.0, 32.0},
    int workers = 1);

} // namespace lgsim
