#pragma once

#include <string>
#include <vector>

#include "bayesnr/estimator.hpp"
#include "bayesnr/observation.hpp"

namespace bayesnr {

/// Ordered finite thresholds y_1 < ... < y_{N-1} splitting the axis into N
/// cells; the outer cells are unbounded. N = thresholds.size() + 1 >= 1.
class Partition {
public:
    Partition() = default;
    explicit Partition(std::vector<double> thresholds);

    int cells() const { return static_cast<int>(thresholds_.size()) + 1; }
    const std::vector<double>& thresholds() const { return thresholds_; }

    /// Cell index for y, with cells (y_{i-1}, y_i] closed on the right.
    int cell_of(double y) const;

    /// n_cells-1 equispaced thresholds from lo to hi inclusive.
    static Partition uniform(double lo, double hi, int n_cells);

private:
    std::vector<double> thresholds_;
};

/// Per-cell moments theta_i = D(y_i)-D(y_{i-1}) and r_i = F_Y(y_i)-F_Y(y_{i-1}).
struct CellMoments {
    std::vector<double> theta;
    std::vector<double> r;
    std::vector<bool> empty;  // r_i below mass floor; excluded downstream
    bool closed_form = false;
};

/// Piecewise-constant estimator: level_i on cell i of the partition.
struct QuantizedEstimator {
    Partition partition;
    std::vector<double> levels;
    std::string provenance;

    double operator()(double y) const { return levels[static_cast<std::size_t>(partition.cell_of(y))]; }
    Estimator as_estimator() const;
};

double d_func(const ObservationModel& model, double y);

CellMoments cell_moments(const ObservationModel& model, const Partition& p);

/// Per-cell conditional-mean levels theta_i / r_i (empty cells get 0).
QuantizedEstimator q_mmse(const ObservationModel& model, const Partition& p);

/// sigma_x^2 - sum theta_i^2 / r_i over non-empty cells.
double q_mmse_mse(const CellMoments& m, double sigma_x2);

/// Smooth-estimator sampling baseline: interior cells take g at the cell
/// midpoint; the unbounded outer cells take g at y_1 - d/2 and y_{N-1} + d/2
/// where d is the mean interior width.
QuantizedEstimator s_mmse(const ObservationModel& model, const Partition& p,
                          const Estimator& g_smooth);

struct LloydMaxResult {
    Partition partition;
    std::vector<double> levels;
    int iterations = 0;
    std::vector<double> distortion;  // one entry per iteration, non-increasing
};

/// Fixed-point scalar quantizer design on a law: levels are conditional cell
/// means, thresholds are level midpoints. Deterministic start at the law's
/// i/(N+1) quantiles; stops when the largest level move is below 1e-10.
LloydMaxResult lloyd_max(const Law& law, int n_levels);

/// Quantizer-only baseline: conditional means of the signal law over the
/// given cells, ignoring the noise. Levels are nondecreasing.
QuantizedEstimator oq_estimator(const Law& signal, const Partition& p);

/// Symmetric uniform partition whose overload probability
/// P{y outside [-L, L]} = 2 F_Y(-L) matches p_ol. Needs n_cells >= 3.
Partition uniform_partition_for_overload(const ObservationModel& model, int n_cells,
                                         double p_ol);

struct OverloadSweepResult {
    Partition partition;
    double snr_gain = 0.0;  // linear, relative to sigma_x^2/sigma_n^2
    double half_range = 0.0;
};

/// Exhaustive scan of the symmetric overload edge L over a grid, keeping the
/// uniform-partition Q-MMSE with the best SNR gain. Ties break to smaller L.
OverloadSweepResult optimize_overload(const ObservationModel& model, int n_cells,
                                      const std::vector<double>& l_grid);

/// 60 log-spaced candidates in [0.5 sigma_y, 10 sigma_y].
std::vector<double> default_overload_grid(const ObservationModel& model);

}  // namespace bayesnr
