#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bayesnr/observation.hpp"

namespace bayesnr {

struct SignalSpec {
    std::string type = "laplace";  // laplace | gaussian
    double sigma_x = 1.0;
};

struct NoiseSpec {
    std::string type = "laplace-mixture";  // laplace | laplace-mixture | gaussian | gaussian-mixture
    double sigma_n = 4.0;
    // two-component shorthand (used when sigmas is empty)
    double p0 = 0.9;
    double r_pow = 0.001;
    // explicit mixture
    std::vector<double> weights;
    std::vector<double> sigmas;
};

struct QuantizerSpec {
    std::string kind = "lloyd-max";  // uniform | lloyd-max | uniform-overload | sweep
    std::vector<int> n_cells = {17, 65, 127};
    double y_lo = -10.0, y_hi = 10.0;  // uniform kind
    double p_ol = 0.0327;              // uniform-overload kind
    std::vector<double> l_grid;        // sweep kind; empty = default grid
};

struct SweepSpec {
    double min_db = -15.0, max_db = 0.0, step_db = 1.0;
    int optimized_n = 127;  // 0 disables the optimized-overload reference
};

struct McSpec {
    std::int64_t samples = 1000000;
    std::uint64_t seed = 20240901;
};

struct GridSpec {
    double y_min = -20.0, y_max = 20.0, step = 0.05;
};

struct ExperimentConfig {
    SignalSpec signal;
    NoiseSpec noise;
    QuantizerSpec quantizer;
    SweepSpec sweep;
    McSpec mc;
    GridSpec grid;
    std::string out_dir = ".";

    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig from_file(const std::string& path);
    std::string to_json_text() const;

    Law make_signal() const;
    Law make_noise(double sigma_n_override) const;
    /// Model at the configured sigma_n.
    ObservationModel make_model() const;
    /// Model with the noise power set by an input SNR in dB.
    ObservationModel model_at_snr_db(double snr_db) const;
};

/// Fig-1 style estimator curves over the y grid:
/// y, g_mmse, g_qmmse_N<k>..., g_smmse_N<k>...
std::string run_curve(const ExperimentConfig& cfg);

/// Gain/MSE sweep over input SNR. Partition families per point follow the
/// quantizer spec; columns carry the SNR gain in dB and the MSE per estimator.
std::string run_sweep(const ExperimentConfig& cfg);

/// Monte-Carlo check of the analytic reports at the configured model.
std::string run_mc(const ExperimentConfig& cfg);

/// Designed partitions, one row per threshold.
std::string run_thresholds(const ExperimentConfig& cfg);

struct ValidationOutcome {
    int passed = 0;
    int failed = 0;
    std::string text;  // one line per check plus a JSON summary tail line
};

/// Fast self-check suite across the numeric kernels and identities.
ValidationOutcome run_validate();

/// 12-significant-digit CSV number (C locale, no trailing noise).
std::string csv_num(double v);

}  // namespace bayesnr
