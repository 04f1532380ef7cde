#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bayesnr/observation.hpp"

namespace bayesnr {

/// A pointwise-evaluable estimate map x_hat = g(y). breakpoints lists known
/// kinks or jumps so quadrature-based reports can split the axis there.
struct Estimator {
    std::function<double(double)> g;
    std::string tag;
    std::vector<double> breakpoints;

    double operator()(double y) const { return g(y); }
};

/// Linear-regression decomposition of an estimator under a model:
/// g(y) = gain * x + w, with E{w}=0 and w orthogonal to x.
struct EstimatorReport {
    double gain;              // K_g
    double output_noise_var;  // sigma^2_{w_g}
    double snr;               // gamma_g; +inf when the output carries no noise
    double mse;               // J_g
    double output_power;      // E{g^2}
};

/// Monte-Carlo flavor of the report plus standard errors: se_gain and se_mse
/// come straight from the sample variances, se_snr propagates them through
/// the snr formula (delta method with the empirical covariance).
struct McEstimatorReport {
    EstimatorReport value;
    double se_gain;
    double se_mse;
    double se_snr;
    std::int64_t samples;
};

/// Deterministic quadrature report: K_g and the output moments are the
/// defining expectations, evaluated through the model (so a quadrature-mode
/// model yields a fully integral-based oracle).
EstimatorReport report(const ObservationModel& model, const Estimator& est,
                       const QuadratureSpec& spec = {});

/// Empirical report over m paired signal/noise draws from a seeded stream.
/// The gain estimate divides by the model's true sigma_x^2. Batches run
/// concurrently on seed-derived substreams and reduce in fixed order, so the
/// result depends only on (seed, m).
McEstimatorReport report_mc(const ObservationModel& model, const Estimator& est,
                            std::uint64_t seed, std::int64_t m);

/// Closed-form conditional-mean estimator for the Laplace/Laplace-mixture
/// model. Throws NearDegenerateRates when the model had to fall back.
Estimator mmse_closed(const ObservationModel& model);

/// Conditional mean by quadrature of the defining integrals, independent of
/// any closed form: g(y) = h(y)/f_Y(y) on a quadrature-mode copy of the model.
Estimator mmse_numeric(const ObservationModel& model);

/// Unbiased rescaling g/K. Throws DegenerateGain for K below 1e-12.
Estimator ummse(const Estimator& g_mmse, double gain);

/// The Table-I closed expressions as functions of the MMSE gain.
struct Table1 {
    double output_power;  // K sigma_x^2
    double mmse;          // (1-K) sigma_x^2
    double noise_power;   // K(1-K) sigma_x^2
    double msnr;          // K/(1-K), +inf at K=1
    double ummse_mse;     // (1-K) sigma_x^2 / K, +inf at K=0
};
Table1 table1(double gain, double sigma_x2);

/// Saturating clipper: g(y) = clamp(y, -beta, beta).
Estimator soft_limiter(double beta);

Estimator identity_estimator();
Estimator scaled(const Estimator& inner, double a);

}  // namespace bayesnr
