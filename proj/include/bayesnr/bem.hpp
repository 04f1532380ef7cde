#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bayesnr/linalg.hpp"
#include "bayesnr/observation.hpp"
#include "bayesnr/quantized.hpp"

namespace bayesnr {

/// Fixed dictionary of basis estimators u_i for g(y) = sum_i g_i u_i(y).
/// A rectangular basis is the indicator set of a partition and marks the
/// moment assembly as diagonal.
struct BemBasis {
    std::vector<std::function<double(double)>> u;
    std::optional<Partition> rect;

    int size() const { return static_cast<int>(u.size()); }

    static BemBasis rectangular(const Partition& p);
    static BemBasis custom(std::vector<std::function<double(double)>> fns);
};

/// First/second basis moments under the model: theta_i = E{x u_i(y)} and
/// R_ij = E{u_i(y) u_j(y)}, plus the signal power the quadratic forms need.
struct BemSystem {
    std::vector<double> theta;
    SymMatrix R;
    double sigma_x2;
};

struct BemCoefficients {
    std::vector<double> g;
    std::string provenance;
};

BemSystem assemble(const ObservationModel& model, const BemBasis& basis,
                   const QuadratureSpec& spec = {});

/// Mean-square-optimal coefficients R^{-1} theta.
BemCoefficients b_mmse(const BemSystem& sys);

/// Max-SNR coefficients via the rank-one update route:
/// g = c / (sigma_x^2 - theta^T R^{-1} theta) * R^{-1} theta, any c != 0.
BemCoefficients b_msnr_sherman(const BemSystem& sys, double c);

/// Max-SNR coefficients via eigendecomposition of sigma_x^2 R - theta theta^T,
/// normalized to unit length (the scale is free).
BemCoefficients b_msnr_eig(const BemSystem& sys);

/// J(g) = sigma_x^2 - 2 g.theta + g^T R g.
double bem_mse(const BemSystem& sys, const BemCoefficients& g);

/// Rayleigh-quotient SNR: (g.theta)^2 / (g^T (sigma_x^2 R - theta theta^T) g).
double bem_snr(const BemSystem& sys, const BemCoefficients& g);

/// Unbiased variant: gain pinned to 1, so g.theta = sigma_x^2.
BemCoefficients b_ummse(const BemSystem& sys);

/// Maximum-gain variant under the output power constraint g^T R g = P.
BemCoefficients b_mg(const BemSystem& sys, double power);

/// theta^T R^{-1} theta, the quality scalar behind all four designs.
double bem_quality(const BemSystem& sys);

Estimator bem_estimator(const BemBasis& basis, const BemCoefficients& g);

}  // namespace bayesnr
