#pragma once

#include <stdexcept>
#include <string>

namespace bayesnr {

/// Adaptive quadrature ran out of subdivisions before reaching tolerance.
struct NonConvergent : std::runtime_error {
    explicit NonConvergent(const std::string& what) : std::runtime_error(what) {}
};

/// Root finder was given endpoints with the same sign.
struct NoBracket : std::runtime_error {
    explicit NoBracket(const std::string& what) : std::runtime_error(what) {}
};

/// SPD solve hit a non-positive (or negligible) pivot.
struct IllConditioned : std::runtime_error {
    explicit IllConditioned(const std::string& what) : std::runtime_error(what) {}
};

struct NotPositiveDefinite : std::runtime_error {
    explicit NotPositiveDefinite(const std::string& what) : std::runtime_error(what) {}
};

/// Closed-form Laplace-mixture expressions need the signal and noise rates apart.
struct NearDegenerateRates : std::runtime_error {
    explicit NearDegenerateRates(const std::string& what) : std::runtime_error(what) {}
};

struct DivisionNearZero : std::runtime_error {
    explicit DivisionNearZero(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateGain : std::runtime_error {
    explicit DegenerateGain(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateResidual : std::runtime_error {
    explicit DegenerateResidual(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateTheta : std::runtime_error {
    explicit DegenerateTheta(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateDenominator : std::runtime_error {
    explicit DegenerateDenominator(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bayesnr
