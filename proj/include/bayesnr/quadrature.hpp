#pragma once

#include <functional>
#include <vector>

namespace bayesnr {

using RealFn = std::function<double(double)>;

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    int max_subdivisions = 2000;
};

/// Adaptive integration of f over (lo, hi). Either endpoint may be
/// +-infinity; semi-infinite and doubly infinite ranges are mapped onto a
/// finite interval by a monotone rational substitution before subdividing.
/// Throws NonConvergent when the subdivision budget runs out first.
double integrate(const RealFn& f, double lo, double hi, const QuadratureSpec& spec = {});

/// Same contract, but the interval is pre-split at the given breakpoints
/// (sorted or not; points outside (lo,hi) are ignored). Use for integrands
/// with known kinks or jumps, e.g. piecewise-constant estimators.
double integrate_segmented(const RealFn& f, double lo, double hi,
                           const std::vector<double>& breakpoints,
                           const QuadratureSpec& spec = {});

/// Bisection on a bracketing interval: requires f(lo)*f(hi) <= 0, returns the
/// midpoint of a bracket narrower than tol. Throws NoBracket otherwise.
double find_root(const RealFn& f, double lo, double hi, double tol);

}  // namespace bayesnr
