#include "bayesnr/bem.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bayesnr/errors.hpp"

namespace bayesnr {

BemBasis BemBasis::rectangular(const Partition& p) {
    BemBasis b;
    b.rect = p;
    const int n = p.cells();
    for (int i = 0; i < n; ++i)
        b.u.emplace_back([p, i](double y) { return p.cell_of(y) == i ? 1.0 : 0.0; });
    return b;
}

BemBasis BemBasis::custom(std::vector<std::function<double(double)>> fns) {
    BemBasis b;
    b.u = std::move(fns);
    return b;
}

BemSystem assemble(const ObservationModel& model, const BemBasis& basis,
                   const QuadratureSpec& spec) {
    const int n = basis.size();
    if (n < 1) throw std::invalid_argument("assemble: empty basis");

    BemSystem sys{std::vector<double>(static_cast<std::size_t>(n), 0.0), SymMatrix(n),
                  model.sigma_x2()};

    if (basis.rect.has_value()) {
        const CellMoments m = cell_moments(model, *basis.rect);
        for (int i = 0; i < n; ++i) {
            sys.theta[static_cast<std::size_t>(i)] = m.theta[static_cast<std::size_t>(i)];
            sys.R.set(i, i, m.r[static_cast<std::size_t>(i)]);
        }
        return sys;
    }

    const double inf = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const auto& ui = basis.u[static_cast<std::size_t>(i)];
        sys.theta[static_cast<std::size_t>(i)] = integrate(
            [&](double y) { return ui(y) * model.cross_density(y); }, -inf, inf, spec);
        for (int j = i; j < n; ++j) {
            const auto& uj = basis.u[static_cast<std::size_t>(j)];
            sys.R.set(i, j,
                      integrate([&](double y) { return ui(y) * uj(y) * model.obs_pdf(y); },
                                -inf, inf, spec));
        }
    }
    return sys;
}

double bem_quality(const BemSystem& sys) {
    return dot(sys.theta, solve_spd(sys.R, sys.theta));
}

BemCoefficients b_mmse(const BemSystem& sys) {
    return {solve_spd(sys.R, sys.theta), "b-mmse"};
}

BemCoefficients b_msnr_sherman(const BemSystem& sys, double c) {
    if (c == 0.0) throw std::invalid_argument("b_msnr_sherman: c must be nonzero");
    const double resid = sys.sigma_x2 - bem_quality(sys);
    if (resid <= 1e-14 * sys.sigma_x2)
        throw DegenerateResidual("b_msnr_sherman: sigma_x^2 - theta'R^-1 theta is not positive");
    std::vector<double> g = solve_spd(sys.R, sys.theta);
    for (double& v : g) v *= c / resid;
    return {std::move(g), "b-msnr(c=" + std::to_string(c) + ")"};
}

BemCoefficients b_msnr_eig(const BemSystem& sys) {
    const int n = sys.R.order();
    SymMatrix a(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            a.set(i, j, sys.sigma_x2 * sys.R(i, j) -
                            sys.theta[static_cast<std::size_t>(i)] *
                                sys.theta[static_cast<std::size_t>(j)]);

    const EigResult eig = sym_eig(a);
    double trace = 0.0;
    for (double v : eig.values) trace += v;
    if (eig.values.back() <= 1e-12 * std::max(trace, 1e-300))
        throw NotPositiveDefinite("b_msnr_eig: sigma_x^2 R - theta theta^T is rank deficient");

    // g = U Lambda^{-1/2} v with v = Lambda^{-1/2} U^T theta
    std::vector<double> g(static_cast<std::size_t>(n), 0.0);
    for (int k = 0; k < n; ++k) {
        const auto& uk = eig.vectors[static_cast<std::size_t>(k)];
        const double proj = dot(uk, sys.theta) / eig.values[static_cast<std::size_t>(k)];
        for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] += proj * uk[static_cast<std::size_t>(i)];
    }
    double norm = std::sqrt(dot(g, g));
    if (norm <= 0.0) throw DegenerateTheta("b_msnr_eig: theta is zero");
    for (double& v : g) v /= norm;
    return {std::move(g), "b-msnr-eig"};
}

double bem_mse(const BemSystem& sys, const BemCoefficients& g) {
    const std::vector<double> rg = sys.R.multiply(g.g);
    return sys.sigma_x2 - 2.0 * dot(g.g, sys.theta) + dot(g.g, rg);
}

double bem_snr(const BemSystem& sys, const BemCoefficients& g) {
    const double gt = dot(g.g, sys.theta);
    const std::vector<double> rg = sys.R.multiply(g.g);
    const double den = sys.sigma_x2 * dot(g.g, rg) - gt * gt;
    if (den <= 0.0)
        throw DegenerateDenominator("bem_snr: output noise power is not positive");
    return gt * gt / den;
}

BemCoefficients b_ummse(const BemSystem& sys) {
    const double q = bem_quality(sys);
    if (q <= 1e-300) throw DegenerateTheta("b_ummse: theta'R^-1 theta vanishes");
    std::vector<double> g = solve_spd(sys.R, sys.theta);
    const double scale = sys.sigma_x2 / q;
    for (double& v : g) v *= scale;
    return {std::move(g), "b-ummse"};
}

BemCoefficients b_mg(const BemSystem& sys, double power) {
    if (!(power > 0.0)) throw std::invalid_argument("b_mg: power must be positive");
    const double q = bem_quality(sys);
    if (q <= 1e-300) throw DegenerateTheta("b_mg: theta'R^-1 theta vanishes");
    std::vector<double> g = solve_spd(sys.R, sys.theta);
    const double scale = std::sqrt(power / q);
    for (double& v : g) v *= scale;
    return {std::move(g), "b-mg(P=" + std::to_string(power) + ")"};
}

Estimator bem_estimator(const BemBasis& basis, const BemCoefficients& g) {
    if (basis.rect.has_value()) {
        QuantizedEstimator qe{*basis.rect, g.g, g.provenance};
        return qe.as_estimator();
    }
    auto fns = basis.u;
    auto coef = g.g;
    return Estimator{[fns, coef](double y) {
                         double s = 0.0;
                         for (std::size_t i = 0; i < fns.size(); ++i) s += coef[i] * fns[i](y);
                         return s;
                     },
                     "bem(" + g.provenance + ")",
                     {}};
}

}  // namespace bayesnr
