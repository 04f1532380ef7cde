#include "bayesnr/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "bayesnr/errors.hpp"
#include "bayesnr/parallel.hpp"
#include "bayesnr/rng.hpp"

namespace bayesnr {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

EstimatorReport report(const ObservationModel& model, const Estimator& est,
                       const QuadratureSpec& spec) {
    const double sx2 = model.sigma_x2();
    const double inf = kInf;

    // E{x g(y)} = int g(y) h(y) dy after the y = x + n change of variables.
    const double exg = integrate_segmented(
        [&](double y) { return est.g(y) * model.cross_density(y); }, -inf, inf,
        est.breakpoints, spec);
    const double eg2 = integrate_segmented(
        [&](double y) { const double v = est.g(y); return v * v * model.obs_pdf(y); }, -inf, inf,
        est.breakpoints, spec);

    EstimatorReport r;
    r.gain = exg / sx2;
    r.output_power = eg2;
    r.output_noise_var = std::max(eg2 - r.gain * r.gain * sx2, 0.0);
    r.mse = sx2 - 2.0 * exg + eg2;

    const double signal_part = r.gain * r.gain * sx2;
    if (eg2 <= 1e-14 * sx2) {
        r.snr = 0.0;  // g == 0: no output at all
    } else if (r.output_noise_var <= 1e-12 * eg2) {
        r.snr = kInf;  // deterministic noiseless output
    } else {
        r.snr = signal_part / r.output_noise_var;
    }
    return r;
}

McEstimatorReport report_mc(const ObservationModel& model, const Estimator& est,
                            std::uint64_t seed, std::int64_t m) {
    const double sx2 = model.sigma_x2();
    const Law signal = model.signal();
    const Law noise = model.noise();

    constexpr std::int64_t kBatch = 1 << 16;
    const int nbatch = static_cast<int>((m + kBatch - 1) / kBatch);

    struct Acc {
        double sxg = 0, sg2 = 0, se = 0, sxg2 = 0, se2 = 0, sg4 = 0, sxg_g2 = 0;
    };
    std::vector<Acc> acc(static_cast<std::size_t>(nbatch));

    UniformStream root(seed);
    parallel_for(nbatch, [&](int b) {
        UniformStream rng = root.fork(static_cast<std::uint64_t>(b));
        const std::int64_t lo = static_cast<std::int64_t>(b) * kBatch;
        const std::int64_t hi = std::min(m, lo + kBatch);
        Acc a;
        for (std::int64_t i = lo; i < hi; ++i) {
            const double x = signal.sample(rng);
            const double n = noise.sample(rng);
            const double g = est.g(x + n);
            const double xg = x * g;
            const double g2 = g * g;
            const double e = (g - x) * (g - x);
            a.sxg += xg;
            a.sg2 += g2;
            a.se += e;
            a.sxg2 += xg * xg;
            a.se2 += e * e;
            a.sg4 += g2 * g2;
            a.sxg_g2 += xg * g2;
        }
        acc[static_cast<std::size_t>(b)] = a;
    });

    Acc tot;
    for (const Acc& a : acc) {  // fixed batch order
        tot.sxg += a.sxg;
        tot.sg2 += a.sg2;
        tot.se += a.se;
        tot.sxg2 += a.sxg2;
        tot.se2 += a.se2;
        tot.sg4 += a.sg4;
        tot.sxg_g2 += a.sxg_g2;
    }

    const double dm = static_cast<double>(m);
    const double exg = tot.sxg / dm;
    const double eg2 = tot.sg2 / dm;

    McEstimatorReport out;
    out.samples = m;
    out.value.gain = exg / sx2;
    out.value.output_power = eg2;
    out.value.output_noise_var = std::max(eg2 - out.value.gain * out.value.gain * sx2, 0.0);
    out.value.mse = tot.se / dm;
    out.value.snr = (out.value.output_noise_var > 0.0)
                        ? out.value.gain * out.value.gain * sx2 / out.value.output_noise_var
                        : kInf;
    const double var_xg = std::max(tot.sxg2 / dm - exg * exg, 0.0);
    const double var_e = std::max(tot.se2 / dm - out.value.mse * out.value.mse, 0.0);
    out.se_gain = std::sqrt(var_xg / dm) / sx2;
    out.se_mse = std::sqrt(var_e / dm);

    // delta method for snr = S/(eg2 - S), S = exg^2/sx2
    out.se_snr = 0.0;
    if (out.value.output_noise_var > 0.0) {
        const double s = exg * exg / sx2;
        const double den = eg2 - s;
        const double d1 = (2.0 * exg / sx2) * eg2 / (den * den);
        const double d2 = -s / (den * den);
        const double var_g2 = std::max(tot.sg4 / dm - eg2 * eg2, 0.0);
        const double cov = tot.sxg_g2 / dm - exg * eg2;
        const double var_snr =
            (d1 * d1 * var_xg + 2.0 * d1 * d2 * cov + d2 * d2 * var_g2) / dm;
        out.se_snr = std::sqrt(std::max(var_snr, 0.0));
    }
    return out;
}

Estimator mmse_closed(const ObservationModel& model) {
    if (model.degenerate_fallback())
        throw NearDegenerateRates("mmse_closed: signal and noise rates nearly coincide");
    if (!model.has_closed_form())
        throw ConfigError("mmse_closed: model has no closed-form parameterization");

    const double a = model.alpha();
    const std::vector<double> betas = model.betas();
    const std::vector<double> ps = model.noise_weights();

    // Ratio of Appendix-style numerator/denominator with exp(+bmin|y|)
    // factored out of both, so large |y| stays 0/0-free.
    double bmin = a;
    for (double b : betas) bmin = std::min(bmin, b);

    auto g = [a, betas, ps, bmin](double y) {
        const double ay = std::abs(y);
        const double s = (y > 0.0) ? 1.0 : (y < 0.0 ? -1.0 : 0.0);
        double num = 0.0, den = 0.0;
        const double ea = std::exp(-(a - bmin) * ay);
        for (std::size_t m = 0; m < betas.size(); ++m) {
            const double b = betas[m];
            const double d1 = a * a - b * b;
            const double c1 = a * a * b * b / (d1 * d1);
            const double c2 = a * b / (2.0 * d1);
            const double eb = std::exp(-(b - bmin) * ay);
            num += ps[m] * (c1 * (eb - ea) - c2 * b * ay * ea);
            den += ps[m] * c2 * (a * eb - b * ea);
        }
        return s * num / den;
    };
    return Estimator{g, "mmse-closed", {0.0}};
}

Estimator mmse_numeric(const ObservationModel& model) {
    auto quad_model = std::make_shared<ObservationModel>(model.as_quadrature());
    auto g = [quad_model](double y) {
        const double fy = quad_model->obs_pdf(y);
        if (fy < 1e-300)
            throw DivisionNearZero("mmse_numeric: observation density vanished at y=" +
                                   std::to_string(y));
        return quad_model->cross_density(y) / fy;
    };
    return Estimator{g, "mmse-numeric", {0.0}};
}

Estimator ummse(const Estimator& g_mmse, double gain) {
    if (gain <= 1e-12) throw DegenerateGain("ummse: gain too small to invert");
    auto inner = g_mmse.g;
    return Estimator{[inner, gain](double y) { return inner(y) / gain; },
                     "scaled(1/K," + g_mmse.tag + ")", g_mmse.breakpoints};
}

Table1 table1(double gain, double sigma_x2) {
    Table1 t;
    t.output_power = gain * sigma_x2;
    t.mmse = (1.0 - gain) * sigma_x2;
    t.noise_power = gain * (1.0 - gain) * sigma_x2;
    t.msnr = (gain < 1.0) ? gain / (1.0 - gain) : kInf;
    t.ummse_mse = (gain > 0.0) ? (1.0 - gain) * sigma_x2 / gain : kInf;
    return t;
}

Estimator soft_limiter(double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("soft_limiter: beta must be positive");
    return Estimator{[beta](double y) { return std::clamp(y, -beta, beta); },
                     "soft-limiter", {-beta, beta}};
}

Estimator identity_estimator() {
    return Estimator{[](double y) { return y; }, "identity", {}};
}

Estimator scaled(const Estimator& inner, double a) {
    auto g = inner.g;
    return Estimator{[g, a](double y) { return a * g(y); }, "scaled(" + inner.tag + ")",
                     inner.breakpoints};
}

}  // namespace bayesnr
