#include "bayesnr/observation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bayesnr/errors.hpp"

namespace bayesnr {

namespace {

struct ClosedParams {
    double alpha;
    std::vector<double> betas;
    std::vector<double> weights;
};

// Laplace signal + Laplace(-mixture) noise admit closed forms.
std::optional<ClosedParams> closed_params(const Law& signal, const Law& noise) {
    const auto* lap = dynamic_cast<const LaplaceLaw*>(&signal.get());
    if (lap == nullptr) return std::nullopt;
    ClosedParams p;
    p.alpha = lap->rate();
    if (const auto* ln = dynamic_cast<const LaplaceLaw*>(&noise.get())) {
        p.betas = {ln->rate()};
        p.weights = {1.0};
        return p;
    }
    if (const auto* mix = dynamic_cast<const LaplaceMixtureLaw*>(&noise.get())) {
        p.betas = mix->rates();
        p.weights = mix->weights();
        return p;
    }
    return std::nullopt;
}

bool rates_degenerate(const ClosedParams& p) {
    for (double b : p.betas)
        if (std::abs(p.alpha - b) / p.alpha < 1e-6) return true;
    return false;
}

}  // namespace

ObservationModel::ObservationModel(Law signal, Law noise, std::optional<EvalMode> mode,
                                   QuadratureSpec quad)
    : signal_(std::move(signal)),
      noise_(std::move(noise)),
      mode_(EvalMode::quadrature),
      quad_(quad),
      sigma_x2_(signal_.variance()),
      sigma_n2_(noise_.variance()) {
    const auto params = closed_params(signal_, noise_);
    const bool closed_possible = params.has_value() && !rates_degenerate(*params);

    if (mode.has_value() && *mode == EvalMode::closed_form) {
        if (!params.has_value())
            throw ConfigError("ObservationModel: closed form needs a Laplace signal with "
                              "Laplace or Laplace-mixture noise");
        if (!closed_possible) {
            // NearDegenerateRates: drop to quadrature and flag it
            degenerate_fallback_ = true;
        }
    }

    const bool want_closed = mode.has_value() ? (*mode == EvalMode::closed_form) : true;
    if (want_closed && closed_possible) {
        mode_ = EvalMode::closed_form;
        alpha_ = params->alpha;
        betas_ = params->betas;
        weights_ = params->weights;
    }
}

ObservationModel ObservationModel::as_quadrature() const {
    return ObservationModel(signal_, noise_, EvalMode::quadrature, quad_);
}

double ObservationModel::sigma_y() const { return std::sqrt(sigma_x2_ + sigma_n2_); }

double ObservationModel::alpha() const {
    if (mode_ != EvalMode::closed_form) throw std::logic_error("alpha: quadrature-mode model");
    return alpha_;
}

const std::vector<double>& ObservationModel::betas() const {
    if (mode_ != EvalMode::closed_form) throw std::logic_error("betas: quadrature-mode model");
    return betas_;
}

const std::vector<double>& ObservationModel::noise_weights() const {
    if (mode_ != EvalMode::closed_form) throw std::logic_error("noise_weights: quadrature-mode model");
    return weights_;
}

// ----------------------------------------------------------- closed forms
// All four branches are derived for y > 0 and extended by symmetry:
// f_Y even, F_Y(-y) = 1 - F_Y(y), D even, h odd.

double ObservationModel::closed_pdf(double ay) const {
    const double a = alpha_;
    double r = 0.0;
    for (std::size_t m = 0; m < betas_.size(); ++m) {
        const double b = betas_[m];
        const double c2 = a * b / (2.0 * (a * a - b * b));
        r += weights_[m] * c2 * (a * std::exp(-b * ay) - b * std::exp(-a * ay));
    }
    return r;
}

double ObservationModel::closed_cdf_pos(double y) const {
    const double a = alpha_;
    double r = 1.0;
    for (std::size_t m = 0; m < betas_.size(); ++m) {
        const double b = betas_[m];
        r -= weights_[m] * (a * a * std::exp(-b * y) - b * b * std::exp(-a * y)) /
             (2.0 * (a * a - b * b));
    }
    return r;
}

double ObservationModel::closed_d(double ay) const {
    const double a = alpha_;
    double r = 0.0;
    for (std::size_t m = 0; m < betas_.size(); ++m) {
        const double b = betas_[m];
        const double d1 = a * a - b * b;
        const double d2 = d1 * d1;
        r += weights_[m] * (b * b * (3.0 * a * a - b * b) * std::exp(-a * ay) / (2.0 * a * d2) -
                            a * a * b * std::exp(-b * ay) / d2 +
                            b * b * ay * std::exp(-a * ay) / (2.0 * d1));
    }
    return r;
}

double ObservationModel::closed_cross(double ay) const {
    const double a = alpha_;
    double r = 0.0;
    for (std::size_t m = 0; m < betas_.size(); ++m) {
        const double b = betas_[m];
        const double d1 = a * a - b * b;
        const double c1 = a * a * b * b / (d1 * d1);
        const double c2 = a * b / (2.0 * d1);
        r += weights_[m] * (c1 * (std::exp(-b * ay) - std::exp(-a * ay)) -
                            c2 * b * ay * std::exp(-a * ay));
    }
    return r;
}

// ------------------------------------------------------------- public API

double ObservationModel::obs_pdf(double y) const {
    if (mode_ == EvalMode::closed_form) return closed_pdf(std::abs(y));
    const auto& fx = signal_;
    const auto& fn = noise_;
    // both factor laws may have kinks at their origin, i.e. at x=0 and x=y
    return integrate_segmented([&](double x) { return fx.pdf(x) * fn.pdf(y - x); },
                               -std::numeric_limits<double>::infinity(),
                               std::numeric_limits<double>::infinity(), {0.0, y}, quad_);
}

double ObservationModel::obs_cdf(double y) const {
    if (mode_ == EvalMode::closed_form) {
        if (y >= 0.0) return closed_cdf_pos(y);
        return 1.0 - closed_cdf_pos(-y);
    }
    const auto& fx = signal_;
    const auto& fn = noise_;
    return integrate_segmented([&](double x) { return fx.pdf(x) * fn.cdf(y - x); },
                               -std::numeric_limits<double>::infinity(),
                               std::numeric_limits<double>::infinity(), {0.0, y}, quad_);
}

double ObservationModel::d_func(double y) const {
    if (mode_ == EvalMode::closed_form) return closed_d(std::abs(y));
    const auto& fx = signal_;
    const auto& fn = noise_;
    return integrate_segmented([&](double x) { return x * fx.pdf(x) * fn.cdf(y - x); },
                               -std::numeric_limits<double>::infinity(),
                               std::numeric_limits<double>::infinity(), {0.0, y}, quad_);
}

double ObservationModel::cross_density(double y) const {
    if (mode_ == EvalMode::closed_form) {
        const double s = (y > 0.0) ? 1.0 : (y < 0.0 ? -1.0 : 0.0);
        return s * closed_cross(std::abs(y));
    }
    const auto& fx = signal_;
    const auto& fn = noise_;
    return integrate_segmented([&](double x) { return x * fx.pdf(x) * fn.pdf(y - x); },
                               -std::numeric_limits<double>::infinity(),
                               std::numeric_limits<double>::infinity(), {0.0, y}, quad_);
}

ObservationModel make_laplace_mixture_model(double sigma_x, double sigma_n, double p0,
                                            double r_pow, std::optional<EvalMode> mode) {
    auto sigmas = mixture_sigmas_from_ratio(sigma_n, p0, r_pow);
    return ObservationModel(Law::laplace(sigma_x),
                            Law::laplace_mixture({p0, 1.0 - p0}, std::move(sigmas)), mode);
}

}  // namespace bayesnr
