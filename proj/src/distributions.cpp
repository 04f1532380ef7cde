#include "bayesnr/distributions.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bayesnr {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kTwoPi = 6.283185307179586;

// inverse Laplace cdf, clamped so u==0 or u==1 cannot produce an infinity
double laplace_quantile_safe(double u, double rate) {
    if (u < 0.5) {
        const double v = std::max(u, 1e-300);
        return std::log(2.0 * v) / rate;
    }
    const double v = std::max(1.0 - u, 1e-300);
    return -std::log(2.0 * v) / rate;
}

void check_mixture(const std::vector<double>& weights, const std::vector<double>& sigmas) {
    if (weights.empty() || weights.size() != sigmas.size())
        throw std::invalid_argument("mixture: weights/sigmas size mismatch");
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0 || w > 1.0) throw std::invalid_argument("mixture: weight outside [0,1]");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("mixture: weights must sum to 1");
    for (double s : sigmas)
        if (!(s > 0.0)) throw std::invalid_argument("mixture: sigma must be positive");
}
}  // namespace

double ScalarLaw::quantile(double q) const {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("quantile: q must be in (0,1)");
    // generic bisection; laws with closed-form inverses override
    const double s = std::sqrt(variance());
    double lo = -s, hi = s;
    while (cdf(lo) > q) lo *= 2.0;
    while (cdf(hi) < q) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-14 * (1.0 + std::abs(lo) + std::abs(hi)); ++i) {
        const double mid = 0.5 * (lo + hi);
        (cdf(mid) < q ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------- Laplace

LaplaceLaw::LaplaceLaw(double sigma) : sigma_(sigma), rate_(kSqrt2 / sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("LaplaceLaw: sigma must be positive");
}

double LaplaceLaw::pdf(double x) const { return 0.5 * rate_ * std::exp(-rate_ * std::abs(x)); }

double LaplaceLaw::cdf(double x) const {
    if (x < 0.0) return 0.5 * std::exp(rate_ * x);
    return 1.0 - 0.5 * std::exp(-rate_ * x);
}

double LaplaceLaw::partial_moment(double x) const {
    // int_{-inf}^x t f(t) dt for the two-sided exponential
    if (x <= 0.0) return 0.5 * std::exp(rate_ * x) * (x - 1.0 / rate_);
    return -0.5 * std::exp(-rate_ * x) * (x + 1.0 / rate_);
}

double LaplaceLaw::quantile(double q) const {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("quantile: q must be in (0,1)");
    if (q < 0.5) return std::log(2.0 * q) / rate_;
    return -std::log(2.0 * (1.0 - q)) / rate_;
}

double LaplaceLaw::sample(UniformStream& rng) const {
    return laplace_quantile_safe(rng.next(), rate_);
}

// --------------------------------------------------------- Laplace mixture

LaplaceMixtureLaw::LaplaceMixtureLaw(std::vector<double> weights, std::vector<double> sigmas)
    : weights_(std::move(weights)), sigmas_(std::move(sigmas)) {
    check_mixture(weights_, sigmas_);
    components_.reserve(sigmas_.size());
    for (double s : sigmas_) components_.emplace_back(s);
}

double LaplaceMixtureLaw::pdf(double x) const {
    double r = 0.0;
    for (std::size_t m = 0; m < weights_.size(); ++m) r += weights_[m] * components_[m].pdf(x);
    return r;
}

double LaplaceMixtureLaw::cdf(double x) const {
    double r = 0.0;
    for (std::size_t m = 0; m < weights_.size(); ++m) r += weights_[m] * components_[m].cdf(x);
    return r;
}

double LaplaceMixtureLaw::partial_moment(double x) const {
    double r = 0.0;
    for (std::size_t m = 0; m < weights_.size(); ++m)
        r += weights_[m] * components_[m].partial_moment(x);
    return r;
}

double LaplaceMixtureLaw::variance() const {
    double r = 0.0;
    for (std::size_t m = 0; m < weights_.size(); ++m)
        r += weights_[m] * sigmas_[m] * sigmas_[m];
    return r;
}

double LaplaceMixtureLaw::sample(UniformStream& rng) const {
    const double u = rng.next();
    double acc = 0.0;
    std::size_t pick = weights_.size() - 1;
    for (std::size_t m = 0; m < weights_.size(); ++m) {
        acc += weights_[m];
        if (u < acc) {
            pick = m;
            break;
        }
    }
    return components_[pick].sample(rng);
}

std::vector<double> LaplaceMixtureLaw::rates() const {
    std::vector<double> r;
    r.reserve(sigmas_.size());
    for (const auto& c : components_) r.push_back(c.rate());
    return r;
}

double LaplaceMixtureLaw::power_ratio() const {
    if (sigmas_.size() != 2)
        throw std::logic_error("power_ratio: defined for two-component mixtures");
    return (sigmas_[0] * sigmas_[0]) / (sigmas_[1] * sigmas_[1]);
}

// --------------------------------------------------------------- Gaussian

GaussianLaw::GaussianLaw(double sigma) : sigma_(sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("GaussianLaw: sigma must be positive");
}

double GaussianLaw::pdf(double x) const {
    const double z = x / sigma_;
    return std::exp(-0.5 * z * z) / (sigma_ * std::sqrt(kTwoPi));
}

double GaussianLaw::cdf(double x) const { return 0.5 * std::erfc(-x / (sigma_ * kSqrt2)); }

double GaussianLaw::partial_moment(double x) const { return -sigma_ * sigma_ * pdf(x); }

double GaussianLaw::sample(UniformStream& rng) const {
    // Box-Muller; fixed two draws per sample keeps streams aligned
    const double u1 = std::max(rng.next(), 1e-300);
    const double u2 = rng.next();
    return sigma_ * std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

// ------------------------------------------------------- Gaussian mixture

GaussianMixtureLaw::GaussianMixtureLaw(std::vector<double> weights, std::vector<double> sigmas)
    : weights_(std::move(weights)), sigmas_(std::move(sigmas)) {
    check_mixture(weights_, sigmas_);
    components_.reserve(sigmas_.size());
    for (double s : sigmas_) components_.emplace_back(s);
}

double GaussianMixtureLaw::pdf(double x) const {
    double r = 0.0;
    for (std::size_t m = 0; m < weights_.size(); ++m) r += weights_[m] * components_[m].pdf(x);
    return r;
}

double GaussianMixtureLaw::cdf(double x) const {
    double r = 0.0;
    for (std::size_t m = 0; m < weights_.size(); ++m) r += weights_[m] * components_[m].cdf(x);
    return r;
}

double GaussianMixtureLaw::partial_moment(double x) const {
    double r = 0.0;
    for (std::size_t m = 0; m < weights_.size(); ++m)
        r += weights_[m] * components_[m].partial_moment(x);
    return r;
}

double GaussianMixtureLaw::variance() const {
    double r = 0.0;
    for (std::size_t m = 0; m < weights_.size(); ++m)
        r += weights_[m] * sigmas_[m] * sigmas_[m];
    return r;
}

double GaussianMixtureLaw::sample(UniformStream& rng) const {
    const double u = rng.next();
    double acc = 0.0;
    std::size_t pick = weights_.size() - 1;
    for (std::size_t m = 0; m < weights_.size(); ++m) {
        acc += weights_[m];
        if (u < acc) {
            pick = m;
            break;
        }
    }
    return components_[pick].sample(rng);
}

// ------------------------------------------------------------------- Law

Law Law::laplace(double sigma) { return Law(std::make_shared<LaplaceLaw>(sigma)); }

Law Law::laplace_mixture(std::vector<double> weights, std::vector<double> sigmas) {
    return Law(std::make_shared<LaplaceMixtureLaw>(std::move(weights), std::move(sigmas)));
}

Law Law::gaussian(double sigma) { return Law(std::make_shared<GaussianLaw>(sigma)); }

Law Law::gaussian_mixture(std::vector<double> weights, std::vector<double> sigmas) {
    return Law(std::make_shared<GaussianMixtureLaw>(std::move(weights), std::move(sigmas)));
}

std::vector<double> mixture_sigmas_from_ratio(double sigma_n, double p0, double r_pow) {
    if (!(sigma_n > 0.0) || !(r_pow > 0.0) || p0 < 0.0 || p0 > 1.0)
        throw std::invalid_argument("mixture_sigmas_from_ratio: bad parameters");
    const double p1 = 1.0 - p0;
    const double s2n1 = sigma_n * sigma_n / (p0 * r_pow + p1);
    return {std::sqrt(r_pow * s2n1), std::sqrt(s2n1)};
}

}  // namespace bayesnr
