#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bayesnr/rng.hpp"

namespace bayesnr {

/// A zero-mean scalar probability law. partial_moment is the lower partial
/// first moment \int_{-inf}^x t f(t) dt, which closed-form quantizer design
/// (conditional cell means) relies on.
class ScalarLaw {
public:
    virtual ~ScalarLaw() = default;

    virtual double pdf(double x) const = 0;
    virtual double cdf(double x) const = 0;
    virtual double partial_moment(double x) const = 0;
    virtual double variance() const = 0;
    virtual double quantile(double q) const;
    virtual double sample(UniformStream& rng) const = 0;
    virtual std::string name() const = 0;
};

/// Immutable value handle for a ScalarLaw.
class Law {
public:
    double pdf(double x) const { return impl_->pdf(x); }
    double cdf(double x) const { return impl_->cdf(x); }
    double partial_moment(double x) const { return impl_->partial_moment(x); }
    double variance() const { return impl_->variance(); }
    double quantile(double q) const { return impl_->quantile(q); }
    double sample(UniformStream& rng) const { return impl_->sample(rng); }
    std::string name() const { return impl_->name(); }

    const ScalarLaw& get() const { return *impl_; }

    /// sigma is the standard deviation; the Laplace rate is sqrt(2)/sigma.
    static Law laplace(double sigma);
    static Law laplace_mixture(std::vector<double> weights, std::vector<double> sigmas);
    static Law gaussian(double sigma);
    static Law gaussian_mixture(std::vector<double> weights, std::vector<double> sigmas);

private:
    explicit Law(std::shared_ptr<const ScalarLaw> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const ScalarLaw> impl_;
};

class LaplaceLaw final : public ScalarLaw {
public:
    explicit LaplaceLaw(double sigma);

    double pdf(double x) const override;
    double cdf(double x) const override;
    double partial_moment(double x) const override;
    double variance() const override { return sigma_ * sigma_; }
    double quantile(double q) const override;
    double sample(UniformStream& rng) const override;
    std::string name() const override { return "laplace"; }

    double sigma() const { return sigma_; }
    double rate() const { return rate_; }

private:
    double sigma_;
    double rate_;  // sqrt(2)/sigma
};

class LaplaceMixtureLaw final : public ScalarLaw {
public:
    LaplaceMixtureLaw(std::vector<double> weights, std::vector<double> sigmas);

    double pdf(double x) const override;
    double cdf(double x) const override;
    double partial_moment(double x) const override;
    double variance() const override;
    double sample(UniformStream& rng) const override;
    std::string name() const override { return "laplace-mixture"; }

    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& sigmas() const { return sigmas_; }
    std::vector<double> rates() const;
    /// sigma^2_{n,0} / sigma^2_{n,1}; defined for two components.
    double power_ratio() const;

private:
    std::vector<double> weights_;
    std::vector<double> sigmas_;
    std::vector<LaplaceLaw> components_;
};

class GaussianLaw final : public ScalarLaw {
public:
    explicit GaussianLaw(double sigma);

    double pdf(double x) const override;
    double cdf(double x) const override;
    double partial_moment(double x) const override;
    double variance() const override { return sigma_ * sigma_; }
    double sample(UniformStream& rng) const override;
    std::string name() const override { return "gaussian"; }

    double sigma() const { return sigma_; }

private:
    double sigma_;
};

class GaussianMixtureLaw final : public ScalarLaw {
public:
    GaussianMixtureLaw(std::vector<double> weights, std::vector<double> sigmas);

    double pdf(double x) const override;
    double cdf(double x) const override;
    double partial_moment(double x) const override;
    double variance() const override;
    double sample(UniformStream& rng) const override;
    std::string name() const override { return "gaussian-mixture"; }

    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& sigmas() const { return sigmas_; }

private:
    std::vector<double> weights_;
    std::vector<double> sigmas_;
    std::vector<GaussianLaw> components_;
};

/// Component variances for the two-component noise parameterization used
/// throughout: total variance sigma_n^2, weight p0 of component 0 and power
/// ratio R_pow = sigma^2_{n,0}/sigma^2_{n,1}.
std::vector<double> mixture_sigmas_from_ratio(double sigma_n, double p0, double r_pow);

}  // namespace bayesnr
