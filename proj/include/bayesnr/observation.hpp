#pragma once

#include <optional>
#include <vector>

#include "bayesnr/distributions.hpp"
#include "bayesnr/quadrature.hpp"

namespace bayesnr {

enum class EvalMode { closed_form, quadrature };

/// Additive observation y = x + n with independent zero-mean signal and
/// noise. Exposes the observation pdf f_Y, cdf F_Y, the cell cross-moment
/// primitive D(y) = int x f_X(x) F_N(y-x) dx, and the regression numerator
/// h(y) = int x f_X(x) f_N(y-x) dx.
///
/// For a Laplace signal with Laplace or Laplace-mixture noise all four have
/// closed forms, provided the signal rate alpha differs from every noise
/// component rate beta_m. Near-degenerate rates (within 1e-6 relative) drop
/// the model to quadrature mode automatically; degenerate_fallback() reports
/// whether that happened. Everything else evaluates the defining integrals
/// adaptively, so quadrature mode doubles as the independent oracle for the
/// closed forms.
class ObservationModel {
public:
    ObservationModel(Law signal, Law noise,
                     std::optional<EvalMode> mode = std::nullopt,
                     QuadratureSpec quad = {});

    double obs_pdf(double y) const;    // f_Y(y)
    double obs_cdf(double y) const;    // F_Y(y)
    double d_func(double y) const;     // D(y)
    double cross_density(double y) const;  // h(y); g_MMSE = h / f_Y

    const Law& signal() const { return signal_; }
    const Law& noise() const { return noise_; }
    double sigma_x2() const { return sigma_x2_; }
    double sigma_n2() const { return sigma_n2_; }
    double sigma_y() const;

    EvalMode mode() const { return mode_; }
    bool degenerate_fallback() const { return degenerate_fallback_; }
    bool has_closed_form() const { return mode_ == EvalMode::closed_form; }
    const QuadratureSpec& quad() const { return quad_; }

    /// Same model forced onto the defining-integral path.
    ObservationModel as_quadrature() const;

    /// Signal rate alpha and per-component noise rates/weights of the
    /// closed-form parameterization. Only valid in closed-form mode.
    double alpha() const;
    const std::vector<double>& betas() const;
    const std::vector<double>& noise_weights() const;

private:
    Law signal_, noise_;
    EvalMode mode_;
    bool degenerate_fallback_ = false;
    QuadratureSpec quad_;
    double sigma_x2_, sigma_n2_;

    // closed-form parameters (empty in quadrature mode)
    double alpha_ = 0.0;
    std::vector<double> betas_;
    std::vector<double> weights_;

    double closed_pdf(double abs_y) const;
    double closed_cdf_pos(double y) const;   // y >= 0 branch
    double closed_d(double abs_y) const;
    double closed_cross(double abs_y) const; // numerator magnitude for y > 0
};

/// The two-component Laplace-mixture benchmark model: Laplace signal of
/// deviation sigma_x, mixture noise pinned by (sigma_n, p0, R_pow).
ObservationModel make_laplace_mixture_model(double sigma_x, double sigma_n, double p0,
                                            double r_pow,
                                            std::optional<EvalMode> mode = std::nullopt);

}  // namespace bayesnr
