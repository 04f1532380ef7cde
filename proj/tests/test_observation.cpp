#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "bayesnr/observation.hpp"
#include "bayesnr/quadrature.hpp"

using namespace bayesnr;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
const double kPi = 3.14159265358979323846;

ObservationModel bench() { return make_laplace_mixture_model(1.0, 4.0, 0.9, 0.001); }
}  // namespace

TEST_CASE("benchmark model picks the closed form and keeps its moments") {
    const ObservationModel m = bench();
    CHECK(m.has_closed_form());
    CHECK_FALSE(m.degenerate_fallback());
    CHECK(m.sigma_x2() == doctest::Approx(1.0));
    CHECK(m.sigma_n2() == doctest::Approx(16.0));
    CHECK(m.alpha() == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("observation cdf: symmetry pins and overload value") {
    const ObservationModel m = bench();
    CHECK(m.obs_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(m.obs_cdf(500.0) - 1.0) <= 1e-9);
    CHECK(std::abs(m.obs_cdf(-500.0)) <= 1e-9);
    // overload probability of the +-10 clip
    CHECK(2.0 * m.obs_cdf(-10.0) == doctest::Approx(0.0327357).epsilon(2e-5));
}

TEST_CASE("closed-form cdf matches the defining integral") {
    const ObservationModel closed = bench();
    const ObservationModel quad = closed.as_quadrature();
    for (double y : {-15.0, -4.5, -1.0, 0.0, 0.3, 2.0, 6.0, 12.0}) {
        CHECK(std::abs(closed.obs_cdf(y) - quad.obs_cdf(y)) <= 1e-8);
    }
}

TEST_CASE("closed-form pdf matches convolution quadrature and normalizes") {
    const ObservationModel closed = bench();
    const ObservationModel quad = closed.as_quadrature();
    for (double y : {-9.0, -3.0, 0.0, 0.9, 3.0, 8.0, 20.0}) {
        CHECK(std::abs(closed.obs_pdf(y) - quad.obs_pdf(y)) <= 1e-8);
        CHECK(closed.obs_pdf(y) == doctest::Approx(closed.obs_pdf(-y)).epsilon(1e-12));
    }
    const double mass = integrate([&](double y) { return closed.obs_pdf(y); }, -kInf, kInf);
    CHECK(std::abs(mass - 1.0) <= 1e-8);
    CHECK(closed.obs_pdf(3.0) == doctest::Approx(0.0148891612).epsilon(1e-7));
}

TEST_CASE("D: limits, even symmetry, closed form vs quadrature") {
    const ObservationModel closed = bench();
    const ObservationModel quad = closed.as_quadrature();

    CHECK(std::abs(closed.d_func(500.0)) <= 1e-12);   // F_N -> 1, zero-mean x
    CHECK(std::abs(closed.d_func(-500.0)) <= 1e-12);  // F_N -> 0

    for (double y : {-7.0, -2.0, -0.5, 0.0, 0.5, 2.0, 7.0}) {
        CHECK(std::abs(closed.d_func(y) - quad.d_func(y)) <= 1e-8);
    }
    CHECK(closed.d_func(2.0) == doctest::Approx(-0.0816591911).epsilon(1e-8));
    CHECK(closed.d_func(-2.0) == doctest::Approx(closed.d_func(2.0)).epsilon(1e-12));
}

TEST_CASE("cross density is odd and matches quadrature") {
    const ObservationModel closed = bench();
    const ObservationModel quad = closed.as_quadrature();
    for (double y : {-5.0, -1.0, 0.7, 2.5, 9.0}) {
        CHECK(std::abs(closed.cross_density(y) - quad.cross_density(y)) <= 1e-8);
        CHECK(closed.cross_density(y) ==
              doctest::Approx(-closed.cross_density(-y)).epsilon(1e-12));
    }
}

TEST_CASE("observation variance adds signal and noise powers") {
    const ObservationModel m = bench();
    QuadratureSpec spec;
    spec.max_subdivisions = 4000;
    const double var = integrate([&](double y) { return y * y * m.obs_pdf(y); }, -kInf, kInf, spec);
    CHECK(var == doctest::Approx(17.0).epsilon(1e-6));
}

TEST_CASE("near-degenerate rates fall back to quadrature with the flag set") {
    // one noise component sigma almost equal to the signal sigma
    ObservationModel m(Law::laplace(1.0), Law::laplace_mixture({0.5, 0.5}, {1.0 + 1e-9, 3.0}),
                       EvalMode::closed_form);
    CHECK(m.degenerate_fallback());
    CHECK_FALSE(m.has_closed_form());
    CHECK(m.obs_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("gaussian pair has no closed form and uses quadrature") {
    ObservationModel m(Law::gaussian(1.0), Law::gaussian(2.0));
    CHECK_FALSE(m.has_closed_form());
    // f_Y is the centered normal density of variance 5
    const double s = std::sqrt(5.0);
    for (double y : {0.0, 1.0, 3.5}) {
        const double expect = std::exp(-0.5 * y * y / 5.0) / (s * std::sqrt(2.0 * kPi));
        CHECK(m.obs_pdf(y) == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("single-laplace noise closed form agrees with quadrature") {
    ObservationModel closed(Law::laplace(1.0), Law::laplace(2.0));
    CHECK(closed.has_closed_form());
    const ObservationModel quad = closed.as_quadrature();
    for (double y : {-3.0, 0.2, 1.5, 6.0}) {
        CHECK(std::abs(closed.obs_pdf(y) - quad.obs_pdf(y)) <= 1e-8);
        CHECK(std::abs(closed.obs_cdf(y) - quad.obs_cdf(y)) <= 1e-8);
        CHECK(std::abs(closed.d_func(y) - quad.d_func(y)) <= 1e-8);
    }
}
