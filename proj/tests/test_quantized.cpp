#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "bayesnr/bem.hpp"
#include "bayesnr/errors.hpp"
#include "bayesnr/estimator.hpp"
#include "bayesnr/quantized.hpp"
#include "bayesnr/rng.hpp"

using namespace bayesnr;

namespace {

ObservationModel bench() { return make_laplace_mixture_model(1.0, 4.0, 0.9, 0.001); }

// Independent oracle: optimal N-level quantizer of a law by dynamic
// programming over a fine grid restricted to [-span, span].
double dp_quantizer_distortion(const Law& law, int n_levels, double span, int grid) {
    std::vector<double> x(static_cast<std::size_t>(grid)), p(static_cast<std::size_t>(grid));
    const double h = 2.0 * span / (grid - 1);
    for (int i = 0; i < grid; ++i) {
        x[static_cast<std::size_t>(i)] = -span + h * i;
        p[static_cast<std::size_t>(i)] = law.pdf(x[static_cast<std::size_t>(i)]) * h;
    }
    // prefix sums for O(1) cell statistics
    std::vector<double> s0(static_cast<std::size_t>(grid) + 1, 0.0), s1 = s0, s2 = s0;
    for (int i = 0; i < grid; ++i) {
        s0[static_cast<std::size_t>(i) + 1] = s0[static_cast<std::size_t>(i)] + p[static_cast<std::size_t>(i)];
        s1[static_cast<std::size_t>(i) + 1] = s1[static_cast<std::size_t>(i)] + p[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
        s2[static_cast<std::size_t>(i) + 1] = s2[static_cast<std::size_t>(i)] + p[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    }
    auto cell_cost = [&](int a, int b) {  // grid points [a, b)
        const double m0 = s0[static_cast<std::size_t>(b)] - s0[static_cast<std::size_t>(a)];
        if (m0 <= 0.0) return 0.0;
        const double m1 = s1[static_cast<std::size_t>(b)] - s1[static_cast<std::size_t>(a)];
        const double m2 = s2[static_cast<std::size_t>(b)] - s2[static_cast<std::size_t>(a)];
        return m2 - m1 * m1 / m0;
    };

    const double big = std::numeric_limits<double>::max();
    std::vector<double> prev(static_cast<std::size_t>(grid) + 1, big), cur = prev;
    prev[0] = 0.0;
    for (int k = 1; k <= n_levels; ++k) {
        std::fill(cur.begin(), cur.end(), big);
        for (int b = 1; b <= grid; ++b) {
            for (int a = 0; a < b; ++a) {
                if (prev[static_cast<std::size_t>(a)] == big) continue;
                const double c = prev[static_cast<std::size_t>(a)] + cell_cost(a, b);
                if (c < cur[static_cast<std::size_t>(b)]) cur[static_cast<std::size_t>(b)] = c;
            }
        }
        std::swap(prev, cur);
    }
    return prev[static_cast<std::size_t>(grid)];
}

}  // namespace

TEST_CASE("partition validation and cell lookup") {
    CHECK_THROWS(Partition({1.0, 1.0}));
    CHECK_THROWS(Partition({2.0, 1.0}));
    const Partition p({-1.0, 0.5, 2.0});
    CHECK(p.cells() == 4);
    CHECK(p.cell_of(-5.0) == 0);
    CHECK(p.cell_of(-1.0) == 0);  // cells are right-closed
    CHECK(p.cell_of(-0.999) == 1);
    CHECK(p.cell_of(0.5) == 1);
    CHECK(p.cell_of(1.0) == 2);
    CHECK(p.cell_of(100.0) == 3);
}

TEST_CASE("cell moments: one-cell and symmetric two-cell partitions") {
    const ObservationModel m = bench();
    const CellMoments one = cell_moments(m, Partition(std::vector<double>{}));
    CHECK(one.r.size() == 1);
    CHECK(one.r[0] == doctest::Approx(1.0));
    CHECK(std::abs(one.theta[0]) <= 1e-12);

    const CellMoments two = cell_moments(m, Partition({0.0}));
    CHECK(two.r[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(two.r[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(two.theta[1] == doctest::Approx(-two.theta[0]).epsilon(1e-12));
}

TEST_CASE("cell moments telescope on a fine partition") {
    const ObservationModel m = bench();
    const CellMoments cm = cell_moments(m, Partition::uniform(-10.0, 10.0, 65));
    double rs = 0.0, ts = 0.0;
    for (std::size_t i = 0; i < cm.r.size(); ++i) {
        rs += cm.r[i];
        ts += cm.theta[i];
        CHECK(cm.r[i] > 0.0);
    }
    CHECK(rs == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(ts) <= 1e-9);
}

TEST_CASE("q_mmse: trivial and symmetric cases") {
    const ObservationModel m = bench();
    const QuantizedEstimator one = q_mmse(m, Partition(std::vector<double>{}));
    CHECK(one.levels.size() == 1);
    CHECK(std::abs(one.levels[0]) <= 1e-12);

    const QuantizedEstimator two = q_mmse(m, Partition({0.0}));
    CHECK(two.levels[1] == doctest::Approx(-two.levels[0]).epsilon(1e-12));
    const CellMoments cm = cell_moments(m, Partition({0.0}));
    CHECK(two.levels[1] == doctest::Approx(cm.theta[1] / 0.5).epsilon(1e-12));
}

TEST_CASE("q_mmse symmetry: symmetric model and partition mirror the levels") {
    const ObservationModel m = bench();
    const QuantizedEstimator q = q_mmse(m, Partition::uniform(-10.0, 10.0, 33));
    const std::size_t n = q.levels.size();
    for (std::size_t i = 0; i < n; ++i)
        CHECK(q.levels[i] == doctest::Approx(-q.levels[n - 1 - i]).epsilon(1e-10));
}

TEST_CASE("q_mmse equals the rectangular-basis b_mmse coefficients") {
    const ObservationModel m = bench();
    const Partition p = Partition::uniform(-10.0, 10.0, 17);
    const QuantizedEstimator q = q_mmse(m, p);
    const BemCoefficients g = b_mmse(assemble(m, BemBasis::rectangular(p)));
    for (std::size_t i = 0; i < q.levels.size(); ++i)
        CHECK(q.levels[i] == doctest::Approx(g.g[i]).epsilon(1e-12));
}

TEST_CASE("q_mmse_mse: base value and refinement monotonicity") {
    const ObservationModel m = bench();
    CHECK(q_mmse_mse(cell_moments(m, Partition(std::vector<double>{})), 1.0) ==
          doctest::Approx(1.0));

    // splitting any cell cannot raise the MSE
    const Partition coarse = Partition::uniform(-6.0, 6.0, 9);
    const double j0 = q_mmse_mse(cell_moments(m, coarse), 1.0);
    for (double split : {-6.5, -2.2, 0.37, 3.3, 7.7}) {
        std::vector<double> t = coarse.thresholds();
        t.push_back(split);
        std::sort(t.begin(), t.end());
        const double j1 = q_mmse_mse(cell_moments(m, Partition(t)), 1.0);
        CHECK(j1 <= j0 + 1e-12);
    }
}

TEST_CASE("q_mmse optimality among piecewise-constant estimators on its partition") {
    const ObservationModel m = bench();
    const Partition p = Partition::uniform(-8.0, 8.0, 17);
    const CellMoments cm = cell_moments(m, p);
    const double jq = q_mmse_mse(cm, 1.0);

    auto mse_of_levels = [&](const std::vector<double>& lv) {
        double gtheta = 0.0, eg2 = 0.0;
        for (std::size_t i = 0; i < lv.size(); ++i) {
            gtheta += lv[i] * cm.theta[i];
            eg2 += lv[i] * lv[i] * cm.r[i];
        }
        return 1.0 - 2.0 * gtheta + eg2;
    };

    const QuantizedEstimator q = q_mmse(m, p);
    CHECK(mse_of_levels(q.levels) == doctest::Approx(jq).epsilon(1e-12));

    const Estimator g = mmse_closed(m);
    CHECK(mse_of_levels(s_mmse(m, p, g).levels) >= jq - 1e-12);
    CHECK(mse_of_levels(oq_estimator(m.signal(), p).levels) >= jq - 1e-12);

    UniformStream rng(123);
    for (int t = 0; t < 1000; ++t) {
        std::vector<double> lv(q.levels.size());
        for (auto& v : lv) v = 6.0 * (rng.next() - 0.5);
        CHECK(mse_of_levels(lv) >= jq - 1e-12);
    }
}

TEST_CASE("s_mmse levels: interior midpoints, odd symmetry, q_mmse convergence") {
    const ObservationModel m = bench();
    const Estimator g = mmse_closed(m);
    const Partition p = Partition::uniform(-10.0, 10.0, 65);
    const QuantizedEstimator s = s_mmse(m, p, g);

    const auto& thr = p.thresholds();
    CHECK(s.levels[1] == doctest::Approx(g.g(0.5 * (thr[0] + thr[1]))));
    const std::size_t n = s.levels.size();
    for (std::size_t i = 0; i < n; ++i)
        CHECK(s.levels[i] == doctest::Approx(-s.levels[n - 1 - i]).epsilon(1e-10));

    // on a very fine partition both families approach g at the midpoints
    const Partition fine = Partition::uniform(-10.0, 10.0, 513);
    const QuantizedEstimator qf = q_mmse(m, fine);
    const QuantizedEstimator sf = s_mmse(m, fine, g);
    double worst = 0.0;
    for (std::size_t i = 100; i < 400; ++i)
        worst = std::max(worst, std::abs(qf.levels[i] - sf.levels[i]));
    CHECK(worst <= 2e-4);
}

TEST_CASE("lloyd_max: one and two level designs on the unit laplace") {
    const LloydMaxResult one = lloyd_max(Law::laplace(1.0), 1);
    CHECK(one.levels == std::vector<double>{0.0});

    const LloydMaxResult two = lloyd_max(Law::laplace(1.0), 2);
    CHECK(std::abs(two.partition.thresholds()[0]) <= 1e-10);
    CHECK(two.levels[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
    CHECK(two.levels[0] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-9));

    bool mono = true;
    for (std::size_t i = 1; i < two.distortion.size(); ++i)
        mono &= two.distortion[i] <= two.distortion[i - 1] + 1e-12;
    CHECK(mono);
}

TEST_CASE("lloyd_max eight-level distortion matches the grid-DP oracle") {
    Law lap = Law::laplace(1.0);
    const LloydMaxResult lm = lloyd_max(lap, 8);
    const double dp = dp_quantizer_distortion(lap, 8, 12.0, 2401);
    CHECK(lm.distortion.back() == doctest::Approx(dp).epsilon(0.0).scale(1.0).epsilon(1e-4));
    CHECK(std::abs(lm.distortion.back() - dp) <= 1e-4);
}

TEST_CASE("oq levels are nondecreasing and odd on symmetric partitions") {
    const ObservationModel m = bench();
    for (const Partition& p :
         {Partition::uniform(-10.0, 10.0, 33), lloyd_max(m.signal(), 16).partition}) {
        const QuantizedEstimator oq = oq_estimator(m.signal(), p);
        for (std::size_t i = 1; i < oq.levels.size(); ++i)
            CHECK(oq.levels[i] >= oq.levels[i - 1] - 1e-12);
        const std::size_t n = oq.levels.size();
        for (std::size_t i = 0; i < n; ++i)
            CHECK(oq.levels[i] == doctest::Approx(-oq.levels[n - 1 - i]).epsilon(1e-9));
    }

    // gaussian signal: same structure
    const Partition p = Partition::uniform(-4.0, 4.0, 9);
    const QuantizedEstimator oqg = oq_estimator(Law::gaussian(1.0), p);
    for (std::size_t i = 1; i < oqg.levels.size(); ++i)
        CHECK(oqg.levels[i] >= oqg.levels[i - 1] - 1e-12);
}

TEST_CASE("uniform_partition_for_overload hits the target and matches the clip near 10") {
    const ObservationModel m = bench();
    const Partition p = uniform_partition_for_overload(m, 17, 0.0327357);
    const double edge = p.thresholds().back();
    CHECK(edge == doctest::Approx(10.0).epsilon(1e-3));
    CHECK(2.0 * m.obs_cdf(-edge) == doctest::Approx(0.0327357).epsilon(1e-9));
    CHECK(p.thresholds().front() == doctest::Approx(-edge).epsilon(1e-12));

    // a nearly-1 target forces a tiny clip range
    const Partition tight = uniform_partition_for_overload(m, 5, 0.98);
    CHECK(tight.thresholds().back() <= 0.2);
}

TEST_CASE("optimize_overload: singleton grid, argmax contract, determinism") {
    const ObservationModel m = bench();
    const OverloadSweepResult single = optimize_overload(m, 17, {4.0});
    CHECK(single.half_range == doctest::Approx(4.0));

    const auto grid = default_overload_grid(m);
    CHECK(grid.size() == 60);
    const OverloadSweepResult best = optimize_overload(m, 17, grid);
    const double sx2 = m.sigma_x2();
    const double input_snr = sx2 / m.sigma_n2();
    for (double l : grid) {
        const double j = q_mmse_mse(cell_moments(m, Partition::uniform(-l, l, 17)), sx2);
        const double gain = ((sx2 - j) / j) / input_snr;
        CHECK(best.snr_gain >= gain - 1e-12);
    }
    const OverloadSweepResult again = optimize_overload(m, 17, grid);
    CHECK(again.half_range == best.half_range);
}

TEST_CASE("q_mmse levels maximize the rectangular-system snr") {
    const ObservationModel m = bench();
    const Partition p = Partition::uniform(-10.0, 10.0, 17);
    const BemSystem sys = assemble(m, BemBasis::rectangular(p));
    const QuantizedEstimator q = q_mmse(m, p);
    const double best = bem_snr(sys, {q.levels, "q-mmse"});

    // scaled copies tie, perturbed level vectors never exceed
    for (double a : {0.1, -2.0, 5.0}) {
        std::vector<double> lv = q.levels;
        for (auto& v : lv) v *= a;
        CHECK(bem_snr(sys, {lv, "scaled"}) == doctest::Approx(best).epsilon(1e-9));
    }
    UniformStream rng(5150);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> lv = q.levels;
        for (auto& v : lv) v += 0.05 * (rng.next() - 0.5);
        CHECK(bem_snr(sys, {lv, "perturbed"}) <= best + 1e-9);
    }
}

TEST_CASE("piecewise estimator evaluation matches its levels") {
    const ObservationModel m = bench();
    const Partition p = Partition::uniform(-2.0, 2.0, 5);
    const QuantizedEstimator q = q_mmse(m, p);
    const Estimator e = q.as_estimator();
    CHECK(e.g(-5.0) == q.levels[0]);
    CHECK(e.g(0.1) == q.levels[static_cast<std::size_t>(p.cell_of(0.1))]);
    CHECK(e.g(7.0) == q.levels[4]);
    CHECK(e.breakpoints.size() == 4);
}
