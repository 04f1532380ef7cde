#include "bayesnr/quantized.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bayesnr/errors.hpp"
#include "bayesnr/quadrature.hpp"

namespace bayesnr {

namespace {
constexpr double kMassFloor = 1e-14;
}

Partition::Partition(std::vector<double> thresholds) : thresholds_(std::move(thresholds)) {
    for (std::size_t i = 0; i + 1 < thresholds_.size(); ++i)
        if (!(thresholds_[i] < thresholds_[i + 1]))
            throw std::invalid_argument("Partition: thresholds must be strictly increasing");
}

int Partition::cell_of(double y) const {
    // first threshold >= y  ->  y lands in that cell (cells right-closed)
    const auto it = std::lower_bound(thresholds_.begin(), thresholds_.end(), y);
    return static_cast<int>(it - thresholds_.begin());
}

Partition Partition::uniform(double lo, double hi, int n_cells) {
    if (n_cells < 3) throw std::invalid_argument("Partition::uniform: needs at least 3 cells");
    if (!(lo < hi)) throw std::invalid_argument("Partition::uniform: lo < hi required");
    const int k = n_cells - 1;
    std::vector<double> t(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        t[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (k - 1);
    return Partition(std::move(t));
}

Estimator QuantizedEstimator::as_estimator() const {
    QuantizedEstimator self = *this;
    return Estimator{[self](double y) { return self(y); },
                     "piecewise-constant(" + provenance + ")", partition.thresholds()};
}

double d_func(const ObservationModel& model, double y) { return model.d_func(y); }

CellMoments cell_moments(const ObservationModel& model, const Partition& p) {
    const auto& thr = p.thresholds();
    const std::size_t n = thr.size() + 1;

    std::vector<double> F(n + 1), D(n + 1);
    F[0] = 0.0;
    D[0] = 0.0;
    F[n] = 1.0;
    D[n] = 0.0;
    for (std::size_t i = 0; i < thr.size(); ++i) {
        F[i + 1] = model.obs_cdf(thr[i]);
        D[i + 1] = model.d_func(thr[i]);
    }

    CellMoments m;
    m.closed_form = model.has_closed_form();
    m.theta.resize(n);
    m.r.resize(n);
    m.empty.resize(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        m.theta[i] = D[i + 1] - D[i];
        m.r[i] = F[i + 1] - F[i];
        if (m.r[i] < kMassFloor) m.empty[i] = true;
    }
    return m;
}

QuantizedEstimator q_mmse(const ObservationModel& model, const Partition& p) {
    const CellMoments m = cell_moments(model, p);
    std::vector<double> levels(m.theta.size(), 0.0);
    for (std::size_t i = 0; i < levels.size(); ++i)
        if (!m.empty[i]) levels[i] = m.theta[i] / m.r[i];
    return QuantizedEstimator{p, std::move(levels), "q-mmse"};
}

double q_mmse_mse(const CellMoments& m, double sigma_x2) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m.theta.size(); ++i)
        if (!m.empty[i]) acc += m.theta[i] * m.theta[i] / m.r[i];
    return sigma_x2 - acc;
}

QuantizedEstimator s_mmse(const ObservationModel& /*model*/, const Partition& p,
                          const Estimator& g_smooth) {
    const auto& thr = p.thresholds();
    if (thr.empty()) throw std::invalid_argument("s_mmse: needs at least one finite threshold");
    const std::size_t n = thr.size() + 1;

    double mean_width = 1.0;
    if (thr.size() >= 2) {
        mean_width = (thr.back() - thr.front()) / static_cast<double>(thr.size() - 1);
    }

    std::vector<double> levels(n);
    levels[0] = g_smooth.g(thr.front() - 0.5 * mean_width);
    levels[n - 1] = g_smooth.g(thr.back() + 0.5 * mean_width);
    for (std::size_t i = 1; i + 1 < n; ++i)
        levels[i] = g_smooth.g(0.5 * (thr[i - 1] + thr[i]));
    return QuantizedEstimator{p, std::move(levels), "s-mmse"};
}

LloydMaxResult lloyd_max(const Law& law, int n_levels) {
    if (n_levels < 1) throw std::invalid_argument("lloyd_max: n_levels >= 1");

    const double var = law.variance();
    LloydMaxResult out;
    if (n_levels == 1) {
        out.partition = Partition(std::vector<double>{});
        out.levels = {0.0};
        out.distortion = {var};
        return out;
    }

    std::vector<double> levels(static_cast<std::size_t>(n_levels));
    for (int i = 1; i <= n_levels; ++i)
        levels[static_cast<std::size_t>(i - 1)] =
            law.quantile(static_cast<double>(i) / (n_levels + 1));

    auto cell_stats = [&law](double a, double b, double& mass, double& mom) {
        const double fa = std::isinf(a) ? 0.0 : law.cdf(a);
        const double fb = std::isinf(b) ? 1.0 : law.cdf(b);
        const double ma = std::isinf(a) ? 0.0 : law.partial_moment(a);
        const double mb = std::isinf(b) ? 0.0 : law.partial_moment(b);
        mass = fb - fa;
        mom = mb - ma;
    };

    // The fixed point converges linearly with a rate that degrades as the
    // level count grows (~27k rounds at 127 levels), so the cap leaves
    // headroom; each round is O(n_levels) closed-form moment lookups.
    constexpr int kMaxIter = 300000;
    constexpr double kTol = 1e-10;
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<double> thr(static_cast<std::size_t>(n_levels - 1));
    double delta = inf;
    for (int it = 0; it < kMaxIter; ++it) {
        for (std::size_t i = 0; i + 1 < levels.size(); ++i)
            thr[i] = 0.5 * (levels[i] + levels[i + 1]);

        double distortion = var;
        delta = 0.0;
        for (std::size_t i = 0; i < levels.size(); ++i) {
            const double a = (i == 0) ? -inf : thr[i - 1];
            const double b = (i + 1 == levels.size()) ? inf : thr[i];
            double mass, mom;
            cell_stats(a, b, mass, mom);
            if (mass > kMassFloor) {
                const double next = mom / mass;
                delta = std::max(delta, std::abs(next - levels[i]));
                levels[i] = next;
                distortion -= next * next * mass;
            }
        }
        out.distortion.push_back(distortion);
        out.iterations = it + 1;
        if (delta < kTol) break;
    }
    if (delta > 1e-6)
        throw NonConvergent("lloyd_max: level moves still " + std::to_string(delta) +
                            " after iteration cap");

    for (std::size_t i = 0; i + 1 < levels.size(); ++i)
        thr[i] = 0.5 * (levels[i] + levels[i + 1]);
    out.partition = Partition(thr);
    out.levels = std::move(levels);
    return out;
}

QuantizedEstimator oq_estimator(const Law& signal, const Partition& p) {
    const auto& thr = p.thresholds();
    const std::size_t n = thr.size() + 1;
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<double> levels(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = (i == 0) ? -inf : thr[i - 1];
        const double b = (i == n - 1) ? inf : thr[i];
        const double mass = (std::isinf(b) ? 1.0 : signal.cdf(b)) -
                            (std::isinf(a) ? 0.0 : signal.cdf(a));
        if (mass > kMassFloor) {
            const double mom = (std::isinf(b) ? 0.0 : signal.partial_moment(b)) -
                               (std::isinf(a) ? 0.0 : signal.partial_moment(a));
            levels[i] = mom / mass;
        } else {
            // zero-mass cell: pin to the nearest finite edge to keep levels ordered
            levels[i] = std::isinf(a) ? b : a;
        }
    }
    return QuantizedEstimator{p, std::move(levels), "oq"};
}

Partition uniform_partition_for_overload(const ObservationModel& model, int n_cells,
                                         double p_ol) {
    if (n_cells < 3) throw std::invalid_argument("uniform_partition_for_overload: n_cells >= 3");
    if (!(p_ol > 0.0 && p_ol < 1.0))
        throw std::invalid_argument("uniform_partition_for_overload: p_ol in (0,1)");

    auto f = [&](double L) { return 2.0 * model.obs_cdf(-L) - p_ol; };
    const double sy = model.sigma_y();
    double hi = sy;
    while (f(hi) > 0.0 && hi < 1e6 * sy) hi *= 2.0;
    const double L = find_root(f, 1e-12, hi, 1e-11 * sy);
    return Partition::uniform(-L, L, n_cells);
}

OverloadSweepResult optimize_overload(const ObservationModel& model, int n_cells,
                                      const std::vector<double>& l_grid) {
    if (l_grid.empty()) throw std::invalid_argument("optimize_overload: empty grid");
    const double sx2 = model.sigma_x2();
    const double input_snr = sx2 / model.sigma_n2();

    OverloadSweepResult best;
    best.snr_gain = -1.0;
    std::vector<double> grid = l_grid;
    std::sort(grid.begin(), grid.end());
    for (double L : grid) {
        Partition p = Partition::uniform(-L, L, n_cells);
        const CellMoments m = cell_moments(model, p);
        const double j = q_mmse_mse(m, sx2);
        const double snr = (sx2 - j) / j;
        const double gain = snr / input_snr;
        if (gain > best.snr_gain) {  // strict: ties keep the smaller L
            best.snr_gain = gain;
            best.partition = std::move(p);
            best.half_range = L;
        }
    }
    return best;
}

std::vector<double> default_overload_grid(const ObservationModel& model) {
    const double sy = model.sigma_y();
    const double lo = 0.5 * sy, hi = 10.0 * sy;
    constexpr int kPoints = 60;
    std::vector<double> g(kPoints);
    for (int i = 0; i < kPoints; ++i)
        g[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, static_cast<double>(i) / (kPoints - 1));
    return g;
}

}  // namespace bayesnr
