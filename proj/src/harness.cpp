#include "bayesnr/harness.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "bayesnr/bem.hpp"
#include "bayesnr/errors.hpp"
#include "bayesnr/estimator.hpp"
#include "bayesnr/linalg.hpp"
#include "bayesnr/parallel.hpp"
#include "bayesnr/quantized.hpp"
#include "bayesnr/rng.hpp"

namespace bayesnr {

using nlohmann::json;

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// ----------------------------------------------------------------- config

namespace {

void expect_positive(double v, const std::string& field) {
    if (!(v > 0.0)) throw ConfigError("config: " + field + " must be positive");
}

template <typename T>
void read_if(const json& j, const char* key, T& into) {
    if (j.contains(key)) into = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    ExperimentConfig c;
    try {
        if (j.contains("signal")) {
            const json& s = j.at("signal");
            read_if(s, "type", c.signal.type);
            read_if(s, "sigma_x", c.signal.sigma_x);
        }
        if (j.contains("noise")) {
            const json& n = j.at("noise");
            read_if(n, "type", c.noise.type);
            read_if(n, "sigma_n", c.noise.sigma_n);
            read_if(n, "p0", c.noise.p0);
            read_if(n, "R_pow", c.noise.r_pow);
            read_if(n, "weights", c.noise.weights);
            read_if(n, "sigmas", c.noise.sigmas);
        }
        if (j.contains("quantizer")) {
            const json& q = j.at("quantizer");
            read_if(q, "kind", c.quantizer.kind);
            read_if(q, "N", c.quantizer.n_cells);
            read_if(q, "y_lo", c.quantizer.y_lo);
            read_if(q, "y_hi", c.quantizer.y_hi);
            read_if(q, "p_ol", c.quantizer.p_ol);
            read_if(q, "L_grid", c.quantizer.l_grid);
        }
        if (j.contains("sweep")) {
            const json& s = j.at("sweep");
            read_if(s, "min_db", c.sweep.min_db);
            read_if(s, "max_db", c.sweep.max_db);
            read_if(s, "step_db", c.sweep.step_db);
            read_if(s, "optimized_N", c.sweep.optimized_n);
        }
        if (j.contains("mc")) {
            const json& m = j.at("mc");
            read_if(m, "samples", c.mc.samples);
            read_if(m, "seed", c.mc.seed);
        }
        if (j.contains("grid")) {
            const json& g = j.at("grid");
            read_if(g, "y_min", c.grid.y_min);
            read_if(g, "y_max", c.grid.y_max);
            read_if(g, "step", c.grid.step);
        }
        read_if(j, "out", c.out_dir);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    expect_positive(c.signal.sigma_x, "signal.sigma_x");
    expect_positive(c.noise.sigma_n, "noise.sigma_n");
    if (c.noise.p0 < 0.0 || c.noise.p0 > 1.0) throw ConfigError("config: noise.p0 outside [0,1]");
    expect_positive(c.noise.r_pow, "noise.R_pow");
    for (int n : c.quantizer.n_cells)
        if (n < 1) throw ConfigError("config: quantizer.N entries must be >= 1");
    if (c.quantizer.n_cells.empty()) throw ConfigError("config: quantizer.N is empty");
    if (!(c.sweep.step_db > 0.0)) throw ConfigError("config: sweep.step_db must be positive");
    if (!(c.sweep.min_db <= c.sweep.max_db)) throw ConfigError("config: sweep range is empty");
    if (c.mc.samples < 1) throw ConfigError("config: mc.samples must be >= 1");
    expect_positive(c.grid.step, "grid.step");
    if (!(c.grid.y_min < c.grid.y_max)) throw ConfigError("config: grid range is empty");
    if (!(c.quantizer.p_ol > 0.0 && c.quantizer.p_ol < 1.0))
        throw ConfigError("config: quantizer.p_ol outside (0,1)");
    return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string ExperimentConfig::to_json_text() const {
    json j;
    j["signal"] = {{"type", signal.type}, {"sigma_x", signal.sigma_x}};
    j["noise"] = {{"type", noise.type},  {"sigma_n", noise.sigma_n}, {"p0", noise.p0},
                  {"R_pow", noise.r_pow}, {"weights", noise.weights}, {"sigmas", noise.sigmas}};
    j["quantizer"] = {{"kind", quantizer.kind}, {"N", quantizer.n_cells},
                      {"y_lo", quantizer.y_lo}, {"y_hi", quantizer.y_hi},
                      {"p_ol", quantizer.p_ol}, {"L_grid", quantizer.l_grid}};
    j["sweep"] = {{"min_db", sweep.min_db}, {"max_db", sweep.max_db},
                  {"step_db", sweep.step_db}, {"optimized_N", sweep.optimized_n}};
    j["mc"] = {{"samples", mc.samples}, {"seed", mc.seed}};
    j["grid"] = {{"y_min", grid.y_min}, {"y_max", grid.y_max}, {"step", grid.step}};
    j["out"] = out_dir;
    return j.dump(2) + "\n";
}

Law ExperimentConfig::make_signal() const {
    if (signal.type == "laplace") return Law::laplace(signal.sigma_x);
    if (signal.type == "gaussian") return Law::gaussian(signal.sigma_x);
    throw ConfigError("config: unknown signal.type '" + signal.type + "'");
}

Law ExperimentConfig::make_noise(double sigma_n_override) const {
    const double sn = sigma_n_override;
    if (noise.type == "laplace") return Law::laplace(sn);
    if (noise.type == "gaussian") return Law::gaussian(sn);

    std::vector<double> w = noise.weights;
    std::vector<double> s = noise.sigmas;
    if (s.empty()) {
        w = {noise.p0, 1.0 - noise.p0};
        s = mixture_sigmas_from_ratio(sn, noise.p0, noise.r_pow);
    } else if (sigma_n_override != noise.sigma_n) {
        // rescale explicit components to the requested total power
        double var = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) var += w[i] * s[i] * s[i];
        const double k = sn / std::sqrt(var);
        for (double& v : s) v *= k;
    }
    if (noise.type == "laplace-mixture") return Law::laplace_mixture(w, s);
    if (noise.type == "gaussian-mixture") return Law::gaussian_mixture(w, s);
    throw ConfigError("config: unknown noise.type '" + noise.type + "'");
}

ObservationModel ExperimentConfig::make_model() const {
    return ObservationModel(make_signal(), make_noise(noise.sigma_n));
}

ObservationModel ExperimentConfig::model_at_snr_db(double snr_db) const {
    const double sx2 = signal.sigma_x * signal.sigma_x;
    const double sn = std::sqrt(sx2 * std::pow(10.0, -snr_db / 10.0));
    return ObservationModel(make_signal(), make_noise(sn));
}

// ------------------------------------------------------------------ curve

namespace {

Partition design_partition(const ExperimentConfig& cfg, const ObservationModel& model, int n) {
    const auto& q = cfg.quantizer;
    if (q.kind == "uniform") return Partition::uniform(q.y_lo, q.y_hi, n);
    if (q.kind == "lloyd-max") return lloyd_max(model.signal(), n).partition;
    if (q.kind == "uniform-overload") return uniform_partition_for_overload(model, n, q.p_ol);
    if (q.kind == "sweep") {
        const auto grid = q.l_grid.empty() ? default_overload_grid(model) : q.l_grid;
        return optimize_overload(model, n, grid).partition;
    }
    throw ConfigError("config: unknown quantizer.kind '" + q.kind + "'");
}

Estimator smooth_mmse(const ObservationModel& model) {
    return model.has_closed_form() ? mmse_closed(model) : mmse_numeric(model);
}

struct QuantReport {
    double gain_db;
    double mse;
};

// Exact report of a piecewise-constant estimator from its cell moments:
// K = g.theta / sx2, E{g^2} = sum g_i^2 r_i.
QuantReport quant_report(const QuantizedEstimator& e, const CellMoments& m, double sx2,
                         double input_snr) {
    double gtheta = 0.0, eg2 = 0.0;
    for (std::size_t i = 0; i < e.levels.size(); ++i) {
        gtheta += e.levels[i] * m.theta[i];
        eg2 += e.levels[i] * e.levels[i] * m.r[i];
    }
    const double k = gtheta / sx2;
    const double noise = std::max(eg2 - k * k * sx2, 1e-300);
    const double snr = k * k * sx2 / noise;
    return {10.0 * std::log10(snr / input_snr), sx2 - 2.0 * gtheta + eg2};
}

}  // namespace

std::string run_curve(const ExperimentConfig& cfg) {
    const ObservationModel model = cfg.make_model();
    const Estimator g = smooth_mmse(model);

    std::vector<QuantizedEstimator> qs, ss;
    for (int n : cfg.quantizer.n_cells) {
        Partition p = design_partition(cfg, model, n);
        qs.push_back(q_mmse(model, p));
        ss.push_back(s_mmse(model, p, g));
    }

    std::ostringstream out;
    out << "y,g_mmse";
    for (std::size_t k = 0; k < qs.size(); ++k)
        out << ",g_qmmse_N" << cfg.quantizer.n_cells[k];
    for (std::size_t k = 0; k < ss.size(); ++k)
        out << ",g_smmse_N" << cfg.quantizer.n_cells[k];
    out << "\n";

    const long steps = std::lround((cfg.grid.y_max - cfg.grid.y_min) / cfg.grid.step);
    for (long i = 0; i <= steps; ++i) {
        const double y = cfg.grid.y_min + cfg.grid.step * static_cast<double>(i);
        out << csv_num(y) << "," << csv_num(g.g(y));
        for (const auto& q : qs) out << "," << csv_num(q(y));
        for (const auto& s : ss) out << "," << csv_num(s(y));
        out << "\n";
    }
    return out.str();
}

// ------------------------------------------------------------------ sweep

std::string run_sweep(const ExperimentConfig& cfg) {
    const double sx2 = cfg.signal.sigma_x * cfg.signal.sigma_x;
    const Law signal = cfg.make_signal();

    // Non-uniform partitions come from the signal-law quantizer design and
    // are shared across the sweep; the uniform family reuses their overload
    // edges so both versions clip identically.
    std::vector<Partition> nu, uni;
    for (int n : cfg.quantizer.n_cells) {
        Partition p = lloyd_max(signal, n).partition;
        nu.push_back(p);
        uni.push_back(Partition::uniform(p.thresholds().front(), p.thresholds().back(), n));
    }

    std::ostringstream header;
    header << "input_snr_db,gain_db_mmse,mse_mmse";
    for (int n : cfg.quantizer.n_cells) {
        header << ",p_ol_lm_N" << n;
        for (const char* est : {"qmmse", "smmse", "oq"})
            for (const char* fam : {"u", "nu"})
                header << ",gain_db_" << est << "_" << fam << "_N" << n
                       << ",mse_" << est << "_" << fam << "_N" << n;
    }
    if (cfg.sweep.optimized_n > 0)
        header << ",p_ol_opt_N" << cfg.sweep.optimized_n
               << ",gain_db_qmmse_opt_N" << cfg.sweep.optimized_n
               << ",mse_qmmse_opt_N" << cfg.sweep.optimized_n;

    const int points =
        static_cast<int>(std::floor((cfg.sweep.max_db - cfg.sweep.min_db) / cfg.sweep.step_db + 0.5)) + 1;
    std::vector<std::string> rows(static_cast<std::size_t>(points));

    parallel_for(points, [&](int i) {
        const double snr_db = cfg.sweep.min_db + cfg.sweep.step_db * i;
        const ObservationModel model = cfg.model_at_snr_db(snr_db);
        const double input_snr = sx2 / model.sigma_n2();
        const Estimator g = smooth_mmse(model);

        std::ostringstream row;
        row << csv_num(snr_db);

        const EstimatorReport rm = report(model, g);
        row << "," << csv_num(10.0 * std::log10(rm.snr / input_snr)) << "," << csv_num(rm.mse);

        for (std::size_t k = 0; k < nu.size(); ++k) {
            const double edge = nu[k].thresholds().back();
            row << "," << csv_num(2.0 * model.obs_cdf(-edge));

            const CellMoments mu = cell_moments(model, uni[k]);
            const CellMoments mn = cell_moments(model, nu[k]);
            const QuantizedEstimator qu = q_mmse(model, uni[k]);
            const QuantizedEstimator qn = q_mmse(model, nu[k]);
            const QuantizedEstimator su = s_mmse(model, uni[k], g);
            const QuantizedEstimator sn = s_mmse(model, nu[k], g);
            const QuantizedEstimator ou = oq_estimator(model.signal(), uni[k]);
            const QuantizedEstimator on = oq_estimator(model.signal(), nu[k]);
            const std::array<std::pair<const QuantizedEstimator*, const CellMoments*>, 6> items{
                {{&qu, &mu}, {&qn, &mn}, {&su, &mu}, {&sn, &mn}, {&ou, &mu}, {&on, &mn}}};
            for (const auto& [e, m] : items) {
                const QuantReport r = quant_report(*e, *m, sx2, input_snr);
                row << "," << csv_num(r.gain_db) << "," << csv_num(r.mse);
            }
        }

        if (cfg.sweep.optimized_n > 0) {
            const auto grid = cfg.quantizer.l_grid.empty() ? default_overload_grid(model)
                                                           : cfg.quantizer.l_grid;
            const OverloadSweepResult opt = optimize_overload(model, cfg.sweep.optimized_n, grid);
            const CellMoments mo = cell_moments(model, opt.partition);
            const QuantizedEstimator qo = q_mmse(model, opt.partition);
            const QuantReport r = quant_report(qo, mo, sx2, input_snr);
            row << "," << csv_num(2.0 * model.obs_cdf(-opt.half_range)) << ","
                << csv_num(r.gain_db) << "," << csv_num(r.mse);
        }
        rows[static_cast<std::size_t>(i)] = row.str();
    });

    std::ostringstream out;
    out << header.str() << "\n";
    for (const auto& r : rows) out << r << "\n";
    return out.str();
}

// --------------------------------------------------------------------- mc

std::string run_mc(const ExperimentConfig& cfg) {
    const ObservationModel model = cfg.make_model();
    const double input_snr = model.sigma_x2() / model.sigma_n2();

    std::vector<std::pair<std::string, Estimator>> ests;
    ests.emplace_back("identity", identity_estimator());
    ests.emplace_back("mmse", smooth_mmse(model));
    {
        const int n = cfg.quantizer.n_cells.front();
        Partition p = design_partition(cfg, model, n);
        ests.emplace_back("qmmse_N" + std::to_string(n), q_mmse(model, p).as_estimator());
    }

    std::ostringstream out;
    out << "estimator,samples,seed,k_hat,k_se,mse_hat,mse_se,snr_hat,snr_se,gain_db_hat\n";
    for (const auto& [name, est] : ests) {
        const McEstimatorReport r = report_mc(model, est, cfg.mc.seed, cfg.mc.samples);
        out << name << "," << cfg.mc.samples << "," << cfg.mc.seed << ","
            << csv_num(r.value.gain) << "," << csv_num(r.se_gain) << ","
            << csv_num(r.value.mse) << "," << csv_num(r.se_mse) << ","
            << csv_num(r.value.snr) << "," << csv_num(r.se_snr) << ","
            << csv_num(10.0 * std::log10(r.value.snr / input_snr)) << "\n";
    }
    return out.str();
}

// -------------------------------------------------------------- thresholds

std::string run_thresholds(const ExperimentConfig& cfg) {
    const ObservationModel model = cfg.make_model();
    std::ostringstream out;
    out << "kind,N,index,threshold\n";
    for (int n : cfg.quantizer.n_cells) {
        const Partition p = design_partition(cfg, model, n);
        const auto& t = p.thresholds();
        for (std::size_t i = 0; i < t.size(); ++i)
            out << cfg.quantizer.kind << "," << n << "," << (i + 1) << "," << csv_num(t[i])
                << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------- validate

namespace {

struct Checker {
    int passed = 0;
    int failed = 0;
    std::ostringstream text;

    void check(const std::string& name, bool ok, const std::string& detail = "") {
        if (ok) {
            ++passed;
            text << "ok " << name << "\n";
        } else {
            ++failed;
            text << "FAIL " << name << (detail.empty() ? "" : " (" + detail + ")") << "\n";
        }
    }
};

}  // namespace

ValidationOutcome run_validate() {
    Checker c;
    const double inf = std::numeric_limits<double>::infinity();

    // quadrature kernels
    {
        Law lap = Law::laplace(1.0);
        const double mass = integrate([&](double x) { return lap.pdf(x); }, -inf, inf);
        c.check("quadrature.laplace_pdf_normalized", std::abs(mass - 1.0) <= 1e-9);
        Law gau = Law::gaussian(2.0);
        const double var = integrate([&](double x) { return x * x * gau.pdf(x); }, -inf, inf);
        c.check("quadrature.gaussian_second_moment", std::abs(var - 4.0) <= 1e-8);
        const double r = find_root([](double x) { return x - 3.0; }, 0.0, 10.0, 1e-12);
        c.check("quadrature.find_root_linear", std::abs(r - 3.0) <= 1e-11);
    }

    // eigen/solve kernels on a seeded random symmetric system
    {
        UniformStream rng(7);
        const int n = 8;
        SymMatrix m(n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) m.set(i, j, rng.next() - 0.5);
        const EigResult e = sym_eig(m);
        double resid = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int k = 0; k < n; ++k)
                    s += e.vectors[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] *
                         e.values[static_cast<std::size_t>(k)] *
                         e.vectors[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
                resid = std::max(resid, std::abs(s - m(i, j)));
            }
        c.check("linalg.eig_reconstruction", resid <= 1e-9 * std::max(m.max_abs(), 1.0));

        SymMatrix spd(n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) spd.set(i, j, m(i, j) * 0.1);
        for (int i = 0; i < n; ++i) spd.set(i, i, spd(i, i) + 2.0);
        std::vector<double> b(static_cast<std::size_t>(n));
        for (auto& v : b) v = rng.next();
        const auto x = solve_spd(spd, b);
        const auto ax = spd.multiply(x);
        double rmax = 0.0;
        for (int i = 0; i < n; ++i) rmax = std::max(rmax, std::abs(ax[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)]));
        c.check("linalg.solve_spd_residual", rmax <= 1e-9);
    }

    // rng determinism
    {
        UniformStream a(42), b(42), d(43);
        bool same = true, differ = false;
        for (int i = 0; i < 1000; ++i) {
            const double va = a.next();
            if (va != b.next()) same = false;
            if (va != d.next()) differ = true;
        }
        c.check("rng.seed_determinism", same);
        c.check("rng.seed_sensitivity", differ);
    }

    // closed forms vs the defining integrals on the benchmark model
    {
        const ObservationModel closed = make_laplace_mixture_model(1.0, 4.0, 0.9, 0.001);
        const ObservationModel quad = closed.as_quadrature();
        bool ok_f = true, ok_cdf = true, ok_d = true, ok_g = true;
        const Estimator gc = mmse_closed(closed);
        const Estimator gn = mmse_numeric(closed);
        for (double y : {-6.0, -2.0, -0.3, 0.0, 0.7, 3.0, 9.0}) {
            ok_f &= std::abs(closed.obs_pdf(y) - quad.obs_pdf(y)) <= 1e-8;
            ok_cdf &= std::abs(closed.obs_cdf(y) - quad.obs_cdf(y)) <= 1e-8;
            ok_d &= std::abs(closed.d_func(y) - quad.d_func(y)) <= 1e-8;
            if (y != 0.0) ok_g &= std::abs(gc.g(y) - gn.g(y)) <= 1e-6;
        }
        c.check("observation.pdf_closed_vs_quadrature", ok_f);
        c.check("observation.cdf_closed_vs_quadrature", ok_cdf);
        c.check("observation.d_closed_vs_quadrature", ok_d);
        c.check("estimator.mmse_closed_vs_numeric", ok_g);
        c.check("observation.overload_at_10",
                std::abs(2.0 * closed.obs_cdf(-10.0) - 0.0327357) <= 5e-6);

        // Table-I identities through the closed-form-model report
        const EstimatorReport r = report(closed, gc);
        const double k = r.gain;
        c.check("estimator.identity_output_power",
                std::abs(r.output_power - k * closed.sigma_x2()) <= 1e-6 * closed.sigma_x2());
        c.check("estimator.identity_mse",
                std::abs(r.mse - (1.0 - k) * closed.sigma_x2()) <= 1e-6 * closed.sigma_x2());
        c.check("estimator.identity_snr",
                std::abs(r.snr - k / (1.0 - k)) <= 1e-6 * (k / (1.0 - k)));

        // equivalence of the rectangular BEM route and the quantized route
        const Partition p = Partition::uniform(-10.0, 10.0, 17);
        const BemSystem sys = assemble(closed, BemBasis::rectangular(p));
        const BemCoefficients gb = b_mmse(sys);
        const QuantizedEstimator qe = q_mmse(closed, p);
        double dmax = 0.0;
        for (std::size_t i = 0; i < qe.levels.size(); ++i)
            dmax = std::max(dmax, std::abs(qe.levels[i] - gb.g[i]));
        c.check("bem.qmmse_equals_bmmse", dmax <= 1e-12);

        const BemCoefficients gs = b_msnr_sherman(sys, closed.sigma_x2() - bem_quality(sys));
        double smax = 0.0;
        for (std::size_t i = 0; i < gs.g.size(); ++i)
            smax = std::max(smax, std::abs(gs.g[i] - gb.g[i]));
        c.check("bem.sherman_route_coincidence", smax <= 1e-10 * (1.0 + std::abs(gb.g[0])));

        const double s1 = bem_snr(sys, gb);
        const double s2 = bem_snr(sys, b_ummse(sys));
        const double s3 = bem_snr(sys, b_mg(sys, 0.37));
        const double s4 = bem_snr(sys, b_msnr_eig(sys));
        const double smin = std::min(std::min(s1, s2), std::min(s3, s4));
        const double smax2 = std::max(std::max(s1, s2), std::max(s3, s4));
        c.check("bem.four_designs_share_snr", (smax2 - smin) <= 1e-9 * smax2);
    }

    // quantizer design
    {
        const LloydMaxResult lm = lloyd_max(Law::laplace(1.0), 2);
        c.check("quantized.lloyd_max_two_level",
                std::abs(lm.levels[1] - 1.0 / std::sqrt(2.0)) <= 1e-9 &&
                    std::abs(lm.partition.thresholds()[0]) <= 1e-12);
        bool mono = true;
        for (std::size_t i = 1; i < lm.distortion.size(); ++i)
            mono &= lm.distortion[i] <= lm.distortion[i - 1] + 1e-12;
        c.check("quantized.lloyd_max_distortion_monotone", mono);
    }

    // CSV determinism on a small curve
    {
        ExperimentConfig cfg;
        cfg.quantizer.kind = "uniform";
        cfg.quantizer.n_cells = {9};
        cfg.grid = {0.0, 2.0, 0.5};
        const std::string a = run_curve(cfg);
        const std::string b = run_curve(cfg);
        c.check("harness.curve_deterministic", a == b);
        ExperimentConfig rt = ExperimentConfig::from_json_text(cfg.to_json_text());
        c.check("harness.config_round_trip", rt.to_json_text() == cfg.to_json_text());
    }

    ValidationOutcome out;
    out.passed = c.passed;
    out.failed = c.failed;
    c.text << "{\"passed\":" << c.passed << ",\"failed\":" << c.failed << "}\n";
    out.text = c.text.str();
    return out;
}

}  // namespace bayesnr
