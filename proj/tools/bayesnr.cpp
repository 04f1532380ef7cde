#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bayesnr/errors.hpp"
#include "bayesnr/harness.hpp"

namespace {

// exit codes: 0 ok, 1 config error, 2 numerical failure, 3 validation failure
constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kNumericalError = 2;
constexpr int kValidationError = 3;

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw bayesnr::ConfigError("cannot open output file " + path.string());
    out << content;
}

int run_one(const std::string& cmd, const std::string& config_path, const std::string& out_dir) {
    using namespace bayesnr;
    ExperimentConfig cfg;
    try {
        cfg = ExperimentConfig::from_file(config_path);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    }
    const std::filesystem::path dir = out_dir.empty() ? cfg.out_dir : out_dir;
    std::filesystem::create_directories(dir);

    try {
        if (cmd == "curve") {
            write_file(dir / "curve.csv", run_curve(cfg));
            std::cout << (dir / "curve.csv").string() << "\n";
        } else if (cmd == "sweep") {
            write_file(dir / "sweep.csv", run_sweep(cfg));
            std::cout << (dir / "sweep.csv").string() << "\n";
        } else if (cmd == "mc") {
            write_file(dir / "mc.csv", run_mc(cfg));
            std::cout << (dir / "mc.csv").string() << "\n";
        } else if (cmd == "thresholds") {
            write_file(dir / "thresholds.csv", run_thresholds(cfg));
            std::cout << (dir / "thresholds.csv").string() << "\n";
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kNumericalError;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MMSE / max-SNR estimators for additive non-Gaussian channels"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;

    auto add_runner = [&](const std::string& name, const std::string& desc) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("config", config_path, "JSON experiment config")->required();
        sub->add_option("--out", out_dir, "output directory (overrides config)");
        return sub;
    };

    add_runner("curve", "estimator curves over the y grid -> curve.csv");
    add_runner("sweep", "SNR-gain and MSE sweep over input SNR -> sweep.csv");
    add_runner("mc", "Monte-Carlo estimates of the analytic reports -> mc.csv");
    add_runner("thresholds", "print designed partitions -> thresholds.csv");
    app.add_subcommand("validate", "run the built-in self-check suite");

    CLI11_PARSE(app, argc, argv);

    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "validate") {
        const bayesnr::ValidationOutcome v = bayesnr::run_validate();
        std::cout << v.text;
        return v.failed == 0 ? kOk : kValidationError;
    }
    return run_one(cmd, config_path, out_dir);
}
