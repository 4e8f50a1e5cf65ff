// Command-line front end: single-configuration metrics, sweeps, covariance
// tables, Wigner grids, Monte Carlo experiment generation, offline
// re-heralding and maximum-likelihood tomography.
//
// Exit codes: 0 success, 2 configuration/usage error, 3 numerical failure.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cloner/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cloner;

namespace {

constexpr const char* kVersion = "0.1.0";

int log_level() {
    const char* env = std::getenv("CLONER_LOG");
    if (!env) return 0;
    const std::string v(env);
    if (v == "debug") return 2;
    if (v == "info") return 1;
    return 0;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[cloner] " << msg << "\n";
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const std::string& config_path, std::uint64_t seed,
                    json extra = json::object()) {
    json manifest{
        {"command", command},
        {"config_path", config_path},
        {"output_directory", out_dir.string()},
        {"seed", seed},
        {"tool_version", kVersion},
    };
    for (auto& [k, v] : extra.items()) manifest[k] = v;
    io::write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

std::string read_input_file(const std::string& path) {
    if (!fs::exists(path))
        throw std::invalid_argument("input file not found: " + path);
    return io::read_text(path);
}

ClonerConfig load_config(const std::string& path, int ring_points_override) {
    json j;
    try {
        j = json::parse(read_input_file(path));
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config parse error in " + path + ": " + e.what());
    }
    ClonerConfig cfg = io::config_from_json(j);
    if (ring_points_override > 0) {
        cfg.ring_points = ring_points_override;
        cfg.validate();
    }
    return cfg;
}

json metrics_json(const HeraldedOutput& out, const ClonerConfig& cfg) {
    const CovarianceReport cov = covariance_matrix(out);
    json j{
        {"fidelity", average_clone_fidelity(out, cfg.alpha)},
        {"success_probability", out.success_probability},
        {"covariances", {{"cov_x1x2", cov.cov_x1x2},
                         {"cov_p1p2", cov.cov_p1p2},
                         {"cov_x1p2", cov.cov_x1p2},
                         {"cov_p1x2", cov.cov_p1x2}}},
    };
    if (std::abs(cfg.alpha) > 0.0) j["gain"] = amplitude_gain(out, cfg.alpha);
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase-reference-free probabilistic cloner simulator"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string config_path, spec_path, out_dir = ".", data_dir, schedule = "uniform";
    std::uint64_t seed = 0;
    std::int64_t n_pulses = 100000;
    int threads = 0, fock_dim = 0, ring_points = 0;
    int threshold = 0, m_max = 5, clone_index = 1, max_iters = 2000, period = 1000;
    int grid_points = 241;
    double grid_half = 6.0, tol = 1e-9;

    app.add_option("--threads", threads, "worker threads (0 = auto)");

    auto* cmd_clone = app.add_subcommand("clone", "metrics for one configuration");
    cmd_clone->add_option("--config", config_path, "ClonerConfig JSON")->required();
    cmd_clone->add_option("--out", out_dir, "output directory");
    cmd_clone->add_option("--ring-points", ring_points, "ring discretization override");

    auto* cmd_sweep = app.add_subcommand("sweep", "fidelity/success sweep over (alpha, M)");
    cmd_sweep->add_option("--spec", spec_path, "SweepSpec JSON")->required();
    cmd_sweep->add_option("--out", out_dir, "output directory");

    auto* cmd_covar = app.add_subcommand("covar", "covariance table over thresholds");
    cmd_covar->add_option("--config", config_path, "ClonerConfig JSON")->required();
    cmd_covar->add_option("--m-max", m_max, "largest threshold");
    cmd_covar->add_option("--out", out_dir, "output directory");
    cmd_covar->add_option("--ring-points", ring_points, "ring discretization override");

    auto* cmd_wigner = app.add_subcommand("wigner", "Wigner grid of a single clone");
    cmd_wigner->add_option("--config", config_path, "ClonerConfig JSON")->required();
    cmd_wigner->add_option("--m", threshold, "heralding threshold");
    cmd_wigner->add_option("--grid-half", grid_half, "half-width of the square grid");
    cmd_wigner->add_option("--grid-points", grid_points, "points per axis");
    cmd_wigner->add_option("--out", out_dir, "output directory");
    cmd_wigner->add_option("--ring-points", ring_points, "ring discretization override");

    auto* cmd_mc = app.add_subcommand("mc", "Monte Carlo experiment emulation");
    cmd_mc->add_option("--config", config_path, "ClonerConfig JSON")->required();
    cmd_mc->add_option("--pulses", n_pulses, "number of pulses");
    cmd_mc->add_option("--seed", seed, "RNG seed");
    cmd_mc->add_option("--schedule", schedule, "LO schedule: harmonic|uniform|fourpoint");
    cmd_mc->add_option("--period", period, "harmonic schedule period in pulses");
    cmd_mc->add_option("--out", out_dir, "output directory");
    cmd_mc->add_option("--ring-points", ring_points, "ring discretization override");

    auto* cmd_reherald = app.add_subcommand("reherald", "offline threshold selection");
    cmd_reherald->add_option("--data", data_dir, "mc output directory")->required();
    cmd_reherald->add_option("--m", threshold, "threshold M");
    cmd_reherald->add_option("--out", out_dir, "output directory");

    auto* cmd_tomo = app.add_subcommand("tomo", "MaxLik tomography from mc data");
    cmd_tomo->add_option("--data", data_dir, "mc output directory")->required();
    cmd_tomo->add_option("--m", threshold, "threshold M");
    cmd_tomo->add_option("--clone", clone_index, "clone index (1 or 2)");
    cmd_tomo->add_option("--fock-dim", fock_dim, "Fock truncation (0 = auto rule)");
    cmd_tomo->add_option("--max-iters", max_iters, "iteration cap");
    cmd_tomo->add_option("--tol", tol, "per-sample log-likelihood gain tolerance");
    cmd_tomo->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        fs::create_directories(out_dir);

        if (cmd_clone->parsed()) {
            const ClonerConfig cfg = load_config(config_path, ring_points);
            const HeraldedOutput out = apply_cloner(cfg);
            json j = metrics_json(out, cfg);
            io::write_text(fs::path(out_dir) / "metrics.json", j.dump(2) + "\n");
            write_manifest(out_dir, "clone", config_path, seed);
            std::cout << j.dump(2) << "\n";
        } else if (cmd_sweep->parsed()) {
            json j;
            try {
                j = json::parse(read_input_file(spec_path));
            } catch (const json::parse_error& e) {
                throw std::invalid_argument(std::string("spec parse error: ") + e.what());
            }
            const SweepSpec spec = io::sweep_spec_from_json(j);
            log_info("sweep over " + std::to_string(spec.alphas.size()) + " amplitudes");
            const auto rows = run_sweep(spec);
            io::write_text(fs::path(out_dir) / "sweep.csv", io::sweep_to_csv(rows, spec));
            write_manifest(out_dir, "sweep", spec_path, seed,
                           {{"rows", rows.size()}});
        } else if (cmd_covar->parsed()) {
            ClonerConfig cfg = load_config(config_path, ring_points);
            std::ostringstream csv;
            csv << "M,cov_x1x2,cov_p1p2,cov_x1p2,cov_p1x2,status\n";
            for (int m = 0; m <= m_max; ++m) {
                cfg.threshold = m;
                try {
                    const CovarianceReport cov = covariance_matrix(apply_cloner(cfg));
                    csv << m << "," << io::format_double(cov.cov_x1x2) << ","
                        << io::format_double(cov.cov_p1p2) << ","
                        << io::format_double(cov.cov_x1p2) << ","
                        << io::format_double(cov.cov_p1x2) << ",ok\n";
                } catch (const std::runtime_error&) {
                    csv << m << ",,,,,unheraldable\n";
                }
            }
            io::write_text(fs::path(out_dir) / "covariances.csv", csv.str());
            write_manifest(out_dir, "covar", config_path, seed);
        } else if (cmd_wigner->parsed()) {
            ClonerConfig cfg = load_config(config_path, ring_points);
            cfg.threshold = threshold;
            const HeraldedOutput out = apply_cloner(cfg);
            const GridSpec grid = GridSpec::square(grid_half, grid_points);
            const WignerGrid w = wigner(out.clone_ensemble(), grid);
            io::write_text(fs::path(out_dir) / "wigner.csv", io::wigner_to_csv(w));
            io::write_text(fs::path(out_dir) / "wigner.json", io::to_json(w).dump() + "\n");
            const auto [px, pp] = w.peak();
            write_manifest(out_dir, "wigner", config_path, seed,
                           {{"threshold", threshold},
                            {"grid_integral", w.integral()},
                            {"peak", {px, pp}}});
        } else if (cmd_mc->parsed()) {
            const ClonerConfig cfg = load_config(config_path, ring_points);
            const ExperimentData data = run_experiment(
                cfg, n_pulses, seed, io::schedule_from_name(schedule), period);
            io::save_experiment(data, out_dir);
            write_manifest(out_dir, "mc", config_path, seed,
                           {{"n_pulses", n_pulses}, {"schedule", schedule}});
        } else if (cmd_reherald->parsed()) {
            const ExperimentData data = io::load_experiment(data_dir);
            const ReheraldView view = reherald(data, threshold);
            json j{{"threshold", threshold},
                   {"n_selected", view.pulse_ids.size()},
                   {"n_pulses", data.pulses.size()},
                   {"success_rate", view.success_rate}};
            std::ostringstream csv;
            csv << "pulse_id\n";
            for (auto id : view.pulse_ids) csv << id << "\n";
            io::write_text(fs::path(out_dir) / "reherald.csv", csv.str());
            io::write_text(fs::path(out_dir) / "reherald.json", j.dump(2) + "\n");
            write_manifest(out_dir, "reherald", data_dir, data.seed,
                           {{"threshold", threshold}});
            std::cout << j.dump(2) << "\n";
        } else if (cmd_tomo->parsed()) {
            if (clone_index != 1 && clone_index != 2)
                throw std::invalid_argument("tomo: clone index must be 1 or 2");
            const ExperimentData data = io::load_experiment(data_dir);
            const ReheraldView view = reherald(data, threshold);
            std::vector<bool> keep(data.pulses.size(), false);
            for (auto id : view.pulse_ids) keep[static_cast<std::size_t>(id)] = true;
            QuadratureSampleSet set;
            for (const auto& h : data.homodyne)
                if (h.clone_index == clone_index && keep[static_cast<std::size_t>(h.pulse_id)])
                    set.samples.push_back({h.theta, h.value});
            int dim = fock_dim;
            if (dim <= 0) {
                const double mu =
                    (1.0 - data.config.tap_reflectivity) / 2.0 *
                    std::norm(data.config.alpha) *
                    (1.0 + data.config.x) * (1.0 + data.config.x);
                dim = default_fock_dim(mu);
            }
            log_info("tomography on " + std::to_string(set.samples.size()) +
                     " samples at dim " + std::to_string(dim));
            const TomographyResult result = maxlik_reconstruct(set, dim, max_iters, tol);
            io::write_text(fs::path(out_dir) / "rho.json",
                           io::to_json(result.rho).dump() + "\n");
            io::write_text(fs::path(out_dir) / "likelihood.csv",
                           io::likelihood_to_csv(result.log_likelihood_trace));
            write_manifest(out_dir, "tomo", data_dir, data.seed,
                           {{"threshold", threshold},
                            {"clone", clone_index},
                            {"dim", dim},
                            {"iterations", result.iterations_used},
                            {"converged", result.converged}});
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
