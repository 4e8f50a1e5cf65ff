#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "cloner/montecarlo.hpp"
#include "cloner/optimizer.hpp"
#include "cloner/tomography.hpp"

// File formats: JSON for configs, specs, density matrices and heralded
// outputs; CSV for tables and grids. Doubles are written with the shortest
// round-trip decimal representation.

namespace cloner::io {

std::string format_double(double v);

nlohmann::json to_json(const ClonerConfig& cfg);
ClonerConfig config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const HeraldedOutput& out);

nlohmann::json to_json(const SweepSpec& spec);
SweepSpec sweep_spec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DensityMatrix& rho);
DensityMatrix density_matrix_from_json(const nlohmann::json& j);

nlohmann::json to_json(const WignerGrid& grid);
std::string wigner_to_csv(const WignerGrid& grid);

// Sweep table: alpha, M, x, fidelity, success_probability, gain,
// cov_x1x2, cov_p1p2, status. Covariances are evaluated at x_opt.
std::string sweep_to_csv(const std::vector<SweepRow>& rows, const SweepSpec& spec);

std::string likelihood_to_csv(const std::vector<double>& trace);

std::string schedule_name(LoSchedule s);
LoSchedule schedule_from_name(const std::string& name);

void save_experiment(const ExperimentData& data, const std::filesystem::path& dir);
ExperimentData load_experiment(const std::filesystem::path& dir);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace cloner::io
