#include "cloner/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace cloner::io {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

json complex_to_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

Complex complex_from_json(const json& j) {
    return Complex(j.at("re").get<double>(), j.at("im").get<double>());
}

}  // namespace

json to_json(const ClonerConfig& cfg) {
    return json{
        {"alpha", complex_to_json(cfg.alpha)},
        {"x", cfg.x},
        {"threshold", cfg.threshold},
        {"tap_reflectivity", cfg.tap_reflectivity},
        {"detector", {{"efficiency", cfg.detector.efficiency},
                      {"dark_mean", cfg.detector.dark_mean}}},
        {"n_clones", cfg.n_clones},
        {"ring_points", cfg.ring_points},
    };
}

ClonerConfig config_from_json(const json& j) {
    ClonerConfig cfg;
    cfg.alpha = complex_from_json(j.at("alpha"));
    cfg.x = j.at("x").get<double>();
    cfg.threshold = j.at("threshold").get<int>();
    cfg.tap_reflectivity = j.at("tap_reflectivity").get<double>();
    if (j.contains("detector")) {
        const auto& d = j.at("detector");
        cfg.detector.efficiency = d.value("efficiency", 1.0);
        cfg.detector.dark_mean = d.value("dark_mean", 0.0);
    }
    cfg.n_clones = j.value("n_clones", 2);
    cfg.ring_points = j.value("ring_points", 64);
    cfg.validate();
    return cfg;
}

json to_json(const HeraldedOutput& out) {
    json members = json::array();
    for (const auto& m : out.post_herald.members())
        members.push_back({{"amplitude", complex_to_json(m.amplitude)},
                           {"weight", m.weight}});
    json j{
        {"post_herald", members},
        {"clone_scale", out.clone_scale},
        {"config", to_json(out.config)},
    };
    if (out.success_applicable)
        j["success_probability"] = out.success_probability;
    else
        j["success_probability"] = nullptr;
    return j;
}

json to_json(const SweepSpec& spec) {
    return json{
        {"alphas", spec.alphas},
        {"thresholds", spec.thresholds},
        {"x_grid", {{"min", spec.x_grid.min}, {"max", spec.x_grid.max},
                    {"step", spec.x_grid.step}}},
        {"detector", {{"efficiency", spec.detector.efficiency},
                      {"dark_mean", spec.detector.dark_mean}}},
        {"tap_reflectivity", spec.tap_reflectivity},
        {"ring_points", spec.ring_points},
    };
}

SweepSpec sweep_spec_from_json(const json& j) {
    SweepSpec spec;
    spec.alphas = j.at("alphas").get<std::vector<double>>();
    spec.thresholds = j.at("thresholds").get<std::vector<int>>();
    if (j.contains("x_grid")) {
        const auto& g = j.at("x_grid");
        spec.x_grid.min = g.value("min", 0.0);
        spec.x_grid.max = g.value("max", 2.0);
        spec.x_grid.step = g.value("step", 0.01);
    }
    if (j.contains("detector")) {
        const auto& d = j.at("detector");
        spec.detector.efficiency = d.value("efficiency", 1.0);
        spec.detector.dark_mean = d.value("dark_mean", 0.0);
    }
    spec.tap_reflectivity = j.value("tap_reflectivity", 0.17);
    spec.ring_points = j.value("ring_points", 64);
    spec.validate();
    return spec;
}

json to_json(const DensityMatrix& rho) {
    const int dim = rho.dim();
    json elements = json::array();
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            elements.push_back({rho.mat(i, j).real(), rho.mat(i, j).imag()});
    return json{{"dim", dim}, {"elements", elements}};
}

DensityMatrix density_matrix_from_json(const json& j) {
    const int dim = j.at("dim").get<int>();
    const auto& elements = j.at("elements");
    if (static_cast<int>(elements.size()) != dim * dim)
        throw std::invalid_argument("density matrix JSON: element count mismatch");
    DensityMatrix rho;
    rho.mat.resize(dim, dim);
    int k = 0;
    for (int i = 0; i < dim; ++i)
        for (int jj = 0; jj < dim; ++jj, ++k)
            rho.mat(i, jj) = Complex(elements[k][0].get<double>(),
                                     elements[k][1].get<double>());
    return rho;
}

json to_json(const WignerGrid& grid) {
    json j;
    j["x_axis"] = std::vector<double>(grid.x_axis.begin(), grid.x_axis.end());
    j["p_axis"] = std::vector<double>(grid.p_axis.begin(), grid.p_axis.end());
    json rows = json::array();
    for (Eigen::Index i = 0; i < grid.values.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < grid.values.cols(); ++k)
            row.push_back(grid.values(i, k));
        rows.push_back(row);
    }
    j["values"] = rows;
    return j;
}

std::string wigner_to_csv(const WignerGrid& grid) {
    std::ostringstream out;
    // header row: p-values; first column: x-values
    out << "x\\p";
    for (Eigen::Index k = 0; k < grid.p_axis.size(); ++k)
        out << "," << format_double(grid.p_axis(k));
    out << "\n";
    for (Eigen::Index i = 0; i < grid.x_axis.size(); ++i) {
        out << format_double(grid.x_axis(i));
        for (Eigen::Index k = 0; k < grid.values.cols(); ++k)
            out << "," << format_double(grid.values(i, k));
        out << "\n";
    }
    return out.str();
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows, const SweepSpec& spec) {
    std::ostringstream out;
    out << "alpha,M,x,fidelity,success_probability,gain,cov_x1x2,cov_p1p2,status\n";
    for (const auto& row : rows) {
        out << format_double(row.alpha) << "," << row.threshold << ",";
        if (row.failed) {
            out << ",,,,,,failed\n";
            continue;
        }
        ClonerConfig cfg;
        cfg.alpha = row.alpha;
        cfg.x = row.x_opt;
        cfg.threshold = row.threshold;
        cfg.tap_reflectivity = spec.tap_reflectivity;
        cfg.detector = spec.detector;
        cfg.ring_points = spec.ring_points;
        const CovarianceReport cov = covariance_matrix(apply_cloner(cfg));
        out << format_double(row.x_opt) << "," << format_double(row.fidelity) << ","
            << format_double(row.success_probability) << "," << format_double(row.gain)
            << "," << format_double(cov.cov_x1x2) << "," << format_double(cov.cov_p1p2)
            << ",ok\n";
    }
    return out.str();
}

std::string likelihood_to_csv(const std::vector<double>& trace) {
    std::ostringstream out;
    out << "iteration,log_likelihood\n";
    for (std::size_t i = 0; i < trace.size(); ++i)
        out << i << "," << format_double(trace[i]) << "\n";
    return out.str();
}

std::string schedule_name(LoSchedule s) {
    switch (s) {
        case LoSchedule::kHarmonic: return "harmonic";
        case LoSchedule::kUniform: return "uniform";
        case LoSchedule::kFourPoint: return "fourpoint";
    }
    throw std::logic_error("schedule_name: unknown schedule");
}

LoSchedule schedule_from_name(const std::string& name) {
    if (name == "harmonic") return LoSchedule::kHarmonic;
    if (name == "uniform") return LoSchedule::kUniform;
    if (name == "fourpoint") return LoSchedule::kFourPoint;
    throw std::invalid_argument("unknown LO schedule: " + name);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << text;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void save_experiment(const ExperimentData& data, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    json header{
        {"config", to_json(data.config)},
        {"seed", data.seed},
        {"schedule", schedule_name(data.schedule)},
        {"harmonic_period", data.harmonic_period},
        {"n_pulses", data.pulses.size()},
    };
    write_text(dir / "header.json", header.dump(2) + "\n");

    std::ostringstream pulses;
    pulses << "pulse_id,phi,re_gamma,im_gamma,n_detected\n";
    for (const auto& p : data.pulses)
        pulses << p.pulse_id << "," << format_double(p.phi) << ","
               << format_double(p.gamma.real()) << "," << format_double(p.gamma.imag())
               << "," << p.n_detected << "\n";
    write_text(dir / "pulses.csv", pulses.str());

    std::ostringstream hd;
    hd << "pulse_id,clone_index,theta,value\n";
    for (const auto& h : data.homodyne)
        hd << h.pulse_id << "," << h.clone_index << "," << format_double(h.theta) << ","
           << format_double(h.value) << "\n";
    write_text(dir / "homodyne.csv", hd.str());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc())
        throw std::runtime_error("CSV parse error: bad number '" + s + "'");
    return v;
}

}  // namespace

ExperimentData load_experiment(const std::filesystem::path& dir) {
    ExperimentData data;
    const json header = json::parse(read_text(dir / "header.json"));
    data.config = config_from_json(header.at("config"));
    data.seed = header.at("seed").get<std::uint64_t>();
    data.schedule = schedule_from_name(header.at("schedule").get<std::string>());
    data.harmonic_period = header.value("harmonic_period", 1000);

    {
        std::istringstream in(read_text(dir / "pulses.csv"));
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto f = split_csv_line(line);
            if (f.size() != 5) throw std::runtime_error("pulses.csv: malformed row");
            data.pulses.push_back({std::stoll(f[0]), parse_double(f[1]),
                                   Complex(parse_double(f[2]), parse_double(f[3])),
                                   std::stoi(f[4])});
        }
    }
    {
        std::istringstream in(read_text(dir / "homodyne.csv"));
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto f = split_csv_line(line);
            if (f.size() != 4) throw std::runtime_error("homodyne.csv: malformed row");
            data.homodyne.push_back({std::stoll(f[0]), std::stoi(f[1]),
                                     parse_double(f[2]), parse_double(f[3])});
        }
    }
    return data;
}

}  // namespace cloner::io
