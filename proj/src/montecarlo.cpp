#include "cloner/montecarlo.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace cloner {

ExperimentData run_experiment(const ClonerConfig& cfg, std::int64_t n_pulses,
                              std::uint64_t seed, LoSchedule schedule,
                              int harmonic_period) {
    cfg.validate();
    if (n_pulses < 1) throw std::invalid_argument("run_experiment: n_pulses must be >= 1");
    if (harmonic_period < 1)
        throw std::invalid_argument("run_experiment: harmonic_period must be >= 1");

    ExperimentData data;
    data.config = cfg;
    data.schedule = schedule;
    data.seed = seed;
    data.harmonic_period = harmonic_period;
    data.pulses.reserve(n_pulses);
    data.homodyne.reserve(2 * n_pulses);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> lo_dist(0.0, M_PI);
    std::normal_distribution<double> noise(0.0, std::sqrt(kVacuumVariance));

    const double radius = cfg.x * std::abs(cfg.alpha);
    const double clone_scale = std::sqrt((1.0 - cfg.tap_reflectivity) / 2.0);
    const double tap_rate = cfg.detector.efficiency * cfg.tap_reflectivity;
    const double s2 = std::sqrt(2.0);
    constexpr double kFourPointTheta[4][2] = {
        {0.0, 0.0}, {M_PI / 2.0, M_PI / 2.0}, {0.0, M_PI / 2.0}, {M_PI / 2.0, 0.0}};

    for (std::int64_t t = 0; t < n_pulses; ++t) {
        const double phi = phase_dist(rng);
        const Complex gamma = cfg.alpha + radius * std::polar(1.0, phi);
        const double mean_counts = tap_rate * std::norm(gamma) + cfg.detector.dark_mean;
        int n_detected = 0;
        if (mean_counts > 0.0) {
            std::poisson_distribution<int> counts(mean_counts);
            n_detected = counts(rng);
        }
        data.pulses.push_back({t, phi, gamma, n_detected});

        double theta1, theta2;
        switch (schedule) {
            case LoSchedule::kHarmonic:
                theta1 = theta2 =
                    M_PI * (1.0 + std::sin(2.0 * M_PI * double(t) / harmonic_period));
                break;
            case LoSchedule::kUniform:
                theta1 = theta2 = lo_dist(rng);
                break;
            case LoSchedule::kFourPoint:
                theta1 = kFourPointTheta[t % 4][0];
                theta2 = kFourPointTheta[t % 4][1];
                break;
        }

        const Complex mu = clone_scale * gamma;
        const double mean1 = s2 * std::real(mu * std::polar(1.0, -theta1));
        const double mean2 = s2 * std::real(mu * std::polar(1.0, -theta2));
        data.homodyne.push_back({t, 1, theta1, mean1 + noise(rng)});
        data.homodyne.push_back({t, 2, theta2, mean2 + noise(rng)});
    }
    return data;
}

ReheraldView reherald(const ExperimentData& data, int threshold) {
    if (threshold < 0) throw std::invalid_argument("reherald: negative threshold");
    ReheraldView view;
    for (const auto& p : data.pulses)
        if (p.n_detected >= threshold) view.pulse_ids.push_back(p.pulse_id);
    view.success_rate =
        data.pulses.empty() ? 0.0 : double(view.pulse_ids.size()) / data.pulses.size();
    return view;
}

CovarianceReport empirical_covariance(const ExperimentData& data, int threshold) {
    const ReheraldView view = reherald(data, threshold);
    std::vector<bool> keep(data.pulses.size(), false);
    for (auto id : view.pulse_ids) keep[static_cast<std::size_t>(id)] = true;

    // accumulators per configuration: XX, PP, XP, PX
    struct Acc {
        double s1 = 0.0, s2 = 0.0, s12 = 0.0;
        std::int64_t n = 0;
        double cov() const {
            if (n < 2) throw std::runtime_error("empirical_covariance: insufficient samples");
            return s12 / n - (s1 / n) * (s2 / n);
        }
    } acc[4];

    auto config_of = [](double t1, double t2) -> int {
        const double half_pi = M_PI / 2.0;
        auto is = [](double a, double b) { return std::abs(a - b) < 1e-9; };
        if (is(t1, 0.0) && is(t2, 0.0)) return 0;
        if (is(t1, half_pi) && is(t2, half_pi)) return 1;
        if (is(t1, 0.0) && is(t2, half_pi)) return 2;
        if (is(t1, half_pi) && is(t2, 0.0)) return 3;
        return -1;
    };

    // homodyne records come in (clone 1, clone 2) pairs per pulse
    for (std::size_t i = 0; i + 1 < data.homodyne.size(); i += 2) {
        const auto& h1 = data.homodyne[i];
        const auto& h2 = data.homodyne[i + 1];
        if (h1.pulse_id != h2.pulse_id || h1.clone_index != 1 || h2.clone_index != 2)
            throw std::runtime_error("empirical_covariance: malformed homodyne pairing");
        if (!keep[static_cast<std::size_t>(h1.pulse_id)]) continue;
        const int c = config_of(h1.theta, h2.theta);
        if (c < 0) continue;
        acc[c].s1 += h1.value;
        acc[c].s2 += h2.value;
        acc[c].s12 += h1.value * h2.value;
        ++acc[c].n;
    }

    // X_{π/2} = P in this convention, so the four configurations measure
    // (X1,X2), (P1,P2), (X1,P2), (P1,X2) directly.
    CovarianceReport r;
    r.cov_x1x2 = acc[0].cov();
    r.cov_p1p2 = acc[1].cov();
    r.cov_x1p2 = acc[2].cov();
    r.cov_p1x2 = acc[3].cov();
    return r;
}

}  // namespace cloner
