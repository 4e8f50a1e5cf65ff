#pragma once

#include <cstdint>
#include <vector>

#include "cloner/channel.hpp"
#include "cloner/metrics.hpp"

// Pulse-by-pulse stochastic emulation of the experiment: random
// displacement phase, Poissonian tap counts, one homodyne draw per clone
// per pulse. Heralding is stored, not applied, so the threshold M can be
// chosen offline.

namespace cloner {

struct PulseRecord {
    std::int64_t pulse_id;
    double phi;        // displacement phase in [0, 2π)
    Complex gamma;     // displaced amplitude α + x|α|e^{iφ}
    int n_detected;    // tap counts including darks
};

struct HomodyneRecord {
    std::int64_t pulse_id;
    int clone_index;   // 1 or 2
    double theta;      // LO phase
    double value;      // measured X_θ
};

enum class LoSchedule {
    kHarmonic,   // θ_t = π(1 + sin(2πt/T)), shared by both clones
    kUniform,    // θ ~ U[0, π), shared by both clones
    kFourPoint,  // cycles (θ1,θ2) ∈ {(0,0), (π/2,π/2), (0,π/2), (π/2,0)}
};

struct ExperimentData {
    ClonerConfig config;
    LoSchedule schedule;
    std::uint64_t seed;
    int harmonic_period = 1000;
    std::vector<PulseRecord> pulses;
    std::vector<HomodyneRecord> homodyne;  // 2 records per pulse, ordered by pulse_id
};

ExperimentData run_experiment(const ClonerConfig& cfg, std::int64_t n_pulses,
                              std::uint64_t seed, LoSchedule schedule,
                              int harmonic_period = 1000);

struct ReheraldView {
    std::vector<std::int64_t> pulse_ids;  // pulses with n_detected >= M, ascending
    double success_rate;
};

ReheraldView reherald(const ExperimentData& data, int threshold);

// Sample covariances between clone-1 and clone-2 quadratures on heralded
// pulses, evaluated per phase configuration. Requires data with the
// four-point LO schedule (or equivalent (0, π/2) pairings).
CovarianceReport empirical_covariance(const ExperimentData& data, int threshold);

}  // namespace cloner
