#pragma once

#include <vector>

#include "cloner/metrics.hpp"

// Sweeps over (|α|, M) maximizing the clone fidelity over the displacement
// ratio x, plus root finding of the x achieving a target amplitude gain.

namespace cloner {

struct XGrid {
    double min = 0.0;
    double max = 2.0;
    double step = 0.01;

    void validate() const;
};

struct SweepSpec {
    std::vector<double> alphas;      // input amplitudes (real, along X)
    std::vector<int> thresholds;     // M values
    XGrid x_grid;
    DetectorModel detector;
    double tap_reflectivity = 0.17;
    int ring_points = 64;

    void validate() const;
};

struct SweepRow {
    double alpha;
    int threshold;
    double x_opt;
    double fidelity;
    double success_probability;
    double gain;
    bool beats_phase_benchmark;
    bool failed = false;  // cell was unheraldable everywhere on the grid
};

struct OptimizeResult {
    double x_opt;
    double fidelity;
};

// Grid scan followed by golden-section refinement on the bracketing
// interval; ties break to the smallest x.
OptimizeResult optimize_x(double alpha, int threshold, const DetectorModel& detector,
                          double tap_reflectivity, const XGrid& grid,
                          int ring_points = 64);

std::vector<SweepRow> run_sweep(const SweepSpec& spec);

struct StabilityRow {
    int threshold;
    double x;          // x achieving the target gain
    bool achievable;
};

struct StabilityReport {
    std::vector<StabilityRow> rows;
    double x_min = 0.0, x_max = 0.0, spread = 0.0;  // over achievable rows
};

// For each M, the x at which amplitude_gain equals target_gain (bisection
// on the grid interval); reports the spread across thresholds.
StabilityReport x_stability_report(double alpha, double target_gain,
                                   const std::vector<int>& thresholds,
                                   const DetectorModel& detector,
                                   double tap_reflectivity, const XGrid& grid,
                                   int ring_points = 64);

}  // namespace cloner
