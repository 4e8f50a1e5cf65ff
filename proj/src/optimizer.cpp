#include "cloner/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cloner {

void XGrid::validate() const {
    if (!(min >= 0.0) || !(max > min) || !(step > 0.0))
        throw std::invalid_argument("XGrid: need 0 <= min < max and step > 0");
}

void SweepSpec::validate() const {
    if (alphas.empty()) throw std::invalid_argument("SweepSpec: empty alpha list");
    if (thresholds.empty()) throw std::invalid_argument("SweepSpec: empty threshold list");
    for (int m : thresholds)
        if (m < 0) throw std::invalid_argument("SweepSpec: negative threshold");
    x_grid.validate();
    detector.validate();
    if (!(tap_reflectivity >= 0.0 && tap_reflectivity < 1.0))
        throw std::invalid_argument("SweepSpec: tap_reflectivity outside [0,1)");
}

namespace {

ClonerConfig make_config(double alpha, double x, int threshold,
                         const DetectorModel& detector, double tap_reflectivity,
                         int ring_points) {
    ClonerConfig cfg;
    cfg.alpha = alpha;
    cfg.x = x;
    cfg.threshold = threshold;
    cfg.tap_reflectivity = tap_reflectivity;
    cfg.detector = detector;
    cfg.ring_points = ring_points;
    return cfg;
}

}  // namespace

OptimizeResult optimize_x(double alpha, int threshold, const DetectorModel& detector,
                          double tap_reflectivity, const XGrid& grid, int ring_points) {
    grid.validate();
    auto fidelity_at = [&](double x) -> double {
        const ClonerConfig cfg =
            make_config(alpha, x, threshold, detector, tap_reflectivity, ring_points);
        try {
            return average_clone_fidelity(apply_cloner(cfg), cfg.alpha);
        } catch (const std::runtime_error&) {
            return -1.0;  // unheraldable at this x
        }
    };

    double best_x = grid.min, best_f = -1.0;
    std::vector<double> xs;
    for (double x = grid.min; x <= grid.max + 0.5 * grid.step; x += grid.step)
        xs.push_back(std::min(x, grid.max));
    for (double x : xs) {
        const double f = fidelity_at(x);
        if (f > best_f + 1e-15) {
            best_f = f;
            best_x = x;
        }
    }
    if (best_f < 0.0)
        throw std::runtime_error("optimize_x: unheraldable everywhere on the x grid");

    // Golden-section refinement on the interval bracketing the best point.
    double lo = std::max(grid.min, best_x - grid.step);
    double hi = std::min(grid.max, best_x + grid.step);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = fidelity_at(c), fd = fidelity_at(d);
    for (int it = 0; it < 60 && (b - a) > 1e-10; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = fidelity_at(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = fidelity_at(d);
        }
    }
    const double x_ref = 0.5 * (a + b);
    const double f_ref = fidelity_at(x_ref);
    if (f_ref > best_f) return {x_ref, f_ref};
    return {best_x, best_f};
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    spec.validate();
    std::vector<SweepRow> rows;
    rows.reserve(spec.alphas.size() * spec.thresholds.size());
    for (double alpha : spec.alphas) {
        for (int m : spec.thresholds) {
            SweepRow row{alpha, m, 0.0, 0.0, 0.0, 0.0, false, false};
            try {
                const OptimizeResult opt = optimize_x(alpha, m, spec.detector,
                                                      spec.tap_reflectivity, spec.x_grid,
                                                      spec.ring_points);
                const ClonerConfig cfg =
                    make_config(alpha, opt.x_opt, m, spec.detector,
                                spec.tap_reflectivity, spec.ring_points);
                const HeraldedOutput out = apply_cloner(cfg);
                row.x_opt = opt.x_opt;
                row.fidelity = opt.fidelity;
                row.success_probability = out.success_probability;
                row.gain = (alpha > 0.0) ? amplitude_gain(out, cfg.alpha) : 1.0;
                row.beats_phase_benchmark = row.fidelity > benchmarks::kPhaseFidelity;
            } catch (const std::runtime_error&) {
                row.failed = true;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

StabilityReport x_stability_report(double alpha, double target_gain,
                                   const std::vector<int>& thresholds,
                                   const DetectorModel& detector,
                                   double tap_reflectivity, const XGrid& grid,
                                   int ring_points) {
    grid.validate();
    if (alpha <= 0.0)
        throw std::invalid_argument("x_stability_report: alpha must be positive");
    StabilityReport report;
    bool first = true;
    for (int m : thresholds) {
        auto gain_at = [&](double x) -> double {
            const ClonerConfig cfg =
                make_config(alpha, x, m, detector, tap_reflectivity, ring_points);
            return amplitude_gain(apply_cloner(cfg), cfg.alpha);
        };
        StabilityRow row{m, 0.0, false};
        try {
            double lo = grid.min, hi = grid.max;
            double g_lo = gain_at(lo), g_hi = gain_at(hi);
            if ((g_lo - target_gain) * (g_hi - target_gain) <= 0.0) {
                for (int it = 0; it < 80; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double g = gain_at(mid);
                    if ((g - target_gain) * (g_lo - target_gain) <= 0.0) {
                        hi = mid;
                    } else {
                        lo = mid;
                        g_lo = g;
                    }
                }
                row.x = 0.5 * (lo + hi);
                row.achievable = true;
            }
        } catch (const std::runtime_error&) {
            row.achievable = false;
        }
        report.rows.push_back(row);
        if (row.achievable) {
            if (first) {
                report.x_min = report.x_max = row.x;
                first = false;
            } else {
                report.x_min = std::min(report.x_min, row.x);
                report.x_max = std::max(report.x_max, row.x);
            }
        }
    }
    report.spread = report.x_max - report.x_min;
    return report;
}

}  // namespace cloner
