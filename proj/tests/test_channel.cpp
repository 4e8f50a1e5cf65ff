#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cloner/channel.hpp"
#include "cloner/metrics.hpp"

using namespace cloner;

namespace {

ClonerConfig base_config(double alpha, double x, int m) {
    ClonerConfig cfg;
    cfg.alpha = alpha;
    cfg.x = x;
    cfg.threshold = m;
    cfg.tap_reflectivity = 0.17;
    cfg.detector.efficiency = 0.63;
    return cfg;
}

}  // namespace

TEST_CASE("ring_ensemble construction") {
    SUBCASE("x = 0 collapses to copies of alpha") {
        const auto ring = ring_ensemble(1.0, 0.0, 16);
        CHECK(ring.size() == 16);
        for (const auto& m : ring.members()) {
            CHECK(std::abs(m.amplitude - Complex(1.0)) < 1e-15);
            CHECK(m.weight == doctest::Approx(1.0 / 16.0));
        }
    }
    SUBCASE("four-point ring is explicit") {
        const auto ring = ring_ensemble(1.0, 0.5, 4);
        REQUIRE(ring.size() == 4);
        CHECK(std::abs(ring.members()[0].amplitude - Complex(1.5, 0.0)) < 1e-15);
        CHECK(std::abs(ring.members()[1].amplitude - Complex(1.0, 0.5)) < 1e-15);
        CHECK(std::abs(ring.members()[2].amplitude - Complex(0.5, 0.0)) < 1e-15);
        CHECK(std::abs(ring.members()[3].amplitude - Complex(1.0, -0.5)) < 1e-15);
    }
    SUBCASE("mean amplitude is alpha for every K") {
        for (int k : {8, 13, 64, 128}) {
            const auto ring = ring_ensemble(Complex(0.7, 0.4), 0.9, k);
            CHECK(std::abs(ring.mean_amplitude() - Complex(0.7, 0.4)) < 1e-14);
        }
    }
}

TEST_CASE("poisson_tail") {
    CHECK(poisson_tail(3.7, 0) == 1.0);
    CHECK(poisson_tail(0.0, 2) == 0.0);
    CHECK(poisson_tail(1.0, 1) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));

    // brute-force pmf oracle, summed to n = 200
    double pmf = std::exp(-4.0), tail = 0.0;
    for (int n = 0; n <= 200; ++n) {
        if (n >= 3) tail += pmf;
        pmf *= 4.0 / (n + 1);
    }
    CHECK(poisson_tail(4.0, 3) == doctest::Approx(tail).epsilon(1e-12));
    CHECK(tail == doctest::Approx(0.76190).epsilon(1e-4));

    // large-mean path stays in [0,1] and is monotone in the threshold
    CHECK(poisson_tail(900.0, 850) <= 1.0);
    CHECK(poisson_tail(900.0, 850) >= poisson_tail(900.0, 950));
    CHECK(poisson_tail(900.0, 1) == doctest::Approx(1.0));
}

TEST_CASE("herald_weight") {
    const auto cfg0 = base_config(1.0, 0.5, 0);
    CHECK(herald_weight(Complex(0.3, 2.0), cfg0) == 1.0);

    const auto cfg1 = base_config(1.0, 0.5, 1);
    // mean = 0.63·0.17·4
    CHECK(herald_weight(2.0, cfg1) ==
          doctest::Approx(1.0 - std::exp(-0.63 * 0.17 * 4.0)).epsilon(1e-12));
    CHECK(herald_weight(0.0, cfg1) == 0.0);
}

TEST_CASE("apply_cloner") {
    SUBCASE("plain splitting at x = 0, M = 0, R = 0") {
        ClonerConfig cfg;
        cfg.alpha = 1.0;
        const auto out = apply_cloner(cfg);
        CHECK(out.success_probability == doctest::Approx(1.0));
        const auto clones = out.clone_ensemble();
        for (const auto& m : clones.members())
            CHECK(std::abs(m.amplitude - Complex(1.0 / std::sqrt(2.0))) < 1e-14);
    }
    SUBCASE("weak-state gain approaches two") {
        ClonerConfig cfg;
        cfg.alpha = 0.1;
        cfg.x = 10.0;
        cfg.threshold = 1;
        cfg.tap_reflectivity = 1e-4;
        cfg.detector.efficiency = 1.0;
        const auto out = apply_cloner(cfg);
        // analytic ring average: (a² + 2b²)/(a² + b²), a = 0.1, b = 1
        CHECK(amplitude_gain(out, cfg.alpha) == doctest::Approx(1.9901).epsilon(1e-3));
    }
    SUBCASE("success probability shrinks with the threshold") {
        const double s1 = apply_cloner(base_config(1.0, 0.5, 1)).success_probability;
        const double s5 = apply_cloner(base_config(1.0, 0.5, 5)).success_probability;
        CHECK(s5 < s1);
    }
    SUBCASE("unheraldable configuration is an explicit error") {
        CHECK_THROWS_AS(apply_cloner(base_config(0.0, 0.0, 1)), std::runtime_error);
    }
    SUBCASE("ring discretization is converged at K = 64") {
        auto cfg = base_config(1.0, 0.5, 2);
        const auto a = apply_cloner(cfg);
        cfg.ring_points = 128;
        const auto b = apply_cloner(cfg);
        CHECK(std::abs(a.success_probability - b.success_probability) < 1e-8);
        CHECK(std::abs(average_clone_fidelity(a, 1.0) - average_clone_fidelity(b, 1.0)) <
              1e-8);
    }
}

TEST_CASE("exact_subtraction_cloner") {
    SUBCASE("x = 0 leaves uniform weights") {
        ClonerConfig cfg;
        cfg.alpha = 0.7;
        const auto out = exact_subtraction_cloner(cfg, 1);
        for (const auto& m : out.post_herald.members())
            CHECK(m.weight == doctest::Approx(1.0 / 64.0));
        CHECK_FALSE(out.success_applicable);
    }
    SUBCASE("gain oracle") {
        ClonerConfig cfg;
        cfg.alpha = 0.1;
        cfg.x = 10.0;
        const auto out = exact_subtraction_cloner(cfg, 1);
        const double a = 0.1, b = 1.0;
        CHECK(amplitude_gain(out, cfg.alpha) ==
              doctest::Approx((a * a + 2 * b * b) / (a * a + b * b)).epsilon(1e-6));
    }
    SUBCASE("small-R heralding matches single-photon subtraction") {
        ClonerConfig cfg;
        cfg.alpha = 0.6;
        cfg.x = 0.8;
        cfg.threshold = 1;
        cfg.tap_reflectivity = 1e-4;
        cfg.detector.efficiency = 1.0;
        const double g_herald =
            std::abs(apply_cloner(cfg).pre_tap_ensemble().mean_amplitude());
        const double g_sub =
            std::abs(exact_subtraction_cloner(cfg, 1).pre_tap_ensemble().mean_amplitude());
        CHECK(std::abs(g_herald - g_sub) / g_sub < 1e-4);
    }
    SUBCASE("all-zero ring is rejected") {
        ClonerConfig cfg;
        CHECK_THROWS_AS(exact_subtraction_cloner(cfg, 1), std::runtime_error);
    }
}

TEST_CASE("fock oracle cloner") {
    SUBCASE("x = 0, M = 0 reproduces the split coherent state") {
        ClonerConfig cfg;
        cfg.alpha = 0.6;
        cfg.tap_reflectivity = 0.17;
        const auto res = fock_oracle_cloner(cfg, 12);
        const Complex expected = std::sqrt((1.0 - 0.17) / 2.0) * 0.6;
        CHECK(fidelity_with_coherent(res.clone, expected) >= 1.0 - 1e-8);
        CHECK(res.success_probability == doctest::Approx(1.0).epsilon(1e-8));
    }
    SUBCASE("success probability matches the ensemble path") {
        const auto cfg = base_config(0.8, 0.5, 2);
        const auto res = fock_oracle_cloner(cfg, 20);
        const auto out = apply_cloner(cfg);
        CHECK(std::abs(res.success_probability - out.success_probability) < 1e-6);
    }
    SUBCASE("M = 0 joint output is a physical state") {
        const auto cfg = base_config(0.6, 0.4, 0);
        const auto res = fock_oracle_cloner(cfg, 10);
        res.joint.validate(1e-8, 1e-8, 1e-8);
        const auto other_clone = partial_trace_first(res.joint, 10);
        CHECK((other_clone.mat - res.clone.mat).cwiseAbs().maxCoeff() < 1e-10);
    }
    SUBCASE("truncation guard") {
        ClonerConfig cfg;
        cfg.alpha = 3.0;
        CHECK_THROWS_AS(fock_oracle_cloner(cfg, 6), std::runtime_error);
    }
}

TEST_CASE("phase covariance of the protocol") {
    const auto cfg = base_config(1.0, 0.5, 2);
    const auto out = apply_cloner(cfg);
    const double fid = average_clone_fidelity(out, cfg.alpha);
    const auto stats = quadrature_stats(out.clone_ensemble());

    for (int k : {1, 7, 32}) {
        const double theta = 2.0 * M_PI * k / cfg.ring_points;
        auto rotated = cfg;
        rotated.alpha = cfg.alpha * std::polar(1.0, theta);
        const auto out_r = apply_cloner(rotated);
        CHECK(std::abs(out_r.success_probability - out.success_probability) < 1e-12);
        CHECK(std::abs(average_clone_fidelity(out_r, rotated.alpha) - fid) < 1e-12);
        const auto stats_r = quadrature_stats(out_r.clone_ensemble());
        const double c = std::cos(theta), s = std::sin(theta);
        CHECK(std::abs(stats_r.mean_x - (c * stats.mean_x - s * stats.mean_p)) < 1e-9);
        CHECK(std::abs(stats_r.mean_p - (s * stats.mean_x + c * stats.mean_p)) < 1e-9);
    }
}

TEST_CASE("heralding monotonicity and purification") {
    double prev_success = 1.1;
    const double entropy_m0 =
        apply_cloner(base_config(1.0, 0.5, 0)).post_herald.weight_entropy();
    for (int m = 0; m <= 5; ++m) {
        const auto out = apply_cloner(base_config(1.0, 0.5, m));
        CHECK(out.success_probability < prev_success);
        prev_success = out.success_probability;
        CHECK(out.post_herald.weight_entropy() <= entropy_m0 + 1e-12);
    }
    // success grows with |α| at fixed x, M
    const double s_small = apply_cloner(base_config(0.5, 0.5, 2)).success_probability;
    const double s_large = apply_cloner(base_config(1.5, 0.5, 2)).success_probability;
    CHECK(s_large > s_small);
}

TEST_CASE("config validation") {
    ClonerConfig cfg;
    cfg.tap_reflectivity = 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.tap_reflectivity = 0.1;
    cfg.detector.efficiency = 1.2;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.detector.efficiency = 0.5;
    cfg.ring_points = 4;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
