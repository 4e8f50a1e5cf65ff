#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cloner/channel.hpp"
#include "cloner/states.hpp"

using namespace cloner;

namespace {

// Independent Poisson pmf oracle, summed directly.
double poisson_pmf(double mean, int n) {
    double p = std::exp(-mean);
    for (int k = 1; k <= n; ++k) p *= mean / k;
    return p;
}

}  // namespace

TEST_CASE("coherent_fock basics") {
    const Eigen::VectorXcd vac = coherent_fock(0.0, 5);
    CHECK(std::abs(vac(0) - 1.0) < 1e-15);
    CHECK(vac.tail(4).cwiseAbs().maxCoeff() == 0.0);

    const Eigen::VectorXcd one = coherent_fock(1.0, 2);
    CHECK(std::abs(one(0).real() - std::exp(-0.5)) < 1e-15);
    CHECK(std::abs(one(1).real() - std::exp(-0.5)) < 1e-15);

    // norm deficit equals the Poisson tail (summed independently)
    double tail = 1.0;
    for (int n = 0; n < 30; ++n) tail -= poisson_pmf(4.0, n);
    CHECK(coherent_norm_deficit(2.0, 30) < 1e-10);
    CHECK(coherent_norm_deficit(2.0, 30) == doctest::Approx(tail).epsilon(1e-6));

    CHECK_THROWS_AS(coherent_fock(1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(coherent_fock(Complex(INFINITY, 0.0), 4), std::invalid_argument);
}

TEST_CASE("displacement matrix") {
    CHECK((displacement_matrix(0.0, 4) - Eigen::MatrixXcd::Identity(4, 4))
              .cwiseAbs()
              .maxCoeff() < 1e-15);

    CHECK(std::abs(displacement_matrix(1.0, 10)(0, 0) - std::exp(-0.5)) < 1e-12);

    // D(β)|0⟩ = |β⟩
    const Eigen::MatrixXcd d = displacement_matrix(0.5, 25);
    CHECK((d.col(0) - coherent_fock(0.5, 25)).cwiseAbs().maxCoeff() < 1e-10);

    CHECK_THROWS_AS(displacement_matrix(Complex(0.0, NAN), 4), std::invalid_argument);
}

TEST_CASE("displacement unitarity on fully represented columns") {
    // The top-left b×b block of D†D is the identity once the truncation
    // holds all the mass of the displaced |n<b⟩ columns.
    for (Complex beta : {Complex(0.4, 0.3), Complex(1.2, -0.9), Complex(0.0, 2.0)}) {
        const int b = 12;
        const double reach = std::pow(std::sqrt(double(b)) + std::abs(beta), 2.0);
        const int dim = default_fock_dim(reach);
        const Eigen::MatrixXcd d = displacement_matrix(beta, dim);
        const Eigen::MatrixXcd gram = d.adjoint() * d;
        CHECK((gram - Eigen::MatrixXcd::Identity(dim, dim))
                  .topLeftCorner(b, b)
                  .cwiseAbs()
                  .maxCoeff() < 1e-8);
    }
}

TEST_CASE("loss channel") {
    const auto rho = ensemble_to_density(CoherentEnsemble::single(Complex(0.7, 0.2)), 20);

    SUBCASE("eta = 1 is the identity") {
        const auto out = loss_channel(rho, 1.0);
        CHECK((out.mat - rho.mat).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("coherent states stay coherent") {
        const auto in = ensemble_to_density(CoherentEnsemble::single(1.0), 25);
        const auto out = loss_channel(in, 0.63);
        CHECK(std::abs(out.mat.trace().real() - 1.0) < 1e-10);
        CHECK(fidelity_with_coherent(out, std::sqrt(0.63)) >= 1.0 - 1e-9);
        out.validate();
    }
    SUBCASE("single photon under 50% loss") {
        DensityMatrix one{Eigen::MatrixXcd::Zero(5, 5)};
        one.mat(1, 1) = 1.0;
        const auto out = loss_channel(one, 0.5);
        CHECK(std::abs(out.mat(0, 0).real() - 0.5) < 1e-14);
        CHECK(std::abs(out.mat(1, 1).real() - 0.5) < 1e-14);
        CHECK(out.mat.cwiseAbs().sum() == doctest::Approx(1.0));
    }
    SUBCASE("eta bounds checked") {
        CHECK_THROWS_AS(loss_channel(rho, -0.1), std::invalid_argument);
        CHECK_THROWS_AS(loss_channel(rho, 1.1), std::invalid_argument);
    }
}

TEST_CASE("ensemble_to_density") {
    SUBCASE("single member is the pure projector") {
        const auto rho = ensemble_to_density(CoherentEnsemble::single(0.8), 25);
        const Eigen::VectorXcd c = coherent_fock(0.8, 25);
        CHECK((rho.mat - c * c.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
        rho.validate();
    }
    SUBCASE("±α mixture has Poisson-mixture populations") {
        const CoherentEnsemble mix({{1.0, 0.5}, {-1.0, 0.5}});
        const auto rho = ensemble_to_density(mix, 30);
        for (int n = 0; n < 8; ++n) {
            const double expected = 0.5 * (poisson_pmf(1.0, n) + poisson_pmf(1.0, n));
            CHECK(rho.mat(n, n).real() == doctest::Approx(expected).epsilon(1e-10));
        }
        // odd coherences cancel between +α and −α
        CHECK(std::abs(rho.mat(0, 1)) < 1e-12);
    }
    SUBCASE("phase-symmetric ring about the origin is diagonal") {
        // rings centred on α=0 have radius x|α| = 0; build an explicit
        // origin-centred ring to exercise the phase symmetry
        std::vector<WeightedAmplitude> members;
        for (int j = 0; j < 16; ++j)
            members.push_back({0.7 * std::polar(1.0, 2.0 * M_PI * j / 16.0), 1.0});
        const auto rho = ensemble_to_density(CoherentEnsemble(members), 25);
        Eigen::MatrixXcd off = rho.mat;
        off.diagonal().setZero();
        // coherences survive only at multiples of the ring order K=16
        for (int m = 0; m < 16; ++m)
            for (int n = 0; n < 16; ++n)
                if (m != n && (m - n) % 16 != 0) CHECK(std::abs(rho.mat(m, n)) < 1e-12);
    }
    SUBCASE("insufficient truncation is rejected") {
        CHECK_THROWS_AS(ensemble_to_density(CoherentEnsemble::single(3.0), 5),
                        std::invalid_argument);
    }
}

TEST_CASE("fidelity_with_coherent") {
    CHECK(fidelity_with_coherent(CoherentEnsemble::single(Complex(0.3, 0.9)),
                                 Complex(0.3, 0.9)) == doctest::Approx(1.0));
    CHECK(fidelity_with_coherent(CoherentEnsemble::single(0.0), 1.0) ==
          doctest::Approx(std::exp(-1.0)));

    // backend equivalence
    const auto ring = ring_ensemble(0.8, 0.5, 64);
    const auto rho = ensemble_to_density(ring, 30);
    CHECK(std::abs(fidelity_with_coherent(ring, 0.8) - fidelity_with_coherent(rho, 0.8)) <
          1e-8);
}

TEST_CASE("quadrature statistics") {
    SUBCASE("single coherent member") {
        const auto s = quadrature_stats(CoherentEnsemble::single(1.0));
        CHECK(s.mean_x == doctest::Approx(std::sqrt(2.0)));
        CHECK(s.mean_p == doctest::Approx(0.0));
        CHECK(s.var_x == doctest::Approx(0.5));
        CHECK(s.var_p == doctest::Approx(0.5));
    }
    SUBCASE("ring variance") {
        // Var(Re(a + b e^{iφ})) = b²/2 over the ring, and X = √2 Re γ,
        // so Var X = 1/2 + b² with b = x|α|.
        const double b = 0.5 * 1.36;
        const auto s = quadrature_stats(ring_ensemble(1.36, 0.5, 256));
        CHECK(s.var_x == doctest::Approx(0.5 + b * b).epsilon(1e-10));
        CHECK(s.var_p == doctest::Approx(0.5 + b * b).epsilon(1e-10));
        CHECK(s.mean_x == doctest::Approx(std::sqrt(2.0) * 1.36).epsilon(1e-12));
    }
}

TEST_CASE("wigner evaluation") {
    SUBCASE("vacuum peak") {
        const auto w = wigner(CoherentEnsemble::single(0.0), GridSpec::square(5.0, 101));
        CHECK(w.values.maxCoeff() == doctest::Approx(1.0 / M_PI));
        const auto [px, pp] = w.peak();
        CHECK(px == doctest::Approx(0.0));
        CHECK(pp == doctest::Approx(0.0));
        CHECK(w.integral() == doctest::Approx(1.0).epsilon(1e-3));
    }
    SUBCASE("coherent state peak at (√2 Re α, √2 Im α)") {
        const auto w = wigner(CoherentEnsemble::single(1.0),
                              GridSpec{-2.0, 4.0, 121, -3.0, 3.0, 121});
        const auto [px, pp] = w.peak();
        CHECK(px == doctest::Approx(std::sqrt(2.0)).epsilon(0.02));
        CHECK(pp == doctest::Approx(0.0));
        CHECK(w.values.maxCoeff() == doctest::Approx(1.0 / M_PI).epsilon(1e-3));
    }
    SUBCASE("ring state normalizes") {
        const auto w = wigner(ring_ensemble(1.93, 0.52, 64), GridSpec::square(6.0, 241));
        CHECK(std::abs(w.integral() - 1.0) < 1e-3);
    }
    SUBCASE("ensemble and Fock backends agree pointwise") {
        const auto ring = ring_ensemble(0.8, 0.5, 16);
        const auto we = wigner(ring, GridSpec::square(4.0, 41));
        const auto wm = wigner(ensemble_to_density(ring, 30), GridSpec::square(4.0, 41));
        CHECK((we.values - wm.values).cwiseAbs().maxCoeff() < 1e-6);
    }
    SUBCASE("X marginal reproduces the quadrature density") {
        const Complex mu(0.9, -0.4);
        const auto w = wigner(CoherentEnsemble::single(mu), GridSpec::square(6.0, 241));
        const double dp = w.p_axis(1) - w.p_axis(0);
        const double mean_x = std::sqrt(2.0) * mu.real();
        for (int i = 40; i < 200; i += 20) {
            const double marginal = w.values.row(i).sum() * dp;
            const double expected =
                std::exp(-(w.x_axis(i) - mean_x) * (w.x_axis(i) - mean_x)) / std::sqrt(M_PI);
            CHECK(std::abs(marginal - expected) < 1e-3);
        }
    }
    SUBCASE("empty grid rejected") {
        CHECK_THROWS_AS(wigner(CoherentEnsemble::single(0.0), GridSpec{0, 1, 0, 0, 1, 5}),
                        std::invalid_argument);
    }
}

TEST_CASE("density matrix invariants maintained by operations") {
    const auto ring = ring_ensemble(1.0, 0.4, 32);
    auto rho = ensemble_to_density(ring, 30);
    rho.validate();
    const auto lossy = loss_channel(rho, 0.63);
    lossy.validate();
    CHECK(fidelity_with_coherent(lossy, 1.0) >= 0.0);
    CHECK(fidelity_with_coherent(lossy, 1.0) <= 1.0);
}
