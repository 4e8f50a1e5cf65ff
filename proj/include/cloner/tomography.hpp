#pragma once

#include <vector>

#include "cloner/states.hpp"

// Iterative maximum-likelihood (RρR) reconstruction of a single-mode
// density matrix from (θ, x) homodyne samples.

namespace cloner {

struct QuadratureSample {
    double theta;
    double value;
};

struct BinningSpec {
    int n_theta_bins = 30;
    int n_x_bins = 100;
    // Half-width of the x range; 0 means auto (±4σ of the observed values).
    double x_half_range = 0.0;
};

struct QuadratureSampleSet {
    std::vector<QuadratureSample> samples;
    BinningSpec binning;
};

struct TomographyResult {
    DensityMatrix rho;
    std::vector<double> log_likelihood_trace;  // mean log-likelihood per sample
    int iterations_used = 0;
    bool converged = false;
    int floored_iterations = 0;  // iterations where some p_j hit the 1e-12 floor
};

// ⟨n|x,θ⟩ = e^{inθ} ψ_n(x), ψ_n the Hermite–Gauss functions normalized to
// ∫ψ_n² dx = 1 (vacuum variance 1/2).
Eigen::VectorXcd quadrature_projector(double value, double theta, int dim);

TomographyResult maxlik_reconstruct(const QuadratureSampleSet& set, int dim,
                                    int max_iters = 2000, double tol = 1e-9);

// Uhlmann fidelity (tr √(√ρ_a ρ_b √ρ_a))².
double fidelity_between(const DensityMatrix& rho_a, const DensityMatrix& rho_b);

}  // namespace cloner
