#pragma once

#include "cloner/channel.hpp"

// Figures of merit: average clone fidelity, amplitude gain, success
// probability, the two-clone covariance matrix and the deterministic
// benchmarks used for comparison.

namespace cloner {

struct CovarianceReport {
    double cov_x1x2 = 0.0;
    double cov_p1p2 = 0.0;
    double cov_x1p2 = 0.0;
    double cov_p1x2 = 0.0;
};

namespace benchmarks {
// Deterministic Gaussian cloning fidelity bound.
inline constexpr double kGaussianFidelity = 2.0 / 3.0;
// Best known deterministic phase-covariant scheme.
inline constexpr double kPhaseFidelity = 0.85;
// Added covariance of the deterministic Gaussian cloner (one vacuum unit).
inline constexpr double kGaussianCovariance = 0.5;
}  // namespace benchmarks

// F = mean over clones of ⟨α|ρ_clone|α⟩; the model's clones are identical.
double average_clone_fidelity(const HeraldedOutput& out, Complex alpha);

// |mean post-herald amplitude| / |α| on the amplified mode. By default the
// tap transmission is divided out, so the ideal weak-state single-photon
// subtraction gives gain 2; post_tap = true reports the gain including the
// tap loss.
double amplitude_gain(const HeraldedOutput& out, Complex alpha, bool post_tap = false);

// Quadrature covariances between the two clones. The clones share the ring
// mixing variable, so for a mixture of product coherent states
// Cov(A1, B2) = E[Ā B̄] − E[Ā] E[B̄] over the per-member clone means;
// cross-mode vacuum terms vanish.
CovarianceReport covariance_matrix(const HeraldedOutput& out);

// Two-clone covariances from second moments of a joint Fock-space state.
CovarianceReport covariance_from_joint(const DensityMatrix& joint, int dim);

// |α| inferred from the mean photon numbers measured at the two homodyne
// stations and the tap detector: |α|² = p_hd1 + p_hd2 + p_pnrd/η.
double infer_input_amplitude(double p_hd1, double p_hd2, double p_pnrd, double eta_pnrd);

double success_probability(const HeraldedOutput& out);

}  // namespace cloner
