#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

// Single-mode bosonic states in two interchangeable representations:
// weighted mixtures of coherent amplitudes (exact, cheap) and truncated
// Fock-space density matrices (brute force, used as an oracle).
//
// Quadrature convention, fixed for the whole library:
//   X = (a + a†)/√2,  P = (a − a†)/(i√2),  vacuum variance 1/2.
// For a coherent amplitude μ: ⟨X⟩ = √2 Re μ, ⟨P⟩ = √2 Im μ.

namespace cloner {

using Complex = std::complex<double>;

inline constexpr double kVacuumVariance = 0.5;

struct WeightedAmplitude {
    Complex amplitude;
    double weight;
};

// Normalized mixture of coherent states. Weights are clamped to be
// non-negative and renormalized to sum to one on construction.
class CoherentEnsemble {
public:
    explicit CoherentEnsemble(std::vector<WeightedAmplitude> members);

    static CoherentEnsemble single(Complex amplitude);

    const std::vector<WeightedAmplitude>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }

    Complex mean_amplitude() const;
    // max over members of |γ|²
    double max_photon_number() const;
    // Same mixture with every amplitude multiplied by s.
    CoherentEnsemble scaled(double s) const;
    // Same mixture rotated in phase space: γ → γ e^{iθ}.
    CoherentEnsemble rotated(double theta) const;
    // Shannon entropy of the weight distribution (nats).
    double weight_entropy() const;

private:
    std::vector<WeightedAmplitude> members_;
};

struct DensityMatrix {
    Eigen::MatrixXcd mat;

    int dim() const { return static_cast<int>(mat.rows()); }
    // Throws std::runtime_error if Hermiticity, unit trace or positivity
    // are violated beyond tolerance.
    void validate(double herm_tol = 1e-10, double trace_tol = 1e-10,
                  double psd_tol = 1e-9) const;
};

struct GridSpec {
    double x_min, x_max;
    int nx;
    double p_min, p_max;
    int np;

    static GridSpec square(double half_width, int n) {
        return {-half_width, half_width, n, -half_width, half_width, n};
    }
};

struct WignerGrid {
    Eigen::VectorXd x_axis;
    Eigen::VectorXd p_axis;
    // values(i, j) = W(x_axis[i], p_axis[j])
    Eigen::MatrixXd values;

    double integral() const;
    // (x, p) of the maximum cell.
    std::pair<double, double> peak() const;
};

struct QuadratureStats {
    double mean_x, mean_p, var_x, var_p;
};

// Fock coefficients of |α⟩ truncated to dim entries.
Eigen::VectorXcd coherent_fock(Complex alpha, int dim);

// 1 − Σ_{n<dim} |⟨n|α⟩|², the probability mass lost to truncation.
double coherent_norm_deficit(Complex alpha, int dim);

// Truncation rule dim = ceil(μ + 6√μ + 10) keeping the Poisson tail < 1e-8,
// μ the largest mean photon number that must be represented.
int default_fock_dim(double max_photon_number);

// ⟨m|D(β)|n⟩ on the truncated space via the associated-Laguerre closed form.
Eigen::MatrixXcd displacement_matrix(Complex beta, int dim);

// Photon loss with transmissivity eta (generalized Kraus map).
DensityMatrix loss_channel(const DensityMatrix& rho, double eta);

// Σ wᵢ |γᵢ⟩⟨γᵢ| in the truncated basis, renormalized to unit trace.
// Requires every member's truncation deficit < 1e-8.
DensityMatrix ensemble_to_density(const CoherentEnsemble& e, int dim);

// ⟨α|ρ|α⟩ (for ensembles: Σ wᵢ e^{−|α−γᵢ|²}).
double fidelity_with_coherent(const CoherentEnsemble& e, Complex alpha);
double fidelity_with_coherent(const DensityMatrix& rho, Complex alpha);

QuadratureStats quadrature_stats(const CoherentEnsemble& e);

WignerGrid wigner(const CoherentEnsemble& e, const GridSpec& grid);
WignerGrid wigner(const DensityMatrix& rho, const GridSpec& grid);

}  // namespace cloner
