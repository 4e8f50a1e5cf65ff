#include "cloner/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace cloner {

double average_clone_fidelity(const HeraldedOutput& out, Complex alpha) {
    return fidelity_with_coherent(out.clone_ensemble(), alpha);
}

double amplitude_gain(const HeraldedOutput& out, Complex alpha, bool post_tap) {
    if (std::abs(alpha) == 0.0)
        throw std::invalid_argument("amplitude_gain: undefined for alpha = 0");
    const CoherentEnsemble& e = post_tap ? out.post_herald : out.pre_tap_ensemble();
    return std::abs(e.mean_amplitude()) / std::abs(alpha);
}

CovarianceReport covariance_matrix(const HeraldedOutput& out) {
    if (out.config.n_clones != 2)
        throw std::invalid_argument("covariance_matrix: defined for two clones");
    const CoherentEnsemble clones = out.clone_ensemble();
    const double s2 = std::sqrt(2.0);
    double ex = 0.0, ep = 0.0, exx = 0.0, epp = 0.0, exp_ = 0.0;
    for (const auto& m : clones.members()) {
        const double xb = s2 * m.amplitude.real();
        const double pb = s2 * m.amplitude.imag();
        ex += m.weight * xb;
        ep += m.weight * pb;
        exx += m.weight * xb * xb;
        epp += m.weight * pb * pb;
        exp_ += m.weight * xb * pb;
    }
    CovarianceReport r;
    r.cov_x1x2 = exx - ex * ex;
    r.cov_p1p2 = epp - ep * ep;
    r.cov_x1p2 = exp_ - ex * ep;
    r.cov_p1x2 = r.cov_x1p2;
    return r;
}

CovarianceReport covariance_from_joint(const DensityMatrix& joint, int dim) {
    if (joint.dim() != dim * dim)
        throw std::invalid_argument("covariance_from_joint: dimension mismatch");
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    const Eigen::MatrixXcd x_op = (a + a.adjoint()) / std::sqrt(2.0);
    const Eigen::MatrixXcd p_op = (a - a.adjoint()) / Complex(0.0, std::sqrt(2.0));
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);

    auto kron = [dim](const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v) {
        Eigen::MatrixXcd out(dim * dim, dim * dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                out.block(i * dim, j * dim, dim, dim) = u(i, j) * v;
        return out;
    };
    auto expval = [&joint](const Eigen::MatrixXcd& op) {
        return (joint.mat * op).trace().real();
    };

    const double x1 = expval(kron(x_op, id));
    const double x2 = expval(kron(id, x_op));
    const double p1 = expval(kron(p_op, id));
    const double p2 = expval(kron(id, p_op));
    CovarianceReport r;
    r.cov_x1x2 = expval(kron(x_op, x_op)) - x1 * x2;
    r.cov_p1p2 = expval(kron(p_op, p_op)) - p1 * p2;
    r.cov_x1p2 = expval(kron(x_op, p_op)) - x1 * p2;
    r.cov_p1x2 = expval(kron(p_op, x_op)) - p1 * x2;
    return r;
}

double infer_input_amplitude(double p_hd1, double p_hd2, double p_pnrd, double eta_pnrd) {
    if (!(eta_pnrd > 0.0 && eta_pnrd <= 1.0))
        throw std::invalid_argument("infer_input_amplitude: eta_pnrd outside (0,1]");
    if (p_hd1 < 0.0 || p_hd2 < 0.0 || p_pnrd < 0.0)
        throw std::invalid_argument("infer_input_amplitude: negative photon number");
    return std::sqrt(p_hd1 + p_hd2 + p_pnrd / eta_pnrd);
}

double success_probability(const HeraldedOutput& out) {
    if (!out.success_applicable)
        throw std::invalid_argument(
            "success_probability: not defined for the exact-subtraction limit");
    return out.success_probability;
}

}  // namespace cloner
