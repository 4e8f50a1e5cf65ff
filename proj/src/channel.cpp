#include "cloner/channel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cloner {

void DetectorModel::validate() const {
    if (!(efficiency >= 0.0 && efficiency <= 1.0))
        throw std::invalid_argument("DetectorModel: efficiency outside [0,1]");
    if (!(dark_mean >= 0.0)) throw std::invalid_argument("DetectorModel: negative dark_mean");
}

void ClonerConfig::validate() const {
    detector.validate();
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
        throw std::invalid_argument("ClonerConfig: non-finite alpha");
    if (!(x >= 0.0) || !std::isfinite(x * std::abs(alpha)))
        throw std::invalid_argument("ClonerConfig: invalid displacement ratio x");
    if (threshold < 0) throw std::invalid_argument("ClonerConfig: negative threshold");
    if (!(tap_reflectivity >= 0.0 && tap_reflectivity < 1.0))
        throw std::invalid_argument("ClonerConfig: tap_reflectivity outside [0,1)");
    if (n_clones < 2) throw std::invalid_argument("ClonerConfig: n_clones must be >= 2");
    if (ring_points < 8) throw std::invalid_argument("ClonerConfig: ring_points must be >= 8");
}

CoherentEnsemble HeraldedOutput::clone_ensemble() const {
    const double tap_t = std::sqrt(1.0 - config.tap_reflectivity);
    return post_herald.scaled(clone_scale / tap_t);
}

CoherentEnsemble HeraldedOutput::pre_tap_ensemble() const {
    const double tap_t = std::sqrt(1.0 - config.tap_reflectivity);
    return post_herald.scaled(1.0 / tap_t);
}

CoherentEnsemble ring_ensemble(Complex alpha, double x, int ring_points) {
    if (ring_points < 1) throw std::invalid_argument("ring_ensemble: ring_points must be >= 1");
    const double radius = x * std::abs(alpha);
    std::vector<WeightedAmplitude> members;
    members.reserve(ring_points);
    const double w = 1.0 / ring_points;
    for (int j = 0; j < ring_points; ++j) {
        const double phi = 2.0 * M_PI * j / ring_points;
        members.push_back({alpha + radius * std::polar(1.0, phi), w});
    }
    return CoherentEnsemble(std::move(members));
}

double poisson_tail(double mean, int m) {
    if (mean < 0.0) throw std::invalid_argument("poisson_tail: negative mean");
    if (m <= 0) return 1.0;
    if (mean == 0.0) return 0.0;
    if (mean < 700.0) {
        // complemented lower sum; pmf recurrence from n = 0
        double pmf = std::exp(-mean);
        double cdf = pmf;
        for (int n = 1; n < m; ++n) {
            pmf *= mean / n;
            cdf += pmf;
        }
        return std::max(0.0, 1.0 - cdf);
    }
    // log-space lower sum for very large means
    double log_sum = -std::numeric_limits<double>::infinity();
    double log_pmf = -mean;
    for (int n = 0; n < m; ++n) {
        if (n > 0) log_pmf += std::log(mean) - std::log(double(n));
        log_sum = std::max(log_sum, log_pmf) +
                  std::log1p(std::exp(std::min(log_sum, log_pmf) - std::max(log_sum, log_pmf)));
    }
    return std::max(0.0, -std::expm1(log_sum));
}

double herald_weight(Complex gamma, const ClonerConfig& cfg) {
    const double mean = cfg.detector.efficiency * cfg.tap_reflectivity * std::norm(gamma) +
                        cfg.detector.dark_mean;
    return poisson_tail(mean, cfg.threshold);
}

HeraldedOutput apply_cloner(const ClonerConfig& cfg) {
    cfg.validate();
    const CoherentEnsemble ring = ring_ensemble(cfg.alpha, cfg.x, cfg.ring_points);
    const double tap_t = std::sqrt(1.0 - cfg.tap_reflectivity);

    double success = 0.0;
    std::vector<WeightedAmplitude> post;
    post.reserve(ring.size());
    for (const auto& m : ring.members()) {
        const double w = herald_weight(m.amplitude, cfg);
        success += m.weight * w;
        post.push_back({tap_t * m.amplitude, m.weight * w});
    }
    if (success <= 0.0)
        throw std::runtime_error("apply_cloner: unheraldable configuration (success probability 0)");

    return {CoherentEnsemble(std::move(post)),
            std::sqrt((1.0 - cfg.tap_reflectivity) / cfg.n_clones),
            success,
            true,
            cfg};
}

HeraldedOutput exact_subtraction_cloner(const ClonerConfig& cfg, int m_subtracted) {
    cfg.validate();
    if (m_subtracted < 1)
        throw std::invalid_argument("exact_subtraction_cloner: m must be >= 1");
    const CoherentEnsemble ring = ring_ensemble(cfg.alpha, cfg.x, cfg.ring_points);
    const double tap_t = std::sqrt(1.0 - cfg.tap_reflectivity);

    std::vector<WeightedAmplitude> post;
    post.reserve(ring.size());
    double total = 0.0;
    for (const auto& m : ring.members()) {
        const double w = m.weight * std::pow(std::norm(m.amplitude), m_subtracted);
        total += w;
        post.push_back({tap_t * m.amplitude, w});
    }
    if (total <= 0.0)
        throw std::runtime_error("exact_subtraction_cloner: all ring amplitudes are zero");

    return {CoherentEnsemble(std::move(post)),
            std::sqrt((1.0 - cfg.tap_reflectivity) / cfg.n_clones),
            std::numeric_limits<double>::quiet_NaN(),
            false,
            cfg};
}

namespace {

// U with U a† U† = a† cosθ + b† sinθ, so |γ⟩|0⟩ → |γ cosθ⟩|γ sinθ⟩.
Eigen::MatrixXcd beamsplitter_unitary(int dim, double theta) {
    const int d2 = dim * dim;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);

    auto kron = [dim, d2](const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v) {
        Eigen::MatrixXcd out(d2, d2);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                out.block(i * dim, j * dim, dim, dim) = u(i, j) * v;
        return out;
    };

    const Eigen::MatrixXcd a_op = kron(a, id);
    const Eigen::MatrixXcd b_op = kron(id, a);
    // generator A = a b† − a† b; U = exp(θ A) = exp(−iθ H), H = iA Hermitian
    const Eigen::MatrixXcd h =
        Complex(0.0, 1.0) * (a_op * b_op.adjoint() - a_op.adjoint() * b_op);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::VectorXcd phases =
        (Complex(0.0, -theta) * es.eigenvalues().cast<Complex>()).array().exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// I ⊗ K_k for the binomial loss channel on the second mode.
Eigen::MatrixXcd tap_loss_kraus(int dim, int k, double eta) {
    Eigen::MatrixXcd kk = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = k; n < dim; ++n) {
        double log_c = 0.0;
        for (int j = 0; j < k; ++j) log_c += std::log(double(n - j)) - std::log(double(j + 1));
        double amp;
        if (eta == 0.0)
            amp = (n == k) ? std::exp(0.5 * log_c) * std::pow(1.0 - eta, 0.5 * k) : 0.0;
        else
            amp = std::exp(0.5 * (log_c + (n - k) * std::log(eta) + k * std::log(1.0 - eta)));
        kk(n - k, n) = amp;
    }
    const int d2 = dim * dim;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d2, d2);
    for (int i = 0; i < dim; ++i) out.block(i * dim, i * dim, dim, dim) = kk;
    return out;
}

}  // namespace

DensityMatrix partial_trace_second(const DensityMatrix& joint, int dim) {
    if (joint.dim() != dim * dim)
        throw std::invalid_argument("partial_trace_second: dimension mismatch");
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            for (int b = 0; b < dim; ++b) out(i, j) += joint.mat(i * dim + b, j * dim + b);
    return {out};
}

DensityMatrix partial_trace_first(const DensityMatrix& joint, int dim) {
    if (joint.dim() != dim * dim)
        throw std::invalid_argument("partial_trace_first: dimension mismatch");
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            for (int a = 0; a < dim; ++a) out(i, j) += joint.mat(a * dim + i, a * dim + j);
    return {out};
}

FockOracleResult fock_oracle_cloner(const ClonerConfig& cfg, int dim) {
    cfg.validate();
    if (cfg.n_clones != 2)
        throw std::invalid_argument("fock_oracle_cloner: only two clones supported");
    if (dim < 2) throw std::invalid_argument("fock_oracle_cloner: dim too small");

    // Ring mixture assembled from explicit displacement matrices.
    const double radius = cfg.x * std::abs(cfg.alpha);
    const Eigen::VectorXcd input = coherent_fock(cfg.alpha, dim);
    Eigen::MatrixXcd rho_ring = Eigen::MatrixXcd::Zero(dim, dim);
    for (int j = 0; j < cfg.ring_points; ++j) {
        const double phi = 2.0 * M_PI * j / cfg.ring_points;
        const Eigen::MatrixXcd d = displacement_matrix(radius * std::polar(1.0, phi), dim);
        const Eigen::VectorXcd psi = d * input;
        rho_ring.noalias() += (1.0 / cfg.ring_points) * (psi * psi.adjoint());
    }
    const double trace = rho_ring.trace().real();
    if (1.0 - trace > 1e-6)
        throw std::runtime_error("fock_oracle_cloner: truncation deficit exceeds 1e-6");
    rho_ring /= trace;

    const int d2 = dim * dim;
    // signal ⊗ tap, tap starts in vacuum
    Eigen::MatrixXcd sigma = Eigen::MatrixXcd::Zero(d2, d2);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) sigma(i * dim, j * dim) = rho_ring(i, j);

    const double theta_tap = std::asin(std::sqrt(cfg.tap_reflectivity));
    if (theta_tap > 0.0) {
        const Eigen::MatrixXcd u = beamsplitter_unitary(dim, theta_tap);
        sigma = u * sigma * u.adjoint();
    }

    if (cfg.detector.efficiency < 1.0) {
        Eigen::MatrixXcd lossy = Eigen::MatrixXcd::Zero(d2, d2);
        for (int k = 0; k < dim; ++k) {
            const Eigen::MatrixXcd kr = tap_loss_kraus(dim, k, cfg.detector.efficiency);
            lossy.noalias() += kr * sigma * kr.adjoint();
        }
        sigma = lossy;
    }

    // Herald: accept tap count n with probability P(n + darks >= M).
    Eigen::VectorXd accept(dim);
    for (int n = 0; n < dim; ++n) {
        const int remaining = cfg.threshold - n;
        accept(n) = (remaining <= 0) ? 1.0 : poisson_tail(cfg.detector.dark_mean, remaining);
    }
    Eigen::MatrixXcd heralded = Eigen::MatrixXcd::Zero(d2, d2);
    for (int i = 0; i < d2; ++i) {
        const double wi = accept(i % dim);
        if (wi == 0.0) continue;
        // POVM diagonal in tap number: keep only matching tap blocks
        for (int j = 0; j < d2; ++j)
            if (i % dim == j % dim) heralded(i, j) = wi * sigma(i, j);
    }
    const double success = heralded.trace().real();
    if (success <= 0.0)
        throw std::runtime_error("fock_oracle_cloner: unheraldable configuration");
    heralded /= success;

    const DensityMatrix rho_heralded = partial_trace_second({heralded}, dim);

    // Symmetric split of the heralded mode into two clones.
    Eigen::MatrixXcd tau = Eigen::MatrixXcd::Zero(d2, d2);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) tau(i * dim, j * dim) = rho_heralded.mat(i, j);
    const Eigen::MatrixXcd u_split = beamsplitter_unitary(dim, M_PI / 4.0);
    tau = u_split * tau * u_split.adjoint();

    DensityMatrix joint{tau};
    DensityMatrix clone = partial_trace_second(joint, dim);
    return {std::move(clone), std::move(joint), success};
}

}  // namespace cloner
