#include "cloner/states.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cloner {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

CoherentEnsemble::CoherentEnsemble(std::vector<WeightedAmplitude> members)
    : members_(std::move(members)) {
    if (members_.empty()) throw std::invalid_argument("CoherentEnsemble: empty member list");
    double total = 0.0;
    for (const auto& m : members_) {
        if (!finite(m.amplitude) || !std::isfinite(m.weight))
            throw std::invalid_argument("CoherentEnsemble: non-finite member");
        if (m.weight < 0.0) throw std::invalid_argument("CoherentEnsemble: negative weight");
        total += m.weight;
    }
    if (total <= 0.0) throw std::invalid_argument("CoherentEnsemble: zero total weight");
    for (auto& m : members_) m.weight /= total;
}

CoherentEnsemble CoherentEnsemble::single(Complex amplitude) {
    return CoherentEnsemble({{amplitude, 1.0}});
}

Complex CoherentEnsemble::mean_amplitude() const {
    Complex mean = 0.0;
    for (const auto& m : members_) mean += m.weight * m.amplitude;
    return mean;
}

double CoherentEnsemble::max_photon_number() const {
    double mu = 0.0;
    for (const auto& m : members_) mu = std::max(mu, std::norm(m.amplitude));
    return mu;
}

CoherentEnsemble CoherentEnsemble::scaled(double s) const {
    auto ms = members_;
    for (auto& m : ms) m.amplitude *= s;
    return CoherentEnsemble(std::move(ms));
}

CoherentEnsemble CoherentEnsemble::rotated(double theta) const {
    const Complex phase = std::polar(1.0, theta);
    auto ms = members_;
    for (auto& m : ms) m.amplitude *= phase;
    return CoherentEnsemble(std::move(ms));
}

double CoherentEnsemble::weight_entropy() const {
    double h = 0.0;
    for (const auto& m : members_)
        if (m.weight > 0.0) h -= m.weight * std::log(m.weight);
    return h;
}

void DensityMatrix::validate(double herm_tol, double trace_tol, double psd_tol) const {
    if (mat.rows() != mat.cols() || mat.rows() < 1)
        throw std::runtime_error("DensityMatrix: not square");
    if ((mat - mat.adjoint()).cwiseAbs().maxCoeff() > herm_tol)
        throw std::runtime_error("DensityMatrix: not Hermitian");
    if (std::abs(mat.trace().real() - 1.0) > trace_tol || std::abs(mat.trace().imag()) > trace_tol)
        throw std::runtime_error("DensityMatrix: trace != 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -psd_tol)
        throw std::runtime_error("DensityMatrix: negative eigenvalue");
}

double WignerGrid::integral() const {
    if (x_axis.size() < 2 || p_axis.size() < 2) return 0.0;
    const double dx = x_axis(1) - x_axis(0);
    const double dp = p_axis(1) - p_axis(0);
    return values.sum() * dx * dp;
}

std::pair<double, double> WignerGrid::peak() const {
    Eigen::Index i = 0, j = 0;
    values.maxCoeff(&i, &j);
    return {x_axis(i), p_axis(j)};
}

Eigen::VectorXcd coherent_fock(Complex alpha, int dim) {
    if (dim < 1) throw std::invalid_argument("coherent_fock: dim must be >= 1");
    if (!finite(alpha)) throw std::invalid_argument("coherent_fock: non-finite alpha");
    Eigen::VectorXcd c(dim);
    c(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < dim; ++n) c(n) = c(n - 1) * alpha / std::sqrt(double(n));
    return c;
}

double coherent_norm_deficit(Complex alpha, int dim) {
    return std::max(0.0, 1.0 - coherent_fock(alpha, dim).squaredNorm());
}

int default_fock_dim(double max_photon_number) {
    const double mu = std::max(0.0, max_photon_number);
    return static_cast<int>(std::ceil(mu + 6.0 * std::sqrt(mu) + 10.0));
}

Eigen::MatrixXcd displacement_matrix(Complex beta, int dim) {
    if (dim < 1) throw std::invalid_argument("displacement_matrix: dim must be >= 1");
    if (!finite(beta)) throw std::invalid_argument("displacement_matrix: non-finite beta");
    if (std::abs(beta) == 0.0) return Eigen::MatrixXcd::Identity(dim, dim);
    Eigen::MatrixXcd d(dim, dim);
    const double z = std::norm(beta);
    // log-factorials up to dim
    std::vector<double> lg(dim + 1);
    lg[0] = 0.0;
    for (int n = 1; n <= dim; ++n) lg[n] = lg[n - 1] + std::log(double(n));

    const double log_abs_beta = (std::abs(beta) > 0.0) ? std::log(std::abs(beta)) : 0.0;
    const Complex unit = (std::abs(beta) > 0.0) ? beta / std::abs(beta) : Complex(1.0, 0.0);

    for (int n = 0; n < dim; ++n) {
        // Column n, lower triangle m >= n:
        // ⟨m|D(β)|n⟩ = √(n!/m!) β^{m−n} e^{−|β|²/2} L_n^{(m−n)}(|β|²)
        for (int m = n; m < dim; ++m) {
            const int k = m - n;
            // associated Laguerre L_n^{(k)}(z) by forward recurrence
            double l_prev = 1.0, l = 1.0 + k - z;
            if (n == 0) l = 1.0;
            for (int j = 1; j < n; ++j) {
                const double l_next = ((2.0 * j + 1.0 + k - z) * l - (j + k) * l_prev) / (j + 1.0);
                l_prev = l;
                l = l_next;
            }
            const double laguerre = (n == 0) ? 1.0 : l;
            const double log_pref = 0.5 * (lg[n] - lg[m]) + k * log_abs_beta - 0.5 * z;
            const Complex phase = std::pow(unit, k);
            d(m, n) = std::exp(log_pref) * laguerre * phase;
        }
    }
    // Upper triangle from unitarity: D(β)† = D(−β), so
    // ⟨m|D(β)|n⟩ = conj(⟨n|D(−β)|m⟩) = (−1)^{n−m} conj(⟨n|D(β)... handled directly:
    // ⟨m|D(β)|n⟩ for m < n equals √(m!/n!) (−β*)^{n−m} e^{−z/2} L_m^{(n−m)}(z).
    for (int n = 1; n < dim; ++n) {
        for (int m = 0; m < n; ++m) {
            const int k = n - m;
            double l_prev = 1.0, l = 1.0 + k - z;
            if (m == 0) l = 1.0;
            for (int j = 1; j < m; ++j) {
                const double l_next = ((2.0 * j + 1.0 + k - z) * l - (j + k) * l_prev) / (j + 1.0);
                l_prev = l;
                l = l_next;
            }
            const double laguerre = (m == 0) ? 1.0 : l;
            const double log_pref = 0.5 * (lg[m] - lg[n]) + k * log_abs_beta - 0.5 * z;
            const Complex phase = std::pow(-std::conj(unit), k);
            d(m, n) = std::exp(log_pref) * laguerre * phase;
        }
    }
    return d;
}

DensityMatrix loss_channel(const DensityMatrix& rho, double eta) {
    if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("loss_channel: eta outside [0,1]");
    const int dim = rho.dim();
    if (eta == 1.0) return rho;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    // K_k with ⟨m|K_k|n⟩ = δ_{m,n−k} √(C(n,k) η^{n−k} (1−η)^k)
    std::vector<double> lg(dim + 1);
    lg[0] = 0.0;
    for (int n = 1; n <= dim; ++n) lg[n] = lg[n - 1] + std::log(double(n));
    const double log_eta = (eta > 0.0) ? std::log(eta) : 0.0;
    const double log_loss = std::log(1.0 - eta);
    for (int k = 0; k < dim; ++k) {
        Eigen::VectorXd diag(dim - k);
        for (int n = k; n < dim; ++n) {
            double log_c = lg[n] - lg[k] - lg[n - k];
            double log_amp = 0.5 * (log_c + (n - k) * log_eta + k * log_loss);
            if (eta == 0.0 && n != k) {
                diag(n - k) = 0.0;
                continue;
            }
            diag(n - k) = std::exp(log_amp);
        }
        // K ρ K† with K = shift-down by k times diag
        out.topLeftCorner(dim - k, dim - k) +=
            diag.asDiagonal() * rho.mat.block(k, k, dim - k, dim - k) *
            diag.asDiagonal();
    }
    return {out};
}

DensityMatrix ensemble_to_density(const CoherentEnsemble& e, int dim) {
    if (dim < 1) throw std::invalid_argument("ensemble_to_density: dim must be >= 1");
    for (const auto& m : e.members()) {
        if (coherent_norm_deficit(m.amplitude, dim) >= 1e-8)
            throw std::invalid_argument(
                "ensemble_to_density: Fock truncation too small for member amplitude");
    }
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& m : e.members()) {
        const Eigen::VectorXcd c = coherent_fock(m.amplitude, dim);
        rho.noalias() += m.weight * (c * c.adjoint());
    }
    rho /= rho.trace().real();
    return {rho};
}

double fidelity_with_coherent(const CoherentEnsemble& e, Complex alpha) {
    double f = 0.0;
    for (const auto& m : e.members()) f += m.weight * std::exp(-std::norm(alpha - m.amplitude));
    return f;
}

double fidelity_with_coherent(const DensityMatrix& rho, Complex alpha) {
    const Eigen::VectorXcd c = coherent_fock(alpha, rho.dim());
    return std::real(c.dot(rho.mat * c));
}

QuadratureStats quadrature_stats(const CoherentEnsemble& e) {
    const double s2 = std::sqrt(2.0);
    double mx = 0.0, mp = 0.0, mx2 = 0.0, mp2 = 0.0;
    for (const auto& m : e.members()) {
        const double xb = s2 * m.amplitude.real();
        const double pb = s2 * m.amplitude.imag();
        mx += m.weight * xb;
        mp += m.weight * pb;
        mx2 += m.weight * xb * xb;
        mp2 += m.weight * pb * pb;
    }
    return {mx, mp, kVacuumVariance + (mx2 - mx * mx), kVacuumVariance + (mp2 - mp * mp)};
}

namespace {

Eigen::VectorXd linspace(double lo, double hi, int n) {
    if (n < 1) throw std::invalid_argument("wigner: empty grid");
    if (n == 1) return Eigen::VectorXd::Constant(1, lo);
    return Eigen::VectorXd::LinSpaced(n, lo, hi);
}

}  // namespace

WignerGrid wigner(const CoherentEnsemble& e, const GridSpec& grid) {
    WignerGrid g;
    g.x_axis = linspace(grid.x_min, grid.x_max, grid.nx);
    g.p_axis = linspace(grid.p_min, grid.p_max, grid.np);
    g.values = Eigen::MatrixXd::Zero(grid.nx, grid.np);
    const double s2 = std::sqrt(2.0);
    const double inv_pi = 1.0 / M_PI;
    for (const auto& m : e.members()) {
        const double x0 = s2 * m.amplitude.real();
        const double p0 = s2 * m.amplitude.imag();
        for (int i = 0; i < grid.nx; ++i) {
            const double dx2 = (g.x_axis(i) - x0) * (g.x_axis(i) - x0);
            for (int j = 0; j < grid.np; ++j) {
                const double dp2 = (g.p_axis(j) - p0) * (g.p_axis(j) - p0);
                g.values(i, j) += m.weight * inv_pi * std::exp(-dx2 - dp2);
            }
        }
    }
    return g;
}

WignerGrid wigner(const DensityMatrix& rho, const GridSpec& grid) {
    WignerGrid g;
    g.x_axis = linspace(grid.x_min, grid.x_max, grid.nx);
    g.p_axis = linspace(grid.p_min, grid.p_max, grid.np);
    g.values = Eigen::MatrixXd::Zero(grid.nx, grid.np);
    const int dim = rho.dim();
    // W(x,p) = (1/π) tr(Π ρ D(2α)), α = (x+ip)/√2, Π = parity.
    Eigen::MatrixXcd parity_rho = rho.mat;
    for (int m = 0; m < dim; ++m)
        if (m % 2 == 1) parity_rho.row(m) *= -1.0;
    const double inv_pi = 1.0 / M_PI;
    for (int i = 0; i < grid.nx; ++i) {
        for (int j = 0; j < grid.np; ++j) {
            const Complex alpha(g.x_axis(i) / std::sqrt(2.0), g.p_axis(j) / std::sqrt(2.0));
            const Eigen::MatrixXcd d = displacement_matrix(2.0 * alpha, dim);
            g.values(i, j) = inv_pi * (parity_rho * d).trace().real();
        }
    }
    return g;
}

}  // namespace cloner
