#include "cloner/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>

namespace cloner {

Eigen::VectorXcd quadrature_projector(double value, double theta, int dim) {
    if (dim < 1) throw std::invalid_argument("quadrature_projector: dim must be >= 1");
    Eigen::VectorXd psi(dim);
    psi(0) = std::pow(M_PI, -0.25) * std::exp(-0.5 * value * value);
    if (dim > 1) psi(1) = std::sqrt(2.0) * value * psi(0);
    for (int n = 2; n < dim; ++n)
        psi(n) = std::sqrt(2.0 / n) * value * psi(n - 1) -
                 std::sqrt(double(n - 1) / n) * psi(n - 2);
    Eigen::VectorXcd out(dim);
    for (int n = 0; n < dim; ++n) out(n) = std::polar(psi(n), n * theta);
    return out;
}

namespace {

struct Bin {
    Eigen::VectorXcd projector;  // |x,θ⟩ at the bin midpoint
    double frequency;            // counts / total
    double measure;              // Δx
};

std::vector<Bin> bin_samples(const QuadratureSampleSet& set, int dim) {
    if (set.samples.empty()) throw std::invalid_argument("maxlik_reconstruct: no samples");
    const auto& b = set.binning;
    if (b.n_theta_bins < 1 || b.n_x_bins < 1)
        throw std::invalid_argument("maxlik_reconstruct: invalid binning");

    double half = b.x_half_range;
    if (half <= 0.0) {
        double mean = 0.0, sq = 0.0;
        for (const auto& s : set.samples) {
            mean += s.value;
            sq += s.value * s.value;
        }
        mean /= set.samples.size();
        const double sigma = std::sqrt(std::max(0.0, sq / set.samples.size() - mean * mean));
        half = std::max(std::abs(mean), 0.0) + 4.0 * sigma;
        for (const auto& s : set.samples) half = std::max(half, std::abs(s.value));
        half *= 1.0 + 1e-9;
    }

    const double dtheta = M_PI / b.n_theta_bins;
    const double dx = 2.0 * half / b.n_x_bins;
    std::map<std::pair<int, int>, std::int64_t> counts;
    std::map<int, bool> theta_seen;
    for (const auto& s : set.samples) {
        double th = std::fmod(s.theta, M_PI);
        if (th < 0.0) th += M_PI;
        int it = std::min(b.n_theta_bins - 1, int(th / dtheta));
        if (std::abs(s.value) >= half) continue;  // outside configured range
        int ix = std::min(b.n_x_bins - 1, int((s.value + half) / dx));
        ++counts[{it, ix}];
        theta_seen[it] = true;
    }
    if (theta_seen.size() < 3)
        throw std::invalid_argument(
            "maxlik_reconstruct: samples must span at least 3 distinct theta bins");

    std::int64_t total = 0;
    for (const auto& [key, c] : counts) total += c;
    std::vector<Bin> bins;
    bins.reserve(counts.size());
    for (const auto& [key, c] : counts) {
        const double theta = (key.first + 0.5) * dtheta;
        const double x = -half + (key.second + 0.5) * dx;
        bins.push_back({quadrature_projector(x, theta, dim), double(c) / double(total), dx});
    }
    return bins;
}

}  // namespace

TomographyResult maxlik_reconstruct(const QuadratureSampleSet& set, int dim,
                                    int max_iters, double tol) {
    const std::vector<Bin> bins = bin_samples(set, dim);
    const int n_bins = static_cast<int>(bins.size());

    // Stack projectors: column j = |x_j,θ_j⟩
    Eigen::MatrixXcd proj(dim, n_bins);
    Eigen::VectorXd freq(n_bins), measure(n_bins);
    for (int j = 0; j < n_bins; ++j) {
        proj.col(j) = bins[j].projector;
        freq(j) = bins[j].frequency;
        measure(j) = bins[j].measure;
    }

    TomographyResult result;
    result.rho.mat =
        Eigen::MatrixXcd::Identity(dim, dim) / double(dim);

    constexpr double kProbFloor = 1e-12;
    double prev_ll = -std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < max_iters; ++iter) {
        // p_j = Δx ⟨x_j|ρ|x_j⟩
        const Eigen::MatrixXcd rho_proj = result.rho.mat * proj;
        Eigen::VectorXd probs(n_bins);
        double ll = 0.0;
        bool floored = false;
        for (int j = 0; j < n_bins; ++j) {
            double p = std::real(proj.col(j).dot(rho_proj.col(j))) * measure(j);
            if (p < kProbFloor) {
                p = kProbFloor;
                floored = true;
            }
            probs(j) = p;
            ll += freq(j) * std::log(p);
        }
        if (floored) ++result.floored_iterations;
        result.log_likelihood_trace.push_back(ll);
        result.iterations_used = iter + 1;
        if (iter > 0 && ll - prev_ll < tol) {
            result.converged = true;
            break;
        }
        prev_ll = ll;

        // R = Σ_j (f_j / p_j) Δx |x_j⟩⟨x_j|
        const Eigen::VectorXd ratio =
            (freq.array() / probs.array() * measure.array()).matrix();
        Eigen::MatrixXcd r_op =
            proj * ratio.asDiagonal() * proj.adjoint();
        Eigen::MatrixXcd next = r_op * result.rho.mat * r_op;
        next = 0.5 * (next + next.adjoint().eval());
        result.rho.mat = next / next.trace().real();
    }
    return result;
}

double fidelity_between(const DensityMatrix& rho_a, const DensityMatrix& rho_b) {
    if (rho_a.dim() != rho_b.dim())
        throw std::invalid_argument("fidelity_between: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es_a(rho_a.mat);
    const Eigen::VectorXd clamped_a = es_a.eigenvalues().cwiseMax(0.0);
    const Eigen::MatrixXcd sqrt_a = es_a.eigenvectors() *
                                    clamped_a.cwiseSqrt().asDiagonal() *
                                    es_a.eigenvectors().adjoint();
    const Eigen::MatrixXcd inner = sqrt_a * rho_b.mat * sqrt_a;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es_i(inner);
    const double root_sum = es_i.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return std::min(1.0, root_sum * root_sum);
}

}  // namespace cloner
